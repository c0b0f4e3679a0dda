#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "disco/metric_space.hpp"

namespace disco {

/// Ordered point sequence. An eps-chain has every consecutive gap strictly
/// below eps; a loop has equal first and last points. The size (step count)
/// of a chain with k points is k-1; `points.size()` is k.
struct Chain {
    std::vector<PointId> points;

    Chain() = default;
    Chain(std::initializer_list<PointId> init) : points(init) {}
    explicit Chain(std::vector<PointId> pts) : points(std::move(pts)) {}

    std::size_t count() const noexcept { return points.size(); }
    /// Number of steps (point count minus one).
    std::size_t steps() const noexcept { return points.empty() ? 0 : points.size() - 1; }
    PointId front() const { return points.front(); }
    PointId back() const { return points.back(); }
    bool is_loop() const { return !points.empty() && points.front() == points.back(); }

    friend bool operator==(const Chain&, const Chain&) = default;
};

struct BasicMove {
    enum class Kind { Insert, Remove };
    Kind kind;
    std::size_t position;
    PointId point = 0;  // meaningful for Insert only

    static BasicMove insert(std::size_t pos, PointId p) { return {Kind::Insert, pos, p}; }
    static BasicMove remove(std::size_t pos) { return {Kind::Remove, pos, 0}; }

    friend bool operator==(const BasicMove&, const BasicMove&) = default;
};

/// A checkable eps-homotopy: a start chain and the basic moves applied to it.
struct Homotopy {
    Chain start;
    std::vector<BasicMove> moves;
    double scale = 0.0;

    friend bool operator==(const Homotopy&, const Homotopy&) = default;
};

struct VerifyResult {
    bool ok = true;
    /// Index of the first illegal move; npos when the start chain itself fails.
    std::size_t failing_move = npos;
    double violated_gap = 0.0;
    std::string reason;

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    explicit operator bool() const noexcept { return ok; }
};

/// Returned by excess() for chains with a single point.
inline constexpr double kUnboundedExcess = std::numeric_limits<double>::infinity();

bool is_eps_chain(const Chain& chain, const FiniteMetricSpace& space, double eps);
/// First index i with d(x_i, x_{i+1}) >= eps, if any.
std::optional<std::size_t> first_gap_violation(const Chain& chain, const FiniteMetricSpace& space,
                                               double eps);

double length(const Chain& chain, const FiniteMetricSpace& space);
double excess(const Chain& chain, const FiniteMetricSpace& space, double eps);
double deviation(const Chain& alpha, const Chain& beta, const FiniteMetricSpace& space);

Chain reverse(const Chain& alpha);
/// Requires alpha.back() == beta.front(); the junction point appears once.
Chain concat(const Chain& alpha, const Chain& beta);

/// Applies a single move; throws std::out_of_range on a bad position.
void apply_move(std::vector<PointId>& points, const BasicMove& move);
/// Final chain of a homotopy (no legality check).
Chain apply(const Homotopy& h);

/// True iff every intermediate chain is an eps-chain with the endpoints of
/// the start chain. Insertions are allowed at positions 1..count-1 and
/// removals at 1..count-1; removing the last point is legal only when it
/// duplicates its predecessor, so endpoints never change.
VerifyResult verify_homotopy(const Homotopy& h, const FiniteMetricSpace& space);

/// Records basic moves while checking each one. Library code builds every
/// certificate through this class, so an illegal move is a logic error.
class HomotopyBuilder {
public:
    HomotopyBuilder(const FiniteMetricSpace& space, Chain start, double eps);

    void insert(std::size_t pos, PointId p);
    void remove(std::size_t pos);
    /// Replays `sub` (a homotopy of the sub-chain starting at `offset`).
    void embed(const Homotopy& sub, std::size_t offset);

    bool can_insert(std::size_t pos, PointId p) const;
    bool can_remove(std::size_t pos) const;

    const std::vector<PointId>& current() const noexcept { return current_; }
    std::size_t move_count() const noexcept { return moves_.size(); }
    double scale() const noexcept { return eps_; }
    const FiniteMetricSpace& space() const noexcept { return *space_; }

    Homotopy finish() const;
    Chain current_chain() const { return Chain(current_); }

private:
    const FiniteMetricSpace* space_;
    Chain start_;
    double eps_;
    std::vector<PointId> current_;
    std::vector<BasicMove> moves_;
};

/// Explicit homotopy from alpha to beta when deviation(alpha, beta) is below
/// half the excess of alpha. Throws PreconditionViolated otherwise.
Homotopy close_homotopy(const Chain& alpha, const Chain& beta, const FiniteMetricSpace& space, double eps);

/// floor(2L/eps + 1): the step count of a normalized chain.
std::size_t normal_steps(double budget, double eps);

struct NormalizeResult {
    Chain chain;
    Homotopy certificate;
};

/// Deletes interior points x_i with d(x_{i-1},x_i)+d(x_i,x_{i+1}) < eps
/// (leftmost first), then pads by repeating the first point until the chain
/// has exactly normal_steps(budget, eps) steps.
NormalizeResult normalize(const Chain& chain, const FiniteMetricSpace& space, double eps, double budget);

struct RefineResult {
    Chain chain;
    /// Largest midpoint deviation over all inserted points.
    double deviation = 0.0;
    /// Present when the input is an eps-chain at the requested scale.
    std::optional<Homotopy> certificate;
};

/// Inserts an approximate midpoint between every consecutive pair.
RefineResult midpoint_refine(const Chain& chain, const FiniteMetricSpace& space, double eps, double tol);

struct RotateResult {
    /// Loop based at x_shift.
    Chain rotated;
    /// Chain from x_0 to x_shift along the loop.
    Chain conjugator;
    /// Homotopy from the loop to conjugator * rotated * reverse(conjugator).
    Homotopy witness;
};

RotateResult rotate(const Chain& loop, std::ptrdiff_t shift, const FiniteMetricSpace& space, double eps);

}  // namespace disco
