#include "disco/chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace disco {

bool is_eps_chain(const Chain& chain, const FiniteMetricSpace& space, double eps) {
    return !chain.points.empty() && !first_gap_violation(chain, space, eps);
}

std::optional<std::size_t> first_gap_violation(const Chain& chain, const FiniteMetricSpace& space,
                                               double eps) {
    for (std::size_t i = 0; i + 1 < chain.points.size(); ++i)
        if (!(space(chain.points[i], chain.points[i + 1]) < eps)) return i;
    return std::nullopt;
}

double length(const Chain& chain, const FiniteMetricSpace& space) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < chain.points.size(); ++i)
        total += space(chain.points[i], chain.points[i + 1]);
    return total;
}

double excess(const Chain& chain, const FiniteMetricSpace& space, double eps) {
    if (auto bad = first_gap_violation(chain, space, eps))
        throw NotAnEpsilonChain(*bad, space(chain.points[*bad], chain.points[*bad + 1]));
    double slack = kUnboundedExcess;
    for (std::size_t i = 0; i + 1 < chain.points.size(); ++i)
        slack = std::min(slack, eps - space(chain.points[i], chain.points[i + 1]));
    return slack;
}

double deviation(const Chain& alpha, const Chain& beta, const FiniteMetricSpace& space) {
    if (alpha.count() != beta.count()) {
        throw Error("SizeMismatch", "chains have " + std::to_string(alpha.count()) + " and " +
                                        std::to_string(beta.count()) + " points");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < alpha.count(); ++i)
        worst = std::max(worst, space(alpha.points[i], beta.points[i]));
    return worst;
}

Chain reverse(const Chain& alpha) {
    return Chain(std::vector<PointId>(alpha.points.rbegin(), alpha.points.rend()));
}

Chain concat(const Chain& alpha, const Chain& beta) {
    if (alpha.points.empty() || beta.points.empty() || alpha.back() != beta.front())
        throw Error("EndpointMismatch", "concatenation needs alpha to end where beta starts");
    Chain out = alpha;
    out.points.insert(out.points.end(), beta.points.begin() + 1, beta.points.end());
    return out;
}

void apply_move(std::vector<PointId>& points, const BasicMove& move) {
    if (move.kind == BasicMove::Kind::Insert) {
        if (move.position > points.size()) throw std::out_of_range("insert position");
        points.insert(points.begin() + static_cast<std::ptrdiff_t>(move.position), move.point);
    } else {
        if (move.position >= points.size()) throw std::out_of_range("remove position");
        points.erase(points.begin() + static_cast<std::ptrdiff_t>(move.position));
    }
}

Chain apply(const Homotopy& h) {
    std::vector<PointId> pts = h.start.points;
    for (const auto& m : h.moves) apply_move(pts, m);
    return Chain(std::move(pts));
}

namespace {

// Shared legality rule. Returns empty string when legal, else a reason;
// `gap` receives the offending distance.
std::string check_move(const std::vector<PointId>& c, const BasicMove& m, const FiniteMetricSpace& space,
                       double eps, double& gap) {
    const std::size_t k = c.size();
    gap = 0.0;
    if (m.kind == BasicMove::Kind::Insert) {
        if (m.point >= space.size()) return "inserted point out of range";
        if (m.position == 0 || m.position > k) return "insert position outside 1..count";
        if (m.position == k && m.point != c.back()) return "insert would change the last endpoint";
        const double left = space(c[m.position - 1], m.point);
        if (!(left < eps)) {
            gap = left;
            return "inserted point too far from its left neighbour";
        }
        if (m.position < k) {
            const double right = space(m.point, c[m.position]);
            if (!(right < eps)) {
                gap = right;
                return "inserted point too far from its right neighbour";
            }
        }
        return {};
    }
    if (m.position == 0 || m.position >= k) return "remove position outside 1..count-1";
    if (m.position == k - 1) {
        return c[k - 2] == c[k - 1] ? std::string{} : "remove would change the last endpoint";
    }
    const double bridged = space(c[m.position - 1], c[m.position + 1]);
    if (!(bridged < eps)) {
        gap = bridged;
        return "removal leaves a gap at or above the scale";
    }
    return {};
}

}  // namespace

VerifyResult verify_homotopy(const Homotopy& h, const FiniteMetricSpace& space) {
    VerifyResult result;
    if (h.start.points.empty()) {
        result.ok = false;
        result.reason = "empty start chain";
        return result;
    }
    for (auto p : h.start.points) {
        if (p >= space.size()) {
            result.ok = false;
            result.reason = "start point out of range";
            return result;
        }
    }
    if (auto bad = first_gap_violation(h.start, space, h.scale)) {
        result.ok = false;
        result.violated_gap = space(h.start.points[*bad], h.start.points[*bad + 1]);
        result.reason = "start is not an eps-chain";
        return result;
    }
    std::vector<PointId> c = h.start.points;
    for (std::size_t i = 0; i < h.moves.size(); ++i) {
        double gap = 0.0;
        std::string reason = check_move(c, h.moves[i], space, h.scale, gap);
        if (!reason.empty()) {
            result.ok = false;
            result.failing_move = i;
            result.violated_gap = gap;
            result.reason = std::move(reason);
            return result;
        }
        apply_move(c, h.moves[i]);
    }
    return result;
}

// HomotopyBuilder ------------------------------------------------------------

HomotopyBuilder::HomotopyBuilder(const FiniteMetricSpace& space, Chain start, double eps)
    : space_(&space), start_(std::move(start)), eps_(eps), current_(start_.points) {
    if (current_.empty()) throw std::logic_error("homotopy needs a nonempty start chain");
}

bool HomotopyBuilder::can_insert(std::size_t pos, PointId p) const {
    double gap = 0.0;
    return check_move(current_, BasicMove::insert(pos, p), *space_, eps_, gap).empty();
}

bool HomotopyBuilder::can_remove(std::size_t pos) const {
    double gap = 0.0;
    return check_move(current_, BasicMove::remove(pos), *space_, eps_, gap).empty();
}

void HomotopyBuilder::insert(std::size_t pos, PointId p) {
    const auto move = BasicMove::insert(pos, p);
    double gap = 0.0;
    if (auto reason = check_move(current_, move, *space_, eps_, gap); !reason.empty())
        throw std::logic_error("illegal insertion: " + reason);
    apply_move(current_, move);
    moves_.push_back(move);
}

void HomotopyBuilder::remove(std::size_t pos) {
    const auto move = BasicMove::remove(pos);
    double gap = 0.0;
    if (auto reason = check_move(current_, move, *space_, eps_, gap); !reason.empty())
        throw std::logic_error("illegal removal: " + reason);
    apply_move(current_, move);
    moves_.push_back(move);
}

void HomotopyBuilder::embed(const Homotopy& sub, std::size_t offset) {
    for (const auto& m : sub.moves) {
        if (m.kind == BasicMove::Kind::Insert)
            insert(m.position + offset, m.point);
        else
            remove(m.position + offset);
    }
}

Homotopy HomotopyBuilder::finish() const { return Homotopy{start_, moves_, eps_}; }

// Constructive homotopies ------------------------------------------------------

Homotopy close_homotopy(const Chain& alpha, const Chain& beta, const FiniteMetricSpace& space, double eps) {
    const double dev = deviation(alpha, beta, space);
    const double slack = excess(alpha, space, eps);
    if (alpha.points.empty() || alpha.front() != beta.front() || alpha.back() != beta.back())
        throw Error("EndpointMismatch", "close homotopy needs shared endpoints");
    if (!(dev < slack / 2.0)) {
        throw Error("PreconditionViolated", "deviation " + std::to_string(dev) +
                                                " is not below half the excess " +
                                                std::to_string(slack / 2.0));
    }
    HomotopyBuilder b(space, alpha, eps);
    // The prefix up to i has already been replaced by beta.
    for (std::size_t i = 1; i + 1 < alpha.count(); ++i) {
        const PointId x = alpha.points[i];
        const PointId y = beta.points[i];
        if (x == y) continue;
        b.insert(i, x);      // x, x
        b.insert(i + 1, y);  // x, y, x
        b.remove(i);         // y, x
        b.remove(i + 1);     // y, x_{i+1}
    }
    return b.finish();
}

std::size_t normal_steps(double budget, double eps) {
    return static_cast<std::size_t>(std::floor(2.0 * budget / eps + 1.0));
}

NormalizeResult normalize(const Chain& chain, const FiniteMetricSpace& space, double eps, double budget) {
    if (auto bad = first_gap_violation(chain, space, eps))
        throw NotAnEpsilonChain(*bad, space(chain.points[*bad], chain.points[*bad + 1]));
    if (chain.points.empty()) throw Error("EmptyChain", "cannot normalize an empty chain");
    if (length(chain, space) > budget) throw Error("LengthBudgetExceeded", "chain is longer than the budget");
    const std::size_t target = normal_steps(budget, eps);

    HomotopyBuilder b(space, chain, eps);
    std::size_t i = 1;
    while (i + 1 < b.current().size()) {
        const auto& c = b.current();
        if (space(c[i - 1], c[i]) + space(c[i], c[i + 1]) < eps && b.can_remove(i)) {
            b.remove(i);
            i = std::max<std::size_t>(1, i - 1);
        } else {
            ++i;
        }
    }
    if (b.current().size() - 1 > target)
        throw Error("LengthBudgetExceeded", "reduced chain still exceeds the normal size");
    while (b.current().size() - 1 < target) b.insert(1, b.current().front());
    return {b.current_chain(), b.finish()};
}

RefineResult midpoint_refine(const Chain& chain, const FiniteMetricSpace& space, double eps, double tol) {
    RefineResult result;
    const bool certify = is_eps_chain(chain, space, eps);
    std::vector<PointId> out;
    out.reserve(chain.count() * 2);
    std::vector<PointId> mids;
    for (std::size_t i = 0; i < chain.count(); ++i) {
        out.push_back(chain.points[i]);
        if (i + 1 < chain.count()) {
            const auto mid = approx_midpoint(space, chain.points[i], chain.points[i + 1], tol);
            result.deviation = std::max(result.deviation, mid.deviation);
            out.push_back(mid.point);
            mids.push_back(mid.point);
        }
    }
    result.chain = Chain(std::move(out));
    if (certify) {
        HomotopyBuilder b(space, chain, eps);
        for (std::size_t i = 0; i < mids.size(); ++i) b.insert(2 * i + 1, mids[i]);
        result.certificate = b.finish();
    }
    return result;
}

RotateResult rotate(const Chain& loop, std::ptrdiff_t shift, const FiniteMetricSpace& space, double eps) {
    if (!loop.is_loop()) throw Error("NotALoop", "rotation needs a closed chain");
    const auto n = static_cast<std::ptrdiff_t>(loop.steps());
    RotateResult result;
    const std::ptrdiff_t s = n == 0 ? 0 : ((shift % n) + n) % n;

    HomotopyBuilder b(space, loop, eps);
    // Invariant: current = eta_k * rotated_k * reverse(eta_k), eta_k = x_0..x_k.
    for (std::ptrdiff_t k = 0; k < s; ++k) {
        // The rotated loop occupies positions k .. k+n; its closing point
        // x_k sits at k+n. Duplicate it and slip x_{k+1} in between.
        const auto close = static_cast<std::size_t>(k + n);
        const PointId next = loop.points[static_cast<std::size_t>(k + 1)];
        b.insert(close + 1, b.current()[close]);
        b.insert(close + 1, next);
    }
    std::vector<PointId> rotated;
    for (std::ptrdiff_t i = 0; i <= n; ++i) rotated.push_back(loop.points[static_cast<std::size_t>((s + i) % (n == 0 ? 1 : n))]);
    result.rotated = Chain(std::move(rotated));
    result.conjugator = Chain(std::vector<PointId>(loop.points.begin(), loop.points.begin() + s + 1));
    result.witness = b.finish();
    return result;
}

}  // namespace disco
