#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "disco/chain.hpp"
#include "disco/chassis.hpp"

namespace disco {

struct DeciderBudget {
    /// States visited by the breadth-first stage.
    std::size_t bfs_states = 100000;
    /// Largest chain (in points) the breadth-first stage may visit; 0 picks
    /// the normal-form size for three times the diameter.
    std::size_t bfs_max_points = 0;
    /// Largest certificate the closure stage may emit.
    std::size_t max_certificate_moves = std::size_t{1} << 24;
    /// Node budget of the covering complex used to certify loops whose
    /// homology class vanishes; 0 disables that stage.
    std::size_t cover_nodes = 200000;
    SimplifyBudget simplify;
};

enum class Verdict { Null, NotNull, Unknown };

const char* to_string(Verdict v);

struct NullVerdict {
    Verdict verdict = Verdict::Unknown;
    /// 1 short loop, 2 homology, 3 closure / free word, 4 search, 5 undecided.
    int stage = 5;
    std::optional<Homotopy> certificate;  // Null
    std::optional<H1Class> h1;            // NotNull by homology
    std::optional<Word> free_word;        // NotNull in a free presentation
    std::size_t states_explored = 0;
    std::size_t frontier = 0;
    std::string note;
};

/// Reusable decision context at one scale: all-points chassis, homology,
/// closure table and (lazily) the simplified presentation.
class NullDecider {
public:
    NullDecider(const FiniteMetricSpace& space, double eps, DeciderBudget budget = {});
    ~NullDecider();
    NullDecider(NullDecider&&) noexcept;
    NullDecider& operator=(NullDecider&&) noexcept;

    NullVerdict decide(const Chain& loop, bool allow_search = true) const;

    const Chassis& chassis() const;
    const H1Map& homology() const;
    const Presentation& presentation() const;
    /// Null when the Tietze pass ran out of budget.
    const SimplifiedPresentation* simplified() const;
    double scale() const noexcept;
    const FiniteMetricSpace& space() const noexcept;
    const DeciderBudget& budget() const noexcept;

    /// Word of a vertex loop in the surviving generators, freely reduced.
    std::optional<Word> reduced_word(const std::vector<VertexId>& loop) const;

    // Individual stages, exposed for testing.
    std::optional<Homotopy> short_loop_certificate(const Chain& loop) const;
    std::optional<Homotopy> closure_certificate(const Chain& loop) const;
    std::optional<Homotopy> cover_certificate(const Chain& loop) const;
    NullVerdict search(const Chain& loop) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Pipeline: short-loop contraction, homology, closure rewriting, bounded
/// search, then Unknown. Throws NotALoop / NotAnEpsilonChain.
NullVerdict decide_null(const Chain& loop, const FiniteMetricSpace& space, double eps, const DeciderBudget& budget = {});

/// Contracts a loop of length < 3 eps by splitting it into at most three
/// pieces of diameter below eps. Returns nothing when no such split exists
/// even after one midpoint refinement.
std::optional<Homotopy> contract_short_loop(const Chain& loop, const FiniteMetricSpace& space, double eps);

// Free homotopy --------------------------------------------------------------

enum class FreeVerdict { Yes, No, Unknown };

const char* to_string(FreeVerdict v);

struct FreeHomotopyResult {
    FreeVerdict verdict = FreeVerdict::Unknown;
    /// Yes: l1 ~ eta * rotated(l2) * reverse(eta), with l2 possibly reversed
    /// first; `null_certificate` contracts l1 * eta * reverse(rotated l2) * reverse(eta).
    /// In a free presentation a Yes may rest on conjugate cyclic words alone,
    /// in which case there is no null certificate.
    bool reversed = false;
    std::size_t shift = 0;
    Chain conjugator;
    std::optional<Homotopy> null_certificate;
    /// No: differing homology classes or non-conjugate free words.
    std::optional<H1Class> class1;
    std::optional<H1Class> class2;
    std::optional<Word> word1;
    std::optional<Word> word2;
    std::string note;
};

FreeHomotopyResult free_homotopic(const Chain& l1, const Chain& l2, const NullDecider& decider, bool allow_reversal);

// Covering space ---------------------------------------------------------------

struct CoverGraph {
    double eps = 0.0;
    VertexId base_vertex = 0;
    std::uint32_t base_node = 0;
    std::vector<VertexId> projection;  // node -> chassis vertex
    std::vector<double> distance;      // lifted distance from the base node
    std::vector<std::uint32_t> parent; // shortest-path tree, base maps to itself
    /// Per node: (chassis neighbour vertex, node), sorted.
    std::vector<std::vector<std::pair<VertexId, std::uint32_t>>> adjacency;
    double radius = 0.0;
    double margin = 0.0;
    bool truncated = false;      // node budget bound
    bool upper_bound = false;    // fiber counts may over-count near the boundary

    std::size_t size() const noexcept { return projection.size(); }
    /// Nodes over `vertex` with distance <= radius (+1e-9), sorted by distance.
    std::vector<std::uint32_t> fiber(VertexId vertex, double radius) const;
    /// Vertex path from the base vertex to the node along the parent tree.
    std::vector<VertexId> path_to(std::uint32_t node) const;
};

struct CoverOptions {
    std::size_t node_budget = 1000000;
    /// Extra processed radius beyond the requested one; negative picks 4 eps.
    double margin = -1.0;
    VertexId base_vertex = 0;
};

/// Universal cover of the chassis 2-complex around the base vertex, built by
/// coset enumeration in order of lifted distance. Distinct nodes can only be
/// missed identifications, never wrong ones.
CoverGraph build_cover(const Chassis& chassis, double radius, const CoverOptions& options = {});

struct ShortClasses {
    std::size_t count = 0;
    std::vector<double> norms;      // ascending
    std::vector<Chain> representatives;
    bool upper_bound = false;
};

/// Fiber nodes over the base vertex with lifted distance < L.
/// Throws CoverTooSmall when the cover radius is below L.
ShortClasses count_short_classes(const CoverGraph& cover, const Chassis& chassis, double L);
ShortClasses count_short_classes(const FiniteMetricSpace& space, double eps, double L, const CoverOptions& options = {});

struct GammaEstimate {
    std::size_t value = 0;
    PointId argmax = 0;
    std::size_t basepoints_scanned = 0;
    bool exact = false;  // every basepoint scanned
    bool upper_bound = false;
};

/// max over basepoints of count_short_classes(L). `max_basepoints` = 0 scans all.
GammaEstimate estimate_gamma(const FiniteMetricSpace& space, double L, double eps, std::size_t max_basepoints = 0,
                             const CoverOptions& options = {});

}  // namespace disco
