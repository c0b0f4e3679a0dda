#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "disco/chain.hpp"
#include "disco/decider.hpp"
#include "disco/format.hpp"
#include "disco/metric_space.hpp"

namespace disco {

/// Distinct pairwise distances >= eps_min, ascending, with values closer
/// than h/4 collapsed onto the smallest of them.
std::vector<double> candidate_scales(const FiniteMetricSpace& space, double eps_min);

struct PersistenceInterval {
    /// Filtration values are edge lengths: an edge of length d is present at
    /// every scale above d.
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();
    /// Edge whose arrival created the class.
    PointId u = 0;
    PointId v = 0;
};

/// H1 persistence (mod 2) of the Rips 2-complexes at the given scales.
/// Only edges and triangles present at the largest scale take part.
/// Throws MatrixTooLarge when the triangle count exceeds `max_triangles`.
std::vector<PersistenceInterval> persistent_h1(const FiniteMetricSpace& space, const std::vector<double>& scales,
                                               std::size_t max_triangles = std::size_t{1} << 25);

enum class Essential { Yes, No, Unknown };

const char* to_string(Essential e);

struct Triad {
    std::array<PointId, 3> points{};
    double scale = 0.0;
    /// max |d(x_a, x_b) - scale| over the three pairs.
    double tolerance = 0.0;
    double mean_distance = 0.0;
    Essential essential = Essential::Unknown;
    /// Midpoint refinement of the triangle loop x0 x1 x2 x0.
    Chain refined_loop;
    std::optional<H1Class> h1;
    /// Triads skipped because every corner lies within scale/3 of this one.
    std::size_t absorbed = 0;
};

struct TriadSearchOptions {
    /// Worker threads for the essentiality decisions (0 = hardware).
    unsigned threads = 1;
    /// Skip triads pointwise within scale/3 of an already chosen triad.
    bool prune = true;
    bool allow_search = true;
};

/// Triples with all pairwise distances in [eps - tol, eps + tol]; each
/// retained triad is decided at eps itself.
std::vector<Triad> find_essential_triads(const NullDecider& decider, double tol, const TriadSearchOptions& options = {});
std::vector<Triad> find_essential_triads(const FiniteMetricSpace& space, double eps, double tol,
                                         const DeciderBudget& budget = {}, const TriadSearchOptions& options = {});

/// True when the corners can be matched so that each pair is closer than eps/3.
bool pointwise_close(const Triad& a, const Triad& b, const FiniteMetricSpace& space, double eps);

struct TriadPartition {
    /// Each class lists triad indices, ascending; classes ordered by first index.
    std::vector<std::vector<std::size_t>> classes;
    /// Pairs of class leaders whose free homotopy stayed Unknown.
    std::vector<std::pair<std::size_t, std::size_t>> unresolved;
};

/// Union-find over the given triads: pointwise closeness first, then free
/// homotopy (reversal allowed) between class leaders.
TriadPartition triad_equivalence_classes(const std::vector<Triad>& triads, const NullDecider& decider);

struct CriticalValue {
    double epsilon = 0.0;
    double tolerance = 0.0;
    std::size_t multiplicity = 0;
    /// One representative triad per class.
    std::vector<Triad> classes;
    /// Candidate scales merged into this value.
    std::vector<double> merged_scales;
    /// Essential triads whose verdict above the scale stayed Unknown.
    std::size_t unknown_triads = 0;
    /// Persistence intervals dying within 2h of the value.
    std::vector<PersistenceInterval> evidence;
};

enum class ResolutionPolicy { Clamp, Error };

struct SpectrumOptions {
    /// Triad tolerance; 0 picks the sample resolution h.
    double tolerance = 0.0;
    DeciderBudget budget;
    TriadSearchOptions triads;
    /// What to do when eps_min < 3h: raise ResolutionTooCoarse or scan from 3h.
    ResolutionPolicy resolution = ResolutionPolicy::Error;
    /// Stop once the presentation at a scale collapses to the trivial group.
    bool stop_when_trivial = true;
    /// Largest scale to scan; 0 scans all candidates.
    double eps_max = 0.0;
    /// Triangle cap of the persistence matrix; persistence is skipped beyond it.
    std::size_t max_triangles = std::size_t{1} << 25;
};

struct SpectrumReport {
    nlohmann::json space_meta;
    double eps_min = 0.0;
    double scanned_from = 0.0;
    double scanned_to = 0.0;
    double resolution = 0.0;
    double tolerance = 0.0;
    std::vector<double> candidates;
    /// Descending.
    std::vector<CriticalValue> critical_values;
    std::vector<PersistenceInterval> persistence;
    /// 3 * smallest critical value, when any.
    std::optional<double> systole_estimate;
    std::vector<std::string> notes;
    bool partial = false;
};

class ResolutionTooCoarse : public Error {
public:
    ResolutionTooCoarse(double eps_min, double three_h)
        : Error("ResolutionTooCoarse", "eps_min " + format_double(eps_min) + " is below three times the sample "
                                       "resolution (" + format_double(three_h) + ")"),
          eps_min(eps_min), three_h(three_h) {}

    double eps_min;
    double three_h;
};

SpectrumReport compute_spectrum(const FiniteMetricSpace& space, double eps_min, const SpectrumOptions& options = {});

struct EmbeddingReport {
    Chain circle;
    double circle_length = 0.0;
    /// max over point pairs of |arc distance - ambient distance|.
    double discrepancy = 0.0;
    std::size_t worst_i = 0;
    std::size_t worst_j = 0;
    double threshold = 0.0;  // 2h
    bool embedded = false;
};

/// Compares ambient distances with arc distances along a closed chain.
EmbeddingReport check_metric_embedding(const Chain& loop, const FiniteMetricSpace& space);

/// Realizes the triad as a geodesic triangle through the sample (shortest
/// paths using steps of at most 2h) and checks that circle. Throws
/// NoGeodesicRealization when a side cannot be realized within 2h of its length.
EmbeddingReport check_metric_embedding(const std::array<PointId, 3>& triad, const FiniteMetricSpace& space);

}  // namespace disco
