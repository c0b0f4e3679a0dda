#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "disco/metric_space.hpp"
#include "disco/spectrum.hpp"

namespace disco {

/// 50 significant digits with a wide exponent range; bound values such as
/// C^(8(D+eps)/eps) overflow double long before they overflow this.
using BigReal = boost::multiprecision::cpp_dec_float_50;

/// Formula values are nudged upward by this relative amount after
/// evaluation, so a reported bound never sits below the exact one.
inline constexpr double kUpwardNudge = 1e-40;

BigReal gromov_generator_bound(double D, double eps, double gamma, double cover_count);
/// Variant in terms of the 1-systole sigma; cover_count = C(X, D, sigma/4).
BigReal gromov_systole_bound(double D, double sigma, double cover_count);
BigReal counting_bound(double L, double eps, double cover_count);
/// Throws PreconditionViolated for M = 0 (the trivial group has no generators to bound).
BigReal ngmv3_bound(double D, double eps, double M, double cover_count);

struct TriadCountBound {
    BigReal value;
    std::size_t cover_count = 0;
    bool exact_cover = false;
};

/// binom(C(X, a/3), 3); exact covering numbers on small spaces, greedy otherwise.
TriadCountBound triad_count_bound(const FiniteMetricSpace& space, double a);

struct SystoleBounds {
    double sigma_estimate = 0.0;  // 3 * min critical value
    double sigma_lower = 0.0;     // sigma_estimate / 3, the smallest critical value
    double tolerance = 0.0;       // 3 * critical-value tolerance
    bool consistent = true;       // every critical value >= sigma_estimate / 3
};

/// Throws EmptySpectrum when the report has no critical values.
SystoleBounds systole_bounds(const SpectrumReport& report);

struct BoundReport {
    std::string name;
    std::vector<std::pair<std::string, double>> inputs;
    BigReal bound;
    double empirical = 0.0;
    /// The empirical value undercounts (Unknown verdicts, truncated covers);
    /// a violation cannot be concluded from it.
    bool empirical_is_lower_bound = false;
    bool satisfied = false;
    std::string note;

    /// Shortest decimal for values that fit a double, scientific otherwise.
    std::string bound_text() const;
    /// bound - empirical, as text.
    std::string margin_text() const;
};

/// satisfied <=> empirical <= bound, within 1e-9 relative.
BoundReport make_bound_report(std::string name, std::vector<std::pair<std::string, double>> inputs, BigReal bound,
                              double empirical, bool empirical_is_lower_bound = false);

struct BoundsConfig {
    /// Scale of the counting bounds; 0 picks half the smallest critical value.
    double eps = 0.0;
    std::vector<double> lengths{1.0, 1.5, 2.0};
    /// Basepoints scanned for Gamma and M (0 = all).
    std::size_t max_basepoints = 0;
    CoverOptions cover;
};

/// Every bound evaluated against the pipeline's empirical counts.
std::vector<BoundReport> evaluate_bounds(const FiniteMetricSpace& space, const SpectrumReport& spectrum,
                                         const BoundsConfig& config = {});

}  // namespace disco
