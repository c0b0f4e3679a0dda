#include "disco/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "disco/error.hpp"
#include "disco/format.hpp"

namespace disco {

namespace {

void require_positive(std::initializer_list<std::pair<const char*, double>> inputs) {
    for (auto [name, v] : inputs)
        if (!(v > 0) || !std::isfinite(v))
            throw Error("PreconditionViolated", std::string(name) + " must be positive and finite");
}

BigReal upward(const BigReal& x) { return x * (BigReal(1) + BigReal(kUpwardNudge)); }

// base^exponent for base >= 1, exponent >= 0.
BigReal power(double base, const BigReal& exponent) {
    if (base == 1.0) return BigReal(1);
    return upward(boost::multiprecision::pow(BigReal(base), exponent));
}

BigReal gromov_factor(double D, double eps) { return BigReal(8) * (BigReal(D) + BigReal(eps)) / BigReal(eps); }

}  // namespace

BigReal gromov_generator_bound(double D, double eps, double gamma, double cover_count) {
    require_positive({{"D", D}, {"eps", eps}, {"gamma", gamma}, {"cover_count", cover_count}});
    const BigReal f = gromov_factor(D, eps);
    return upward(f * BigReal(gamma) * power(cover_count, f));
}

BigReal gromov_systole_bound(double D, double sigma, double cover_count) {
    require_positive({{"D", D}, {"sigma", sigma}, {"cover_count", cover_count}});
    const BigReal f = gromov_factor(D, sigma);
    return upward(f * power(cover_count, f));
}

BigReal counting_bound(double L, double eps, double cover_count) {
    require_positive({{"L", L}, {"eps", eps}, {"cover_count", cover_count}});
    return power(cover_count, BigReal(4) * BigReal(L) / BigReal(eps));
}

BigReal ngmv3_bound(double D, double eps, double M, double cover_count) {
    require_positive({{"D", D}, {"eps", eps}, {"M", M}, {"cover_count", cover_count}});
    const BigReal f = gromov_factor(D, eps);
    return upward(BigReal(M) * f * power(cover_count, f));
}

TriadCountBound triad_count_bound(const FiniteMetricSpace& space, double a) {
    require_positive({{"a", a}});
    TriadCountBound out;
    const auto cover = covering_number(space, a / 3, CoverMode::Auto);
    out.cover_count = cover.count;
    out.exact_cover = cover.exact;
    const BigReal c(cover.count);
    out.value = cover.count < 3 ? BigReal(0) : c * (c - 1) * (c - 2) / 6;
    return out;
}

SystoleBounds systole_bounds(const SpectrumReport& report) {
    if (report.critical_values.empty())
        throw Error("EmptySpectrum", "no critical values: the sample looks simply connected at the scanned scales");
    SystoleBounds out;
    double lo = std::numeric_limits<double>::infinity();
    double tol = 0;
    for (const auto& cv : report.critical_values) {
        lo = std::min(lo, cv.epsilon);
        tol = std::max(tol, cv.tolerance);
    }
    out.sigma_estimate = 3 * lo;
    out.sigma_lower = lo;
    out.tolerance = 3 * tol;
    for (const auto& cv : report.critical_values) out.consistent = out.consistent && cv.epsilon >= out.sigma_estimate / 3;
    return out;
}

std::string BoundReport::bound_text() const {
    if (bound < BigReal(1e300)) return format_double(bound.convert_to<double>());
    std::ostringstream os;
    os << std::scientific << std::setprecision(17) << bound;
    return os.str();
}

std::string BoundReport::margin_text() const {
    const BigReal m = bound - BigReal(empirical);
    if (boost::multiprecision::abs(m) < BigReal(1e300)) return format_double(m.convert_to<double>());
    std::ostringstream os;
    os << std::scientific << std::setprecision(17) << m;
    return os.str();
}

BoundReport make_bound_report(std::string name, std::vector<std::pair<std::string, double>> inputs, BigReal bound,
                              double empirical, bool empirical_is_lower_bound) {
    BoundReport r;
    r.name = std::move(name);
    r.inputs = std::move(inputs);
    r.bound = bound;
    r.empirical = empirical;
    r.empirical_is_lower_bound = empirical_is_lower_bound;
    const BigReal e(empirical);
    const BigReal slack = BigReal(1e-9) * boost::multiprecision::max(boost::multiprecision::abs(bound), BigReal(1));
    r.satisfied = e <= bound + slack;
    return r;
}

std::vector<BoundReport> evaluate_bounds(const FiniteMetricSpace& space, const SpectrumReport& spectrum,
                                         const BoundsConfig& config) {
    std::vector<BoundReport> out;
    const double D = space.diameter();
    std::optional<double> min_crit;
    for (const auto& cv : spectrum.critical_values) min_crit = std::min(min_crit.value_or(cv.epsilon), cv.epsilon);
    double eps = config.eps;
    std::string eps_note;
    if (!(eps > 0)) {
        if (min_crit) {
            eps = *min_crit / 2;
            eps_note = "eps is half the smallest critical value";
        } else {
            eps = D / 4;
            eps_note = "empty spectrum: eps is a quarter of the diameter";
        }
    }
    const auto cover4 = covering_number(space, eps / 4, CoverMode::Auto);
    const double C = static_cast<double>(cover4.count);
    const std::string cover_note = cover4.exact ? "" : "C(X, eps/4) from a greedy cover (an over-estimate)";
    auto annotate = [](BoundReport& r, std::initializer_list<std::string> notes) {
        for (const auto& n : notes) {
            if (n.empty()) continue;
            if (!r.note.empty()) r.note += "; ";
            r.note += n;
        }
    };

    // Counting bound per length.
    for (double L : config.lengths) {
        const GammaEstimate g = estimate_gamma(space, L, eps, config.max_basepoints, config.cover);
        auto r = make_bound_report("counting_bound", {{"L", L}, {"eps", eps}, {"C(X,eps/4)", C}},
                                   counting_bound(L, eps, C), static_cast<double>(g.value));
        annotate(r, {eps_note, cover_note, g.upper_bound ? "class count may over-count near the cover boundary" : "",
                     g.exact ? "" : "basepoints sampled"});
        out.push_back(std::move(r));
    }

    // Generator bound at eps, with Gamma(X, eps).
    const NullDecider at_eps(space, eps);
    const auto* sp = at_eps.simplified();
    const double generators =
        sp ? static_cast<double>(sp->alive.size()) : static_cast<double>(at_eps.presentation().generators.size());
    {
        const GammaEstimate g = estimate_gamma(space, eps, eps, config.max_basepoints, config.cover);
        auto r = make_bound_report(
            "gromov_generator_bound",
            {{"D", D}, {"eps", eps}, {"Gamma(X,eps)", static_cast<double>(g.value)}, {"C(X,eps/4)", C}},
            gromov_generator_bound(D, eps, static_cast<double>(g.value), C), generators);
        annotate(r, {eps_note, cover_note, sp ? "" : "simplification budget exhausted: raw generator count"});
        out.push_back(std::move(r));
    }

    // Systole variant: below the smallest critical value the eps-group is the
    // fundamental group of the sample.
    if (min_crit) {
        const double sigma = 3 * *min_crit;
        const auto cs = covering_number_in_ball(space, 0, D, sigma / 4, CoverMode::Auto);
        auto r = make_bound_report(
            "gromov_systole_bound",
            {{"D", D}, {"sigma", sigma}, {"C(X,D,sigma/4)", static_cast<double>(cs.count)}},
            gromov_systole_bound(D, sigma, static_cast<double>(cs.count)), generators);
        annotate(r, {"generator count measured at eps", cs.exact ? "" : "greedy cover"});
        out.push_back(std::move(r));
    }

    // Generators of the delta-group from short classes, delta just below eps.
    // M counts the trivial class too: with non-trivial classes only, a circle
    // with no short non-trivial loop would be bounded by zero generators.
    {
        const double delta = eps * 0.99;
        const GammaEstimate g = estimate_gamma(space, eps, delta, config.max_basepoints, config.cover);
        const double M = static_cast<double>(g.value);
        const NullDecider at_delta(space, delta);
        const auto* spd = at_delta.simplified();
        const double k = spd ? static_cast<double>(spd->alive.size())
                             : static_cast<double>(at_delta.presentation().generators.size());
        auto r = make_bound_report("ngmv3_bound",
                                   {{"D", D}, {"eps", eps}, {"delta", delta}, {"M", M}, {"C(X,eps/4)", C}},
                                   ngmv3_bound(D, eps, M, C), k);
        annotate(r, {eps_note, cover_note, g.upper_bound ? "M may over-count near the cover boundary" : "",
                     spd ? "" : "simplification budget exhausted: raw generator count"});
        out.push_back(std::move(r));
    }

    // Non-equivalent essential triads above a.
    if (min_crit) {
        const double a = 0.9 * *min_crit;
        const auto tb = triad_count_bound(space, a);
        double classes = 0;
        bool undercount = false;
        for (const auto& cv : spectrum.critical_values)
            if (cv.epsilon >= a) {
                classes += static_cast<double>(cv.multiplicity);
                undercount = undercount || cv.unknown_triads > 0;
            }
        auto r = make_bound_report("triad_count_bound",
                                   {{"a", a}, {"C(X,a/3)", static_cast<double>(tb.cover_count)}}, tb.value, classes,
                                   undercount);
        annotate(r, {tb.exact_cover ? "" : "greedy cover", undercount ? "undecided triads excluded" : ""});
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace disco
