#include "ifslab/dimension.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "ifslab/error.hpp"

namespace ifslab {

namespace {

constexpr int kRefinementRounds = 3;

struct RootSearch {
    Bracket h;
    int iterations = 0;
};

// Two interleaved bisections on [start, 2]: the last t with P.lo > 0 bounds
// the root from below, the first t with P.hi <= 0 bounds it from above.
RootSearch bowen_search(const std::function<Bracket(double)>& p, double start, double tol) {
    double a_lo = start, a_hi = 2.0;  // P.lo > 0 holds at a_lo, fails at a_hi
    double b_lo = start, b_hi = 2.0;  // P.hi <= 0 fails at b_lo, holds at b_hi
    const double eps = std::max(tol / 8.0, 8 * kUnitRoundoff);
    int iterations = 0;
    while ((a_hi - a_lo > eps || b_hi - b_lo > eps) && iterations < 400) {
        const double m = (a_hi - a_lo >= b_hi - b_lo) ? 0.5 * (a_lo + a_hi) : 0.5 * (b_lo + b_hi);
        const Bracket v = p(m);
        ++iterations;
        if (v.lo() > 0.0) {
            a_lo = std::max(a_lo, m);
            b_lo = std::max(b_lo, m);
        } else {
            a_hi = std::min(a_hi, m);
        }
        if (v.is_finite() && v.hi() <= 0.0) {
            b_hi = std::min(b_hi, m);
            a_hi = std::min(a_hi, m);
        } else {
            b_lo = std::max(b_lo, m);
        }
    }
    return {Bracket::of(a_lo, std::max(a_lo, b_hi)), iterations};
}

DimensionResult solve(const std::function<PressureEstimate(double, double)>& p, double start, double tol,
                      DimensionMethod method) {
    RootSearch best{Bracket::of(start, 2.0), 0};
    int total = 0;
    double ptol = tol;
    for (int round = 0; round <= kRefinementRounds; ++round) {
        const RootSearch r = bowen_search([&](double t) { return p(t, ptol).value; }, start, tol);
        total += r.iterations;
        best = {best.h.intersect(r.h), total};
        if (best.h.width() < tol) return {best.h, method, total, {}};
        ptol /= 10.0;
    }
    std::ostringstream msg;
    msg << "pressure sign unresolved on " << best.h << ", wider than " << tol;
    throw Error(ErrorCode::UndeterminedSign, msg.str(), best.h);
}

std::vector<std::size_t> normalized(std::vector<std::size_t> letters) {
    std::ranges::sort(letters);
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    return letters;
}

} // namespace

std::string_view to_string(DimensionMethod m) {
    switch (m) {
    case DimensionMethod::BowenRoot: return "BowenRoot";
    case DimensionMethod::BowenInfimum: return "BowenInfimum";
    case DimensionMethod::SubsystemSup: return "SubsystemSup";
    }
    return "BowenRoot";
}

DimensionResult bowen_dimension(const ValidatedSystem& system, double tol, const PressureOptions& options) {
    const Bracket theta = finiteness_parameter(system, tol);
    const double start = std::max(theta.lo(), 0.0);
    if (system.infinite()) {
        const PressureEstimate at = pressure_estimate(system, theta.mid(), tol, options);
        const Bracket& p = at.value;
        if (p.is_finite() && (p.hi() < 0.0 || (p.contains(0.0) && p.width() < tol)))
            return {theta, DimensionMethod::BowenInfimum, 0, p.hi() < 0.0 ? "irregular: P(theta) < 0" : "critical: P(theta) = 0"};
    }
    return solve([&](double t, double ptol) { return pressure_estimate(system, t, ptol, options); }, start, tol,
                 DimensionMethod::BowenRoot);
}

DimensionResult finite_subsystem_dimension(const ValidatedSystem& system, const std::vector<std::size_t>& letters,
                                           double tol, const PressureOptions& options) {
    const auto f = normalized(letters);
    if (f.empty()) throw Error(ErrorCode::EmptyAlphabet, "subsystem has no letters");
    for (const std::size_t l : f)
        if (!system.has_letter(l)) throw Error(ErrorCode::UnknownLetter, "letter " + std::to_string(l) + " is not in the alphabet");
    if (f.size() == 1) return {Bracket::exact(0.0), DimensionMethod::SubsystemSup, 0, "singleton subsystem: dimension 0 by convention"};
    std::optional<ValidatedSystem> sub;
    if (!system.similarity() && f.back() <= system.explicit_count()) sub = system.restricted(f);
    DimensionResult r = solve(
        [&](double t, double ptol) {
            return sub ? pressure_estimate(*sub, t, ptol, options) : subsystem_pressure(system, f, t, ptol, options);
        },
        0.0, tol, DimensionMethod::SubsystemSup);
    return r;
}

std::vector<DimensionResult> subsystem_sup_scan(const ValidatedSystem& system, const std::vector<std::size_t>& sizes,
                                                double tol, const PressureOptions& options) {
    std::vector<DimensionResult> out;
    out.reserve(sizes.size());
    for (const std::size_t k : sizes) {
        std::vector<std::size_t> letters(k);
        for (std::size_t i = 0; i < k; ++i) letters[i] = i + 1;
        out.push_back(finite_subsystem_dimension(system, letters, tol, options));
    }
    return out;
}

} // namespace ifslab
