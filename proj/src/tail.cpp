#include "ifslab/tail.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include "ifslab/error.hpp"

namespace ifslab {

namespace {

constexpr double kEqualSlack = 4 * std::numeric_limits<double>::epsilon();
constexpr double kTargetRelWidth = 1e-13;
constexpr std::size_t kMaxTerms = std::size_t{1} << 20;

bool near_one(double x) { return std::abs(x - 1.0) <= kEqualSlack; }

/// Neumaier compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + carry; }
};

Bracket geometric_sum(const GeometricTail& g, double t, std::size_t m) {
    const double log_q = std::log(g.q);
    const double head = std::exp(t * std::log(g.scale) + t * static_cast<double>(m) * log_q);
    return Bracket::exact(head / -std::expm1(t * log_q)).widened(1e-14);
}

Bracket power_log_sum(const PowerLogTail& p, double t, std::size_t m) {
    const double a = near_one(t * p.power) ? 1.0 : t * p.power;
    const double b = t * p.log_power;
    const auto term = [&](double x) {
        double e = -a * std::log(x);
        if (b != 0.0) e -= b * std::log(std::log(x));
        return std::exp(e);
    };
    CompensatedSum partial;
    std::size_t next = m;
    std::size_t upto = m + 16;
    double lower = 0.0, upper = 0.0;
    while (true) {
        for (; next < upto; ++next) partial.add(term(static_cast<double>(next)));
        const double x = static_cast<double>(upto);
        const Bracket lo_int = power_log_integral(a, b, x);
        const Bracket hi_int = power_log_integral(a, b, x - 0.5);
        lower = partial.value() + lo_int.lo() + 0.5 * term(x);
        upper = partial.value() + hi_int.hi();
        if (upper - lower <= kTargetRelWidth * upper || upto - m >= kMaxTerms) break;
        upto = m + 2 * (upto - m);
    }
    const double factor = std::pow(p.scale, t);
    return Bracket::of(factor * lower, factor * upper).widened(2e-14);
}

} // namespace

bool tail_diverges(const TailModel& tail, double t) {
    const auto* p = std::get_if<PowerLogTail>(&tail);
    if (!p) return false;
    const double a = t * p->power;
    if (near_one(a)) {
        const double b = t * p->log_power;
        return b <= 1.0 || near_one(b);
    }
    return a < 1.0;
}

double tail_abscissa(const TailModel& tail) {
    if (const auto* p = std::get_if<PowerLogTail>(&tail)) return 1.0 / p->power;
    return 0.0;
}

Bracket power_log_integral(double a, double b, double x0) {
    if (near_one(a)) a = 1.0;
    const double u0 = std::log(x0);
    if (a == 1.0) {
        if (!(b > 1.0)) return Bracket::infinite();
        return Bracket::exact(std::pow(u0, 1.0 - b) / (b - 1.0)).widened(1e-14);
    }
    if (!(a > 1.0)) return Bracket::infinite();
    if (b == 0.0) return Bracket::exact(std::pow(x0, 1.0 - a) / (a - 1.0)).widened(1e-14);
    // u = ln x; integrand e^{(1-a)u} u^{-b}, normalised at u0
    const double prefactor = std::exp((1.0 - a) * u0 - b * std::log(u0));
    const auto f = [&](double u) { return std::exp((1.0 - a) * (u - u0) - b * std::log(u / u0)); };
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    const double value = integrator.integrate(f, u0, std::numeric_limits<double>::infinity(), 1e-15, &err);
    const double slack = std::max(10.0 * err, 1e-13 * std::abs(value));
    return Bracket::of(prefactor * (value - slack), prefactor * (value + slack));
}

Bracket tail_sum(const TailModel& tail, double t, std::size_t from) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::UnsupportedExponent, "tail_sum needs t > 0, got " + std::to_string(t));
    if (!has_tail(tail)) return Bracket::exact(0.0);
    if (tail_diverges(tail, t)) return Bracket::infinite();
    const std::size_t m = std::max(from, tail_start(tail));
    if (const auto* g = std::get_if<GeometricTail>(&tail)) return geometric_sum(*g, t, m);
    return power_log_sum(std::get<PowerLogTail>(tail), t, m);
}

} // namespace ifslab
