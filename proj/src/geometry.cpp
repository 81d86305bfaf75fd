#include "ifslab/geometry.hpp"

#include <array>
#include <numbers>
#include <queue>

namespace ifslab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::array<Complex, 4> corners(const Rectangle& r) {
    const double x0 = r.lower_left.real(), y0 = r.lower_left.imag();
    const double x1 = r.upper_right.real(), y1 = r.upper_right.imag();
    return {Complex{x0, y0}, Complex{x1, y0}, Complex{x1, y1}, Complex{x0, y1}};
}

} // namespace

double SeedSpace::inner_distance(Complex z) const {
    return std::visit(overloaded{
                          [&](const Disk& d) { return d.radius - std::abs(z - d.center); },
                          [&](const Rectangle& r) {
                              const double x0 = r.lower_left.real(), y0 = r.lower_left.imag();
                              const double x1 = r.upper_right.real(), y1 = r.upper_right.imag();
                              const double dx = std::max({x0 - z.real(), 0.0, z.real() - x1});
                              const double dy = std::max({y0 - z.imag(), 0.0, z.imag() - y1});
                              if (dx > 0 || dy > 0) return -std::hypot(dx, dy);
                              return std::min({z.real() - x0, x1 - z.real(), z.imag() - y0, y1 - z.imag()});
                          },
                      },
                      shape_);
}

Complex SeedSpace::center() const {
    return std::visit(overloaded{
                          [](const Disk& d) { return d.center; },
                          [](const Rectangle& r) { return 0.5 * (r.lower_left + r.upper_right); },
                      },
                      shape_);
}

Complex SeedSpace::bbox_lo() const {
    return std::visit(overloaded{
                          [](const Disk& d) { return d.center - Complex{d.radius, d.radius}; },
                          [](const Rectangle& r) { return r.lower_left; },
                      },
                      shape_);
}

Complex SeedSpace::bbox_hi() const {
    return std::visit(overloaded{
                          [](const Disk& d) { return d.center + Complex{d.radius, d.radius}; },
                          [](const Rectangle& r) { return r.upper_right; },
                      },
                      shape_);
}

double SeedSpace::diameter() const {
    return std::visit(overloaded{
                          [](const Disk& d) { return 2.0 * d.radius; },
                          [](const Rectangle& r) { return std::abs(r.upper_right - r.lower_left); },
                      },
                      shape_);
}

double SeedSpace::max_modulus() const { return max_distance_from(Complex{}); }

double SeedSpace::max_distance_from(Complex p) const {
    return std::visit(overloaded{
                          [&](const Disk& d) { return std::abs(d.center - p) + d.radius; },
                          [&](const Rectangle& r) {
                              double m = 0.0;
                              for (const Complex c : corners(r)) m = std::max(m, std::abs(c - p));
                              return m;
                          },
                      },
                      shape_);
}

double SeedSpace::boundary_length() const {
    return std::visit(overloaded{
                          [](const Disk& d) { return 2.0 * std::numbers::pi * d.radius; },
                          [](const Rectangle& r) {
                              const Complex e = r.upper_right - r.lower_left;
                              return 2.0 * (e.real() + e.imag());
                          },
                      },
                      shape_);
}

Complex SeedSpace::boundary_point(double s) const {
    const double len = boundary_length();
    s = std::fmod(s, len);
    if (s < 0) s += len;
    return std::visit(overloaded{
                          [&](const Disk& d) { return d.center + std::polar(d.radius, s / d.radius); },
                          [&](const Rectangle& r) {
                              const double w = r.upper_right.real() - r.lower_left.real();
                              const double h = r.upper_right.imag() - r.lower_left.imag();
                              const double x0 = r.lower_left.real(), y0 = r.lower_left.imag();
                              if (s < w) return Complex{x0 + s, y0};
                              s -= w;
                              if (s < h) return Complex{x0 + w, y0 + s};
                              s -= h;
                              if (s < w) return Complex{x0 + w - s, y0 + h};
                              s -= w;
                              return Complex{x0, y0 + h - std::min(s, h)};
                          },
                      },
                      shape_);
}

bool SeedSpace::well_formed() const {
    return std::visit(overloaded{
                          [](const Disk& d) {
                              return std::isfinite(d.center.real()) && std::isfinite(d.center.imag()) &&
                                     std::isfinite(d.radius) && d.radius > 0;
                          },
                          [](const Rectangle& r) {
                              const Complex e = r.upper_right - r.lower_left;
                              return std::isfinite(e.real()) && std::isfinite(e.imag()) && e.real() > 0 && e.imag() > 0;
                          },
                      },
                      shape_);
}

bool operator==(const SeedSpace& a, const SeedSpace& b) {
    if (a.shape_.index() != b.shape_.index()) return false;
    if (const auto* d = std::get_if<Disk>(&a.shape_)) {
        const auto& e = std::get<Disk>(b.shape_);
        return d->center == e.center && d->radius == e.radius;
    }
    const auto& r = std::get<Rectangle>(a.shape_);
    const auto& q = std::get<Rectangle>(b.shape_);
    return r.lower_left == q.lower_left && r.upper_right == q.upper_right;
}

Bracket lipschitz_max(const std::function<double(double)>& f, double length, double lipschitz,
                      const LipschitzSearch& search) {
    struct Cell {
        double a, b, fa, fb, bound;
        bool operator<(const Cell& o) const { return bound < o.bound; }
    };
    const int n = std::max(1, search.initial_samples);
    const double h = length / n;
    std::vector<double> values(n);
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        values[k] = f(k * h);
        best = std::max(best, values[k]);
    }
    if (lipschitz <= 0.0) return Bracket::of(best, best).widened(4 * kUnitRoundoff);

    auto bound = [&](double a, double b, double fa, double fb) { return 0.5 * (fa + fb) + 0.5 * lipschitz * (b - a); };
    std::priority_queue<Cell> heap;
    for (int k = 0; k < n; ++k) {
        const double a = k * h, b = (k + 1) * h;
        const double fa = values[k], fb = values[(k + 1) % n];
        const double u = bound(a, b, fa, fb);
        if (u > best + search.target_slack) heap.push({a, b, fa, fb, u});
    }
    int evaluations = n;
    while (!heap.empty() && evaluations < search.max_evaluations) {
        const Cell c = heap.top();
        if (c.bound <= best + search.target_slack) break;
        heap.pop();
        const double m = 0.5 * (c.a + c.b);
        const double fm = f(m);
        ++evaluations;
        best = std::max(best, fm);
        for (const Cell child : {Cell{c.a, m, c.fa, fm, bound(c.a, m, c.fa, fm)}, Cell{m, c.b, fm, c.fb, bound(m, c.b, fm, c.fb)}})
            if (child.bound > best + search.target_slack) heap.push(child);
    }
    const double upper = heap.empty() ? best + search.target_slack : std::max(best, heap.top().bound);
    return Bracket::of(best, std::max(upper, best)).widened(4 * kUnitRoundoff);
}

Bracket lipschitz_min(const std::function<double(double)>& f, double length, double lipschitz,
                      const LipschitzSearch& search) {
    const Bracket b = lipschitz_max([&](double s) { return -f(s); }, length, lipschitz, search);
    return Bracket::of(-b.hi(), -b.lo());
}

} // namespace ifslab
