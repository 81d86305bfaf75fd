#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>

namespace ifslab {

inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;

/// Closed interval [lo, hi] enclosing a computed scalar, or the value +inf.
///
/// Every numerical routine in the library returns a Bracket instead of a bare
/// double. Endpoints are widened by explicit truncation, mesh and rounding
/// slack; no directed rounding is used.
class Bracket {
public:
    constexpr Bracket() = default;

    static constexpr Bracket exact(double x) { return Bracket(x, x, false); }
    static Bracket of(double lo, double hi) { return Bracket(std::min(lo, hi), std::max(lo, hi), false); }
    static constexpr Bracket infinite() { return Bracket(0.0, 0.0, true); }

    [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }
    [[nodiscard]] constexpr bool is_finite() const { return !infinite_; }

    [[nodiscard]] double lo() const { return infinite_ ? std::numeric_limits<double>::infinity() : lo_; }
    [[nodiscard]] double hi() const { return infinite_ ? std::numeric_limits<double>::infinity() : hi_; }
    [[nodiscard]] double width() const { return infinite_ ? std::numeric_limits<double>::infinity() : hi_ - lo_; }
    [[nodiscard]] double mid() const { return infinite_ ? std::numeric_limits<double>::infinity() : 0.5 * (lo_ + hi_); }

    [[nodiscard]] bool contains(double x) const { return !infinite_ && lo_ <= x && x <= hi_; }
    [[nodiscard]] bool overlaps(const Bracket& other) const {
        if (infinite_ || other.infinite_) return infinite_ && other.infinite_;
        return lo_ <= other.hi_ && other.lo_ <= hi_;
    }

    /// Widen by a relative fraction of the largest endpoint magnitude plus an absolute term.
    [[nodiscard]] Bracket widened(double rel, double abs = 0.0) const {
        if (infinite_) return *this;
        const double pad = rel * std::max(std::abs(lo_), std::abs(hi_)) + abs;
        return Bracket(lo_ - pad, hi_ + pad, false);
    }

    /// Intersection; falls back to *this when the two are disjoint (inconsistent inputs).
    [[nodiscard]] Bracket intersect(const Bracket& other) const {
        if (infinite_) return other;
        if (other.infinite_) return *this;
        const double lo = std::max(lo_, other.lo_);
        const double hi = std::min(hi_, other.hi_);
        return lo <= hi ? Bracket(lo, hi, false) : *this;
    }

    [[nodiscard]] Bracket hull(const Bracket& other) const {
        if (infinite_ || other.infinite_) return infinite();
        return Bracket(std::min(lo_, other.lo_), std::max(hi_, other.hi_), false);
    }

    friend Bracket operator+(const Bracket& a, const Bracket& b) {
        if (a.infinite_ || b.infinite_) return infinite();
        return Bracket(a.lo_ + b.lo_, a.hi_ + b.hi_, false).widened(2 * kUnitRoundoff);
    }
    friend Bracket operator-(const Bracket& a, const Bracket& b) {
        return Bracket(a.lo_ - b.hi_, a.hi_ - b.lo_, false).widened(2 * kUnitRoundoff);
    }
    friend Bracket operator+(const Bracket& a, double x) { return a + exact(x); }

    /// Product of two nonnegative brackets.
    friend Bracket operator*(const Bracket& a, const Bracket& b) {
        if (a.infinite_ || b.infinite_) return infinite();
        return Bracket(a.lo_ * b.lo_, a.hi_ * b.hi_, false).widened(2 * kUnitRoundoff);
    }
    friend Bracket operator*(const Bracket& a, double x) {
        if (a.infinite_) return a;
        return Bracket::of(a.lo_ * x, a.hi_ * x).widened(2 * kUnitRoundoff);
    }

    friend bool operator==(const Bracket&, const Bracket&) = default;

private:
    constexpr Bracket(double lo, double hi, bool inf) : lo_(lo), hi_(hi), infinite_(inf) {}

    double lo_ = 0.0;
    double hi_ = 0.0;
    bool infinite_ = false;
};

/// log of a positive bracket; +inf maps to +inf.
Bracket log(const Bracket& b);
/// exp of a finite bracket.
Bracket exp(const Bracket& b);
/// b^t for a nonnegative bracket and t >= 0.
Bracket pow(const Bracket& b, double t);

std::ostream& operator<<(std::ostream& os, const Bracket& b);

} // namespace ifslab
