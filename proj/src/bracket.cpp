#include "ifslab/bracket.hpp"

#include <ostream>

namespace ifslab {

Bracket log(const Bracket& b) {
    if (b.is_infinite()) return b;
    const double lo = std::log(b.lo());
    const double hi = std::log(b.hi());
    return Bracket::of(lo, hi).widened(2 * kUnitRoundoff, 2 * std::numeric_limits<double>::denorm_min());
}

Bracket exp(const Bracket& b) {
    if (b.is_infinite()) return b;
    return Bracket::of(std::exp(b.lo()), std::exp(b.hi())).widened(2 * kUnitRoundoff);
}

Bracket pow(const Bracket& b, double t) {
    if (b.is_infinite()) return t == 0.0 ? Bracket::exact(1.0) : b;
    if (t == 0.0) return Bracket::exact(1.0);
    return Bracket::of(std::pow(b.lo(), t), std::pow(b.hi(), t)).widened(4 * kUnitRoundoff);
}

std::ostream& operator<<(std::ostream& os, const Bracket& b) {
    if (b.is_infinite()) return os << "[inf]";
    return os << '[' << b.lo() << ", " << b.hi() << ']';
}

} // namespace ifslab
