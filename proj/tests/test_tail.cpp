#include "doctest.h"

#include <cmath>

#include "ifslab/tail.hpp"

using namespace ifslab;

namespace {

// sum_{i>=3} 1/(i ln^2 i), Euler-Maclaurin at 30 digits
constexpr double kInvILog2Sum = 1.0690583107340881;
// sum_{i>=5} (i ln^2 i)^-1.5
constexpr double kInvILog2Pow15From5 = 0.06726139480465833;

double direct_sum(const TailModel& tail, double t, std::size_t from, std::size_t count) {
    double s = 0.0;
    for (std::size_t i = from + count; i-- > from;) s += std::pow(tail_ratio(tail, i), t);
    return s;
}

} // namespace

TEST_CASE("geometric series with q = 1/2 sums to one") {
    const Bracket b = tail_sum(GeometricTail{1, 1.0, 0.5}, 1.0, 1);
    CHECK(b.contains(1.0));
    CHECK(b.width() < 1e-13);
}

TEST_CASE("p-series below its abscissa is infinite") {
    CHECK(tail_sum(PowerLogTail{1, 1.0, 2.0, 0.0}, 0.4, 1).is_infinite());
    CHECK(tail_sum(PowerLogTail{1, 1.0, 2.0, 0.0}, 0.5, 1).is_infinite());
    CHECK(tail_sum(PowerLogTail{1, 1.0, 2.0, 0.0}, 0.5000001, 1).is_finite());
}

TEST_CASE("log-corrected boundary: converges iff t*logPower > 1") {
    const PowerLogTail tail{3, 1.0, 1.0, 2.0};
    CHECK(tail_sum(tail, 1.0, 3).is_finite());
    CHECK(tail_sum(PowerLogTail{3, 1.0, 1.0, 1.0}, 1.0, 3).is_infinite());
    CHECK(tail_sum(PowerLogTail{3, 1.0, 1.0, 0.5}, 1.0, 3).is_infinite());
    CHECK(tail_sum(tail, 0.999, 3).is_infinite());
}

TEST_CASE("sum 1/(i ln^2 i) from 3 matches the high-precision oracle") {
    const Bracket b = tail_sum(PowerLogTail{3, 1.0, 1.0, 2.0}, 1.0, 3);
    CHECK(b.contains(kInvILog2Sum));
    CHECK(b.width() < 1e-11);
    // integral test: 1/ln 3 bounds the remainder after the first term
    CHECK(b.hi() <= 1.0 / (3 * std::pow(std::log(3.0), 2)) + 1.0 / std::log(3.0));
    CHECK(b.lo() >= 1.0 / std::log(3.0));
}

TEST_CASE("non-integer exponent on a log tail") {
    const Bracket b = tail_sum(PowerLogTail{5, 1.0, 1.0, 2.0}, 1.5, 5);
    CHECK(b.contains(kInvILog2Pow15From5));
    CHECK(b.width() < 1e-14);
}

TEST_CASE("zeta(2) and shifted starts") {
    const TailModel tail = PowerLogTail{1, 1.0, 2.0, 0.0};
    const double zeta2 = M_PI * M_PI / 6;
    CHECK(tail_sum(tail, 1.0, 1).contains(zeta2));
    CHECK(tail_sum(tail, 1.0, 2).contains(zeta2 - 1.0));
    const Bracket scaled = tail_sum(PowerLogTail{1, 0.25, 2.0, 0.0}, 2.0, 1);
    CHECK(scaled.contains(0.0625 * std::pow(M_PI, 4) / 90));
}

TEST_CASE("scale enters as scale^t") {
    const Bracket b1 = tail_sum(GeometricTail{2, 0.5, 0.25}, 1.5, 2);
    const double expected = std::pow(0.5, 1.5) * std::pow(0.25, 3.0) / (1 - std::pow(0.25, 1.5));
    CHECK(b1.contains(expected));
}

TEST_CASE("nonpositive exponent is rejected") {
    CHECK_THROWS_AS(tail_sum(GeometricTail{1, 1.0, 0.5}, 0.0, 1), Error);
    CHECK_THROWS_AS(tail_sum(PowerLogTail{}, -1.0, 1), Error);
}

TEST_CASE("tail_sum is nonincreasing in t") {
    const TailModel tails[] = {PowerLogTail{3, 0.8, 1.0, 2.0}, PowerLogTail{2, 0.3, 2.0, 0.0},
                               PowerLogTail{4, 0.5, 1.5, 1.0}, GeometricTail{1, 0.9, 0.6}};
    for (const auto& tail : tails) {
        double prev_hi = std::numeric_limits<double>::infinity();
        for (double t = 0.1; t <= 3.0; t += 0.05) {
            const Bracket b = tail_sum(tail, t, 1);
            if (b.is_infinite()) {
                CHECK(std::isinf(prev_hi));
                continue;
            }
            CHECK(b.hi() <= prev_hi);
            prev_hi = b.hi();
        }
    }
}

TEST_CASE("brute-force partial sums agree with the bracket") {
    SUBCASE("fast tails: 10^6 terms land inside [lo(1-1e-9), hi]") {
        const TailModel tails[] = {PowerLogTail{2, 0.4, 3.0, 0.0}, GeometricTail{1, 0.7, 0.8}, PowerLogTail{2, 0.5, 2.0, 1.0}};
        for (const auto& tail : tails) {
            const Bracket b = tail_sum(tail, 1.2, 1);
            const double s = direct_sum(tail, 1.2, tail_start(tail), 1'000'000);
            CHECK(s <= b.hi());
            CHECK(s >= b.lo() * (1 - 1e-9));
        }
    }
    SUBCASE("slow tail: partial sum below hi, partial sum plus integral remainder above lo") {
        const PowerLogTail tail{3, 1.0, 1.0, 2.0};
        const std::size_t n = 1'000'000;
        const double s = direct_sum(tail, 1.0, 3, n);
        const Bracket b = tail_sum(tail, 1.0, 3);
        CHECK(s <= b.hi());
        CHECK(s + 1.0 / std::log(static_cast<double>(3 + n - 1)) >= b.lo());
    }
}

TEST_CASE("abscissa per variant") {
    CHECK(tail_abscissa(PowerLogTail{1, 1.0, 2.0, 0.0}) == 0.5);
    CHECK(tail_abscissa(PowerLogTail{3, 1.0, 1.0, 2.0}) == 1.0);
    CHECK(tail_abscissa(GeometricTail{}) == 0.0);
    CHECK(tail_abscissa(NoTail{}) == 0.0);
}
