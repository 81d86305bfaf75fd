#include "doctest.h"

#include <chrono>
#include <cmath>

#include "ifslab/dimension.hpp"

using namespace ifslab;

namespace {

constexpr double kCantorDim = 0.6309297535714574;     // log 2 / log 3
constexpr double kTwoRatioDim = 0.6942419136306172;   // 2^-t + 4^-t = 1

ValidatedSystem cantor() {
    return validated({SeedSpace(Rectangle{{0.0, -0.1}, {1.0, 0.1}}), {Similarity{1.0 / 3, 0.0}, Similarity{1.0 / 3, 2.0 / 3}}});
}

ValidatedSystem tailed(TailModel tail) {
    return validated({SeedSpace(Disk{}), {Similarity{0.2, 0.5}, Similarity{0.2, -0.5}}, std::move(tail)});
}

} // namespace

TEST_CASE("Cantor dimension is log 2 / log 3") {
    const auto start = std::chrono::steady_clock::now();
    const DimensionResult r = bowen_dimension(cantor(), 1e-9);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(r.h.contains(kCantorDim));
    CHECK(r.h.width() < 1e-9);
    CHECK(r.method == DimensionMethod::BowenRoot);
    CHECK(secs < 1.0);
}

TEST_CASE("ratios 1/2 and 1/4 solve x + x^2 = 1") {
    const auto sys = validated({SeedSpace(Disk{}), {Similarity{0.5, 0.5}, Similarity{0.25, -0.5}}});
    const DimensionResult r = bowen_dimension(sys, 1e-9);
    CHECK(r.h.contains(kTwoRatioDim));
    CHECK(r.h.width() < 1e-9);
}

TEST_CASE("irregular infinite system: h equals theta") {
    // P(1) = log(0.4 + 0.3) < 0 with theta = 1
    const auto sys = tailed(PowerLogTail{3, 0.3 / 1.0690583107340881, 1.0, 2.0});
    const DimensionResult r = bowen_dimension(sys, 1e-9);
    CHECK(r.method == DimensionMethod::BowenInfimum);
    CHECK(r.h.contains(1.0));
    CHECK(r.h.width() < 1e-9);
}

TEST_CASE("strongly regular infinite system: h above theta, P(h) = 0") {
    const auto sys = tailed(PowerLogTail{3, 0.9 / 1.0690583107340881, 1.0, 2.0});
    const DimensionResult r = bowen_dimension(sys, 1e-9);
    CHECK(r.h.lo() > 1.0);
    CHECK(r.h.width() < 1e-9);
    CHECK(pressure(sys, r.h.lo(), 1e-12).lo() >= -1e-8);
    CHECK(pressure(sys, r.h.hi(), 1e-12).hi() <= 1e-8);
    CHECK(pressure(sys, r.h.lo() - 1e-6, 1e-12).lo() > 0.0);
    CHECK(pressure(sys, r.h.hi() + 1e-6, 1e-12).hi() < 0.0);
}

TEST_CASE("cofinitely regular geometric tail") {
    const auto sys = tailed(GeometricTail{3, 1.0, 0.5});
    const DimensionResult r = bowen_dimension(sys, 1e-9);
    CHECK(r.h.width() < 1e-9);
    const double t = r.h.mid();
    const double sum = 2 * std::pow(0.2, t) + std::pow(0.125, t) / (1 - std::pow(0.5, t));
    CHECK(std::abs(sum - 1.0) < 1e-8);
}

TEST_CASE("finite subsystems") {
    const auto c = cantor();
    CHECK(finite_subsystem_dimension(c, {1}, 1e-9).h == Bracket::exact(0.0));
    CHECK_FALSE(finite_subsystem_dimension(c, {2}, 1e-9).note.empty());
    CHECK(finite_subsystem_dimension(c, {1, 2}, 1e-9).h.contains(kCantorDim));
    CHECK(finite_subsystem_dimension(c, {2, 1, 2}, 1e-9).h.contains(kCantorDim));
    CHECK_THROWS_AS(finite_subsystem_dimension(c, {1, 3}, 1e-9), Error);

    const auto sys = tailed(PowerLogTail{3, 0.1, 2.0, 0.0});
    // F = {1,2}: two ratio-1/5 maps
    CHECK(finite_subsystem_dimension(sys, {1, 2}, 1e-9).h.contains(std::log(2.0) / std::log(5.0)));
}

TEST_CASE("subsystem scan is monotone and bounded by h") {
    const double tol = 1e-9;
    const auto sys = tailed(GeometricTail{3, 1.0, 0.5});
    const auto h = bowen_dimension(sys, tol).h;
    const auto scan = subsystem_sup_scan(sys, {2, 3, 5, 10, 40}, tol);
    REQUIRE(scan.size() == 5);
    for (std::size_t k = 1; k < scan.size(); ++k) CHECK(scan[k].h.lo() >= scan[k - 1].h.lo() - tol);
    for (const auto& r : scan) CHECK(r.h.lo() <= h.hi() + tol);
    CHECK(scan.back().h.hi() >= h.lo() - 1e-6);
    const auto twice = subsystem_sup_scan(sys, {2, 2}, tol);
    CHECK(twice[0].h == twice[1].h);
    CHECK(subsystem_sup_scan(cantor(), {2}, tol)[0].h.contains(kCantorDim));
}

TEST_CASE("h >= theta and the strong-regularity criterion") {
    const double tol = 1e-9;
    const double s = 1.0690583107340881;
    for (const double scale : {0.3, 0.5, 0.9, 1.2}) {
        const auto sys = tailed(PowerLogTail{3, scale / s, 1.0, 2.0});
        const auto r = classify(sys, tol);
        const auto h = bowen_dimension(sys, tol).h;
        CHECK(h.lo() >= r.theta.lo() - tol);
        const bool strong = r.regularity == RegularityClass::StronglyRegularNonCofinite ||
                            r.regularity == RegularityClass::CofinitelyRegular;
        CHECK(strong == (h.lo() > r.theta.hi() + 2 * tol));
    }
}

TEST_CASE("polynomial systems: honest wide brackets") {
    const auto sys = validated({SeedSpace(Disk{{0, 0}, 1.0}),
                                {Polynomial{{{0.5, 0}, {0.3, 0}, {0.05, 0}}}, Polynomial{{{-0.5, 0}, {0.3, 0}, {-0.05, 0}}}}});
    const PressureOptions opts{1 << 16, 32};
    try {
        (void)bowen_dimension(sys, 1e-9, opts);
        FAIL("expected UndeterminedSign");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UndeterminedSign);
        REQUIRE(e.partial().has_value());
        CHECK(e.partial()->lo() > 0.5);
        CHECK(e.partial()->hi() < 1.0);
    }
    const auto r = bowen_dimension(sys, 0.2, opts);
    CHECK(r.h.width() < 0.2);
    // sandwiched between the Moran roots of the inf- and sup-norms (0.2..0.4 per map)
    CHECK(r.h.lo() >= std::log(2.0) / std::log(5.0) - 1e-9);
    CHECK(r.h.hi() <= std::log(2.0) / std::log(2.5) + 1e-9);
}
