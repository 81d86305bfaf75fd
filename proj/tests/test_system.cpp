#include "doctest.h"

#include <array>
#include <vector>

#include "ifslab/system.hpp"

using namespace ifslab;

namespace {

SystemSpec cantor(double delta = 0.1) {
    return {SeedSpace(Rectangle{{0.0, -delta}, {1.0, delta}}),
            {Similarity{1.0 / 3, 0.0}, Similarity{1.0 / 3, 2.0 / 3}}};
}

SystemSpec two_quadratics() {
    return {SeedSpace(Disk{{0, 0}, 1.0}),
            {Polynomial{{{0.5, 0}, {0.3, 0}, {0.05, 0}}}, Polynomial{{{-0.5, 0}, {0.3, 0}, {-0.05, 0}}}}};
}

bool has_issue(const ValidationOutcome& out, ErrorCode code) {
    for (const auto& i : out.issues)
        if (i.code == code) return true;
    return false;
}

} // namespace

TEST_CASE("Cantor system on a thin rectangle validates with ratio 1/3") {
    const auto out = validate_system(cantor());
    REQUIRE(out.ok());
    const auto& sys = *out.system;
    CHECK(sys.contraction_ratio().contains(1.0 / 3));
    CHECK(sys.contraction_ratio().width() == 0.0);
    CHECK(sys.similarity());
    CHECK(sys.distortion() == 1.0);
    CHECK(sys.separation().disjoint);
}

TEST_CASE("fewer than two letters is an EmptyAlphabet error") {
    SystemSpec spec{SeedSpace(Disk{}), {Similarity{0.5, 0.0}}};
    CHECK(has_issue(validate_system(spec), ErrorCode::EmptyAlphabet));
    spec.generators.clear();
    CHECK(has_issue(validate_system(spec), ErrorCode::EmptyAlphabet));
    CHECK_THROWS_AS(validated(spec), Error);
}

TEST_CASE("expanding similarity is a ContractionViolation") {
    SystemSpec spec{SeedSpace(Disk{}), {Similarity{1.1, 0.0}, Similarity{0.2, 0.5}}};
    CHECK(has_issue(validate_system(spec), ErrorCode::ContractionViolation));
    try {
        (void)validated(spec);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ContractionViolation);
    }
}

TEST_CASE("similarity escaping the seed is a SelfMapViolation") {
    SystemSpec spec{SeedSpace(Disk{}), {Similarity{0.5, 0.8}, Similarity{0.2, -0.5}}};
    CHECK(has_issue(validate_system(spec), ErrorCode::SelfMapViolation));
}

TEST_CASE("tail must start right after the explicit letters") {
    SystemSpec spec{SeedSpace(Disk{}), {Similarity{0.2, 0.5}, Similarity{0.2, -0.5}}, PowerLogTail{5, 0.1, 2.0, 0.0}};
    CHECK(has_issue(validate_system(spec), ErrorCode::MalformedSpec));
    spec.tail = PowerLogTail{3, 0.1, 2.0, 0.0};
    CHECK(validate_system(spec).ok());
    spec.tail = PowerLogTail{3, 50.0, 2.0, 0.0};
    CHECK(has_issue(validate_system(spec), ErrorCode::ContractionViolation));
}

TEST_CASE("derivative sup-norms") {
    const SeedSpace disk(Disk{});
    CHECK(derivative_sup_norm(Similarity{0.25, 0.0}, disk) == Bracket::exact(0.25));
    CHECK(derivative_sup_norm(Similarity{{0.0, 0.5}, 0.0}, disk) == Bracket::exact(0.5));
    // |0.6 e^{is} + 0.1| peaks at s = 0
    const Bracket b = derivative_sup_norm(Polynomial{{{0, 0}, {0.1, 0}, {0.3, 0}}}, disk);
    CHECK(b.contains(0.7));
    CHECK(b.width() < 1e-6);
    // off-centre seed: |0.6 z| on the disk |z - 2| <= 0.5 peaks at 1.5
    const Bracket off = derivative_sup_norm(Polynomial{{{0, 0}, {0, 0}, {0.3, 0}}}, SeedSpace(Disk{{2, 0}, 0.5}));
    CHECK(off.contains(0.6 * 2.5));
    const Bracket inf = derivative_inf_norm(Polynomial{{{0, 0}, {0, 0}, {0.3, 0}}}, SeedSpace(Disk{{2, 0}, 0.5}));
    CHECK(inf.contains(0.6 * 1.5));
}

TEST_CASE("rectangle boundary parametrisation covers corners") {
    const SeedSpace r(Rectangle{{0, 0}, {2, 1}});
    CHECK(r.boundary_length() == doctest::Approx(6.0));
    CHECK(std::abs(r.boundary_point(0.0) - Complex{0, 0}) < 1e-15);
    CHECK(std::abs(r.boundary_point(2.0) - Complex{2, 0}) < 1e-15);
    CHECK(std::abs(r.boundary_point(3.0) - Complex{2, 1}) < 1e-15);
    CHECK(std::abs(r.boundary_point(5.0) - Complex{0, 1}) < 1e-15);
    CHECK(std::abs(r.boundary_point(5.5) - Complex{0, 0.5}) < 1e-15);
    CHECK(r.inner_distance({1, 0.5}) == doctest::Approx(0.5));
    CHECK(r.inner_distance({3, 0.5}) == doctest::Approx(-1.0));
}

TEST_CASE("polynomial system validates with a finite distortion constant") {
    const auto out = validate_system(two_quadratics());
    REQUIRE(out.ok());
    const auto& sys = *out.system;
    CHECK_FALSE(sys.similarity());
    CHECK(sys.sup_norms()[0].contains(0.4));
    CHECK(sys.inf_norms()[0].contains(0.2));
    CHECK(sys.distortion() > 1.0);
    CHECK(std::isfinite(sys.distortion()));
    CHECK(sys.separation().disjoint);
}

TEST_CASE("polynomial with a critical point inside X is rejected") {
    SystemSpec spec{SeedSpace(Disk{}), {Polynomial{{{0, 0}, {0.1, 0}, {0.3, 0}}}, Similarity{0.1, 0.5}}};
    CHECK(has_issue(validate_system(spec), ErrorCode::ContractionViolation));
}

TEST_CASE("overlapping images are reported, not rejected") {
    SystemSpec spec{SeedSpace(Disk{}), {Similarity{0.5, 0.1}, Similarity{0.5, -0.1}}};
    const auto out = validate_system(spec);
    REQUIRE(out.ok());
    CHECK_FALSE(out.system->separation().disjoint);
    SystemSpec poly = two_quadratics();
    std::get<Polynomial>(poly.generators[1]).coeffs[0] = {0.45, 0};
    const auto pout = validate_system(poly);
    REQUIRE(pout.ok());
    CHECK_FALSE(pout.system->separation().disjoint);
}

TEST_CASE("word norms") {
    const auto sys = validated(cantor());
    const std::vector<std::size_t> w12{1, 2};
    CHECK(word_norm(sys, w12) == Bracket::exact(1.0 / 9));
    CHECK(word_norm(sys, std::vector<std::size_t>{}) == Bracket::exact(1.0));
    const auto halves = validated({SeedSpace(Disk{}), {Similarity{0.5, 0.5}, Similarity{0.25, -0.5}}});
    CHECK(word_norm(halves, std::vector<std::size_t>{1, 1, 1}) == Bracket::exact(0.125));
    CHECK_THROWS_AS(word_norm(sys, std::vector<std::size_t>{3}), Error);
    CHECK_THROWS_AS(word_norm(sys, std::vector<std::size_t>{0}), Error);
}

TEST_CASE("tail letters carry their ratio") {
    const auto sys = validated({SeedSpace(Disk{}), {Similarity{0.2, 0.5}, Similarity{0.2, -0.5}}, GeometricTail{3, 1.0, 0.5}});
    CHECK(word_norm(sys, std::vector<std::size_t>{4}) == Bracket::exact(1.0 / 16));
    CHECK(word_norm(sys, std::vector<std::size_t>{1, 3}) == Bracket::exact(0.2 / 8));
}

TEST_CASE("word norms are submultiplicative") {
    const auto sys = validated(two_quadratics());
    const std::vector<std::vector<std::size_t>> words{{1}, {2}, {1, 2}, {2, 2, 1}, {1, 1, 2, 1}};
    for (const auto& w : words)
        for (const auto& v : words) {
            std::vector<std::size_t> wv = w;
            wv.insert(wv.end(), v.begin(), v.end());
            CHECK(word_norm(sys, wv).hi() <= word_norm(sys, w).hi() * word_norm(sys, v).hi() * (1 + 1e-15));
            CHECK(word_norm(sys, wv).lo() <= word_norm(sys, wv).hi());
        }
}

TEST_CASE("affine precomposition matches pointwise composition") {
    const Generator p = Polynomial{{{0.1, 0.2}, {0.3, -0.1}, {0.05, 0.02}, {0.01, 0}}};
    const Complex s{0.7, 0.2}, c{0.1, -0.3};
    const Generator q = compose_affine(p, s, c);
    for (const Complex z : {Complex{0, 0}, Complex{0.5, 0.5}, Complex{-0.3, 0.9}}) {
        CHECK(std::abs(apply(q, z) - apply(p, s * z + c)) < 1e-14);
        CHECK(std::abs(derivative(q, z) - s * derivative(p, s * z + c)) < 1e-14);
    }
    const Generator sim = compose_affine(Similarity{0.5, 0.25}, s, c);
    CHECK(std::abs(apply(sim, {1, 1}) - (0.5 * (s * Complex{1, 1} + c) + 0.25)) < 1e-15);
}
