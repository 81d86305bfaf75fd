#include "doctest.h"

#include <cmath>

#include "ifslab/error.hpp"
#include "ifslab/topology.hpp"

using namespace ifslab;

namespace {

constexpr double kLogTailSum = 1.0690583107340881;  // sum_{i>=3} 1/(i ln^2 i)

ValidatedSystem cantor(double shift = 0.0) {
    return validated({SeedSpace(Rectangle{{0.0, -0.1}, {1.0, 0.1}}),
                      {Similarity{1.0 / 3, 0.0}, Similarity{1.0 / 3, 2.0 / 3 + shift}}});
}

SystemSpec tailed_spec(double r, TailModel tail) {
    return {SeedSpace(Disk{}), {Similarity{r, 0.5}, Similarity{r, -0.5}}, std::move(tail)};
}

// strongly regular base with theta = 1
SystemSpec fsr_base() { return tailed_spec(0.01, PowerLogTail{3, 1.0 / kLogTailSum, 1.0, 2.0}); }

PowerLogTail drifted(double e) {
    // c_i^(1+e) for c_i = k / (i ln^2 i)
    const double k = 1.0 / kLogTailSum;
    return {3, std::pow(k, 1 + e), 1 + e, 2 * (1 + e)};
}

} // namespace

TEST_CASE("rho of identical systems is zero") {
    const Bracket d = rho_distance(cantor(), cantor());
    CHECK(d.lo() == 0.0);
    CHECK(d.hi() < 1e-15);
}

TEST_CASE("rho sees a shifted translation part") {
    const Bracket d = rho_distance(cantor(), cantor(-0.01));
    CHECK(d.contains(0.01));
    CHECK(d.width() < 1e-15);
    CHECK(rho_distance(cantor(-0.01), cantor()).overlaps(d));
}

TEST_CASE("rho errors") {
    const auto three = validated({SeedSpace(Rectangle{{0.0, -0.1}, {1.0, 0.1}}),
                                  {Similarity{0.2, 0.0}, Similarity{0.2, 0.4}, Similarity{0.2, 0.8}}});
    try {
        (void)rho_distance(cantor(), three);
        FAIL("expected AlphabetMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AlphabetMismatch);
    }
    const auto disk = validated({SeedSpace(Disk{}), {Similarity{0.3, 0.5}, Similarity{0.3, -0.5}}});
    try {
        (void)rho_distance(cantor(), disk);
        FAIL("expected SeedMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SeedMismatch);
    }
}

TEST_CASE("map distance for polynomials") {
    // 0.05 z^2 on the unit disk: sup 0.05, derivative sup 0.1
    const Bracket d = map_distance(Polynomial{{0.5, 0.3, 0.05}}, Similarity{0.3, 0.5}, SeedSpace(Disk{}));
    CHECK(d.contains(0.15));
    // |0.05 z^2| is flat on the circle, the worst case for branch and bound
    CHECK(d.width() < 1e-6);
    const Bracket z = map_distance(Polynomial{{0.5, 0.3, 0.05}}, Polynomial{{0.5, 0.3, 0.05}}, SeedSpace(Disk{}));
    CHECK(z.lo() == 0.0);
    CHECK(z.hi() < 1e-9);
}

TEST_CASE("rho triangle inequality") {
    const Bracket ab = rho_distance(cantor(), cantor(-0.01));
    const Bracket bc = rho_distance(cantor(-0.01), cantor(-0.03));
    const Bracket ac = rho_distance(cantor(), cantor(-0.03));
    CHECK(ac.lo() <= ab.hi() + bc.hi() + 3e-15);
}

TEST_CASE("rho_infty") {
    const auto a = validated(fsr_base());
    const Bracket same = rho_infty_distance(a, a);
    CHECK(same.lo() == 0.0);
    CHECK(same.hi() < 1e-15);

    // letter 1 moved by distance 1 on the unit disk
    auto moved = fsr_base();
    moved.generators[0] = Similarity{0.01, -0.5};
    moved.generators[1] = Similarity{0.01, 0.5};
    const Bracket d = rho_infty_distance(a, validated(moved));
    CHECK(d.contains(0.75));  // letters 1 and 2 both moved by 1
    CHECK(rho_infty_distance(validated(moved), a).overlaps(d));

    // only letter 1 differs, by exactly 1
    auto up = fsr_base(), down = fsr_base();
    up.generators[0] = Similarity{0.01, {0.5, 0.5}};
    down.generators[0] = Similarity{0.01, {0.5, -0.5}};
    CHECK(rho_infty_distance(validated(up), validated(down)).contains(0.5));

    // tails differ, but only beyond the truncation
    auto other_tail = fsr_base();
    other_tail.tail = PowerLogTail{3, 0.9 / kLogTailSum, 1.0, 2.0};
    const Bracket t = rho_infty_distance(a, validated(other_tail), 4096, 2);
    CHECK(t.lo() == 0.0);
    CHECK(t.hi() <= 0.25 + 1e-15);
}

TEST_CASE("lambda check on a constant sequence") {
    const auto a = validated(fsr_base());
    const auto rep = lambda_convergence_check({a, a, a, a}, a);
    CHECK(rep.verdict == LambdaVerdict::ConvergesLambda);
    REQUIRE(rep.witness_c);
    CHECK(*rep.witness_c == 0.0);
    CHECK(rep.letters_checked == 10'000);
}

TEST_CASE("scaling sequence converges in the lambda topology") {
    ScalingFamily f;
    f.base = fsr_base();
    f.center = 0.0;
    std::vector<ValidatedSystem> seq;
    for (int n = 1; n <= 12; ++n) seq.push_back(instantiate(f, 1.0 - std::ldexp(1.0, -n)));
    const auto limit = validated(f.base);
    const auto rep = lambda_convergence_check(seq, limit);
    CHECK(rep.verdict == LambdaVerdict::ConvergesLambda);
    REQUIRE(rep.witness_c);
    CHECK(std::abs(*rep.witness_c - std::log(2.0)) < 1e-12);
    for (std::size_t n = 0; n < seq.size(); ++n)
        CHECK(std::abs(rep.log_norm_deviation[n] + std::log1p(-std::ldexp(1.0, -int(n) - 1))) < 1e-12);
    CHECK(rep.pointwise_distances.back().hi() < 1e-4);

    // theta stays constant along the sequence
    std::vector<SweepRecord> records;
    for (const auto& s : seq) records.push_back({0.0, finiteness_parameter(s, 1e-9), {}, {}, {}, {}});
    CHECK(theta_local_constancy_check(records).constant);
}

TEST_CASE("tail exponent drift converges only pointwise") {
    const auto limit = validated(fsr_base());
    std::vector<ValidatedSystem> seq;
    for (int k = 10; k <= 20; k += 2) seq.push_back(validated(tailed_spec(0.01, drifted(std::ldexp(1.0, -k)))));
    const auto rep = lambda_convergence_check(seq, limit);
    CHECK(rep.pointwise_distances.back().hi() < 1e-4);
    CHECK(rep.verdict == LambdaVerdict::PointwiseOnly);
    CHECK_FALSE(rep.witness_c);
}

TEST_CASE("lambda check verdicts on short or divergent input") {
    const auto a = validated(fsr_base());
    CHECK_THROWS_AS(lambda_convergence_check({}, a), Error);
    CHECK(lambda_convergence_check({a}, a).verdict == LambdaVerdict::Inconclusive);
    auto moved = fsr_base();
    moved.generators[0] = Similarity{0.01, {0.5, 0.3}};
    const auto b = validated(moved);
    CHECK(lambda_convergence_check({b, b, b}, a).verdict == LambdaVerdict::Diverges);
}

TEST_CASE("theta local constancy") {
    const auto ev = sweep(ExampleV{}, {-0.1, 0.0, 0.05, Complex{0.02, 0.07}}, 1e-7);
    CHECK(theta_local_constancy_check(ev).constant);
    CHECK(theta_local_constancy_check({ev[0]}).constant);

    // tail power interpolated from 2 to 3: theta runs from 1/2 to 1/3
    GridFamily g;
    std::vector<Complex> grid;
    for (int k = 0; k <= 4; ++k) {
        const double u = 0.25 * k;
        g.entries.emplace_back(u, tailed_spec(0.2, PowerLogTail{3, 0.05, 2.0 + u, 0.0}));
        grid.emplace_back(u);
    }
    const auto records = sweep(g, grid, 1e-7);
    const auto c = theta_local_constancy_check(records);
    CHECK_FALSE(c.constant);
    REQUIRE(c.violation);
    CHECK(c.violation->first == 0);
    CHECK(c.violation->second == 4);
    CHECK(records[0].theta.contains(0.5));
    CHECK(records[4].theta.contains(1.0 / 3));
}
