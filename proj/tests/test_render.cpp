#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ifslab/error.hpp"
#include "ifslab/render.hpp"
#include "ifslab/rng.hpp"

using namespace ifslab;

namespace {

ValidatedSystem cantor() {
    return validated({SeedSpace(Rectangle{{0.0, -0.1}, {1.0, 0.1}}), {Similarity{1.0 / 3, 0.0}, Similarity{1.0 / 3, 2.0 / 3}}});
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("xoshiro256** reference stream") {
    // state {1, 2, 3, 4} from the reference implementation
    SplitMix64 sm(0);
    CHECK(sm.next() == 0xe220a8397b1dcdafULL);
    CHECK(sm.next() == 0x6e789e6aa1b965f4ULL);
    Xoshiro256StarStar a(42), b(42);
    for (int k = 0; k < 100; ++k) CHECK(a() == b());
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("Cantor chaos game avoids the middle third") {
    const auto sys = cantor();
    const std::size_t burn = default_burn_in(sys);
    CHECK(burn == 19);
    const auto cloud = chaos_game(sys, 100'000 + burn, 7, burn);
    CHECK(cloud.points.size() == 100'000);
    REQUIRE(cloud.weight_exponent);
    CHECK(std::abs(*cloud.weight_exponent - 0.6309297535714574) < 1e-6);
    std::size_t inside = 0;
    for (const Complex z : cloud.points) {
        CHECK(z.real() >= -1e-12);
        CHECK(z.real() <= 1.0 + 1e-12);
        CHECK(std::abs(z.imag()) <= 1e-12);
        if (z.real() > 0.34 && z.real() < 0.66) ++inside;
    }
    CHECK(inside == 0);
}

TEST_CASE("chaos game determinism and minimal run") {
    const auto sys = cantor();
    const auto a = chaos_game(sys, 1000, 99, 20), b = chaos_game(sys, 1000, 99, 20);
    CHECK(a.points == b.points);
    CHECK(chaos_game(sys, 1000, 100, 20).points != a.points);
    CHECK(chaos_game(sys, 21, 1, 20).points.size() == 1);
    CHECK_THROWS_AS(chaos_game(sys, 20, 1, 20), Error);
}

TEST_CASE("infinite alphabets are truncated for rendering") {
    const auto sys = validated({SeedSpace(Disk{}), {Similarity{0.2, 0.5}, Similarity{0.2, -0.5}}, GeometricTail{3, 0.2, 0.5}});
    const auto cloud = chaos_game(sys, 2000, 3, 50);
    CHECK(cloud.truncated);
    CHECK(cloud.letters == kRenderTruncation);
    for (const Complex z : cloud.points) CHECK(std::abs(z) <= 1.0 + 1e-12);
}

TEST_CASE("depth render regions") {
    const auto two = depth_render(cantor(), 2);
    REQUIRE(two.size() == 4);
    const double starts[] = {0.0, 2.0 / 9, 6.0 / 9, 8.0 / 9};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(two[k].hi.real() - two[k].lo.real() - 1.0 / 9) < 1e-15);
        CHECK(std::abs(two[k].lo.real() - starts[k]) < 1e-15);
    }
    const auto zero = depth_render(cantor(), 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].lo == Complex{0.0, -0.1});
    CHECK(zero[0].hi == Complex{1.0, 0.1});

    const auto disk = validated({SeedSpace(Disk{}), {Similarity{0.5, 0.5}, Similarity{0.25, -0.5}}});
    const auto one = depth_render(disk, 1);
    REQUIRE(one.size() == 2);
    CHECK(one[0].diameter == doctest::Approx(1.0));
    CHECK(one[1].diameter == doctest::Approx(0.5));
    CHECK(depth_render(disk, 10).size() == 1024);
    CHECK_THROWS_AS(depth_render(disk, 30), Error);
}

TEST_CASE("polynomial regions shrink with depth") {
    const auto sys = validated({SeedSpace(Disk{}), {Polynomial{{0.5, 0.3, 0.05}}, Polynomial{{-0.5, 0.3, -0.05}}}});
    const auto regions = depth_render(sys, 3);
    CHECK(regions.size() == 8);
    const double s = sys.contraction_ratio().hi();
    for (const auto& r : regions) {
        CHECK(r.diameter <= 2.0 * s * s * s * (1 + 1e-12));
        CHECK(r.lo.real() >= -1.0);
        CHECK(r.hi.real() <= 1.0);
    }
}

TEST_CASE("PPM output") {
    PointCloud one;
    one.points = {0.0};
    one.view_lo = {-1.0, -1.0};
    one.view_hi = {1.0, 1.0};
    const std::string ppm = encode_ppm(one, 3, 3);
    const std::string header = "P6\n3 3\n255\n";
    REQUIRE(ppm.size() == header.size() + 27);
    CHECK(ppm.substr(0, header.size()) == header);
    for (std::size_t px = 0; px < 9; ++px) {
        const unsigned char v = static_cast<unsigned char>(ppm[header.size() + 3 * px]);
        CHECK(v == (px == 4 ? 0 : 255));
    }
    CHECK_THROWS_AS(encode_ppm(PointCloud{}, 3, 3), Error);
    try {
        write_image(one, 3, 3, "/nonexistent-dir/x.ppm");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
}

TEST_CASE("Cantor image has an empty middle third and is reproducible") {
    const auto sys = cantor();
    const auto dir = std::filesystem::temp_directory_path();
    const auto p1 = dir / "ifslab_cantor_1.ppm", p2 = dir / "ifslab_cantor_2.ppm";
    write_image(chaos_game(sys, 100'019, 42, 19), 800, 100, p1);
    write_image(chaos_game(sys, 100'019, 42, 19), 800, 100, p2);
    const std::string a = slurp(p1), b = slurp(p2);
    CHECK(a == b);
    const std::size_t header = std::string("P6\n800 100\n255\n").size();
    std::vector<int> columns(800, 0);
    for (std::size_t row = 0; row < 100; ++row)
        for (std::size_t col = 0; col < 800; ++col)
            if (static_cast<unsigned char>(a[header + 3 * (row * 800 + col)]) == 0) ++columns[col];
    int middle = 0, outer = 0;
    for (std::size_t col = 0; col < 800; ++col) (col > 268 && col < 532 ? middle : outer) += columns[col];
    CHECK(middle == 0);
    CHECK(outer > 0);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}
