#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ifslab/system.hpp"

namespace ifslab {

/// Letters used when rendering an infinite alphabet (canonical tail placement).
inline constexpr std::size_t kRenderTruncation = 512;

struct PointCloud {
    std::vector<Complex> points;
    /// Orbit length before the first recorded point.
    std::size_t word_depth = 0;
    std::uint64_t seed = 0;
    /// Viewport: the seed bounding box.
    Complex view_lo;
    Complex view_hi;
    /// Letters sampled, and whether the alphabet was cut there.
    std::size_t letters = 0;
    bool truncated = false;
    /// Exponent of the letter weights |phi_i'|^h, absent for uniform weights.
    std::optional<double> weight_exponent;
};

/// ceil(log(1e-9 / diam X) / log s), at least 1.
std::size_t default_burn_in(const ValidatedSystem& system);

/// Random orbit from the seed center using xoshiro256** seeded by splitmix64(seed).
/// Letter weights |phi_i'|^h with h from the dimension solver, uniform when it fails.
/// Keeps the iterates after the first burn_in; iterations must exceed burn_in.
PointCloud chaos_game(const ValidatedSystem& system, std::size_t iterations, std::uint64_t seed, std::size_t burn_in);

struct Region {
    std::vector<std::size_t> word;
    Complex lo;
    Complex hi;
    /// Upper bound for diam phi_w(X); exact for similarities.
    double diameter = 0.0;
};

/// Bounding boxes of phi_w(X) for all words of length depth, in lexicographic order.
/// BudgetExceeded when |I|^depth exceeds the budget.
std::vector<Region> depth_render(const ValidatedSystem& system, std::size_t depth, std::size_t budget = 1'000'000);

/// Binary PPM (P6): white background, black pixels hit by the cloud. Column
/// floor((x - xmin) / (xmax - xmin) * W), rows counted from the top.
std::string encode_ppm(const PointCloud& cloud, std::size_t width, std::size_t height);

/// IoError on file failures; MalformedSpec for an empty cloud or zero size.
void write_image(const PointCloud& cloud, std::size_t width, std::size_t height, const std::filesystem::path& path);

} // namespace ifslab
