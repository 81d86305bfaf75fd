#include "ifslab/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ifslab/dimension.hpp"
#include "ifslab/error.hpp"
#include "ifslab/parallel.hpp"
#include "ifslab/rng.hpp"
#include "ifslab/topology.hpp"

namespace ifslab {

namespace {

std::size_t render_letters(const ValidatedSystem& s) { return s.infinite() ? kRenderTruncation : s.explicit_count(); }

struct Box {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    void add(Complex z) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    }
};

} // namespace

std::size_t default_burn_in(const ValidatedSystem& system) {
    const double s = system.contraction_ratio().hi();
    const double n = std::ceil(std::log(1e-9 / system.space().diameter()) / std::log(s));
    return static_cast<std::size_t>(std::max(1.0, n));
}

PointCloud chaos_game(const ValidatedSystem& system, std::size_t iterations, std::uint64_t seed, std::size_t burn_in) {
    if (iterations <= burn_in) throw Error(ErrorCode::MalformedSpec, "iterations must exceed the burn-in");
    PointCloud cloud;
    cloud.seed = seed;
    cloud.word_depth = burn_in;
    cloud.view_lo = system.space().bbox_lo();
    cloud.view_hi = system.space().bbox_hi();
    cloud.letters = render_letters(system);
    cloud.truncated = system.infinite();

    std::vector<Generator> maps;
    for (std::size_t i = 1; i <= cloud.letters; ++i) maps.push_back(letter_map(system, i));
    std::vector<double> cumulative(cloud.letters);
    try {
        const double h = bowen_dimension(system, 1e-6).h.mid();
        cloud.weight_exponent = h;
        double acc = 0.0;
        for (std::size_t i = 0; i < cloud.letters; ++i) cumulative[i] = acc += std::pow(system.letter_norm(i + 1).mid(), h);
    } catch (const Error&) {
        cloud.weight_exponent.reset();
        for (std::size_t i = 0; i < cloud.letters; ++i) cumulative[i] = double(i + 1);
    }

    Xoshiro256StarStar rng(seed);
    Complex x = system.space().center();
    cloud.points.reserve(iterations - burn_in);
    for (std::size_t k = 0; k < iterations; ++k) {
        const double u = rng.uniform() * cumulative.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t i = std::min<std::size_t>(it - cumulative.begin(), cloud.letters - 1);
        x = ifslab::apply(maps[i], x);
        if (k >= burn_in) cloud.points.push_back(x);
    }
    return cloud;
}

std::vector<Region> depth_render(const ValidatedSystem& system, std::size_t depth, std::size_t budget) {
    const std::size_t m = render_letters(system);
    std::size_t count = 1;
    for (std::size_t d = 0; d < depth; ++d) {
        if (count > budget / m) throw Error(ErrorCode::BudgetExceeded, "depth_render: |I|^depth exceeds the region budget");
        count *= m;
    }
    std::vector<Generator> maps;
    for (std::size_t i = 1; i <= m; ++i) maps.push_back(letter_map(system, i));
    const SeedSpace& space = system.space();
    const std::size_t samples = 512;
    const double h = space.boundary_length() / double(samples);
    std::vector<Complex> boundary(samples);
    for (std::size_t k = 0; k < samples; ++k) boundary[k] = space.boundary_point(double(k) * h);

    std::vector<Region> out(count);
    parallel_for(count, [&](std::size_t index) {
        Region& r = out[index];
        r.word.resize(depth);
        for (std::size_t d = depth, q = index; d-- > 0; q /= m) r.word[d] = q % m + 1;
        Box box;
        if (system.similarity()) {
            Complex a = 1.0, b = 0.0;
            for (const std::size_t l : r.word) {
                const auto& s = std::get<Similarity>(maps[l - 1]);
                b = a * s.b + b;
                a = a * s.a;
            }
            if (const auto* disk = std::get_if<Disk>(&space.shape())) {
                const Complex c = a * disk->center + b;
                const double rad = std::abs(a) * disk->radius;
                box.add(c - Complex{rad, rad});
                box.add(c + Complex{rad, rad});
            } else {
                const Complex lo = space.bbox_lo(), hi = space.bbox_hi();
                for (const Complex z : {lo, hi, Complex{lo.real(), hi.imag()}, Complex{hi.real(), lo.imag()}}) box.add(a * z + b);
            }
            r.diameter = std::abs(a) * space.diameter();
        } else {
            double lip = 1.0;
            for (const std::size_t l : r.word) lip *= system.letter_norm(l).hi();
            for (Complex z : boundary) {
                for (auto it = r.word.rbegin(); it != r.word.rend(); ++it) z = ifslab::apply(maps[*it - 1], z);
                box.add(z);
            }
            const double pad = lip * h / 2 + 4 * kUnitRoundoff * space.max_modulus();
            box.x0 -= pad;
            box.y0 -= pad;
            box.x1 += pad;
            box.y1 += pad;
            r.diameter = lip * space.diameter();
        }
        r.lo = {box.x0, box.y0};
        r.hi = {box.x1, box.y1};
    });
    return out;
}

std::string encode_ppm(const PointCloud& cloud, std::size_t width, std::size_t height) {
    if (cloud.points.empty()) throw Error(ErrorCode::MalformedSpec, "cannot render an empty point cloud");
    if (width == 0 || height == 0) throw Error(ErrorCode::MalformedSpec, "image size must be positive");
    const std::string header = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    std::string out = header;
    out.append(width * height * 3, static_cast<char>(255));
    const double x0 = cloud.view_lo.real(), x1 = cloud.view_hi.real();
    const double y0 = cloud.view_lo.imag(), y1 = cloud.view_hi.imag();
    auto cell = [](double v, double lo, double hi, std::size_t n) -> std::optional<std::size_t> {
        const double f = (v - lo) / (hi - lo) * double(n);
        if (!(f >= 0.0) || f > double(n)) return std::nullopt;
        return std::min(static_cast<std::size_t>(f), n - 1);
    };
    for (const Complex z : cloud.points) {
        const auto col = cell(z.real(), x0, x1, width);
        const auto row = cell(y1 - z.imag(), 0.0, y1 - y0, height);
        if (!col || !row) continue;
        const std::size_t at = header.size() + 3 * (*row * width + *col);
        out[at] = out[at + 1] = out[at + 2] = 0;
    }
    return out;
}

void write_image(const PointCloud& cloud, std::size_t width, std::size_t height, const std::filesystem::path& path) {
    const std::string bytes = encode_ppm(cloud, width, height);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

} // namespace ifslab
