#include "ifslab/transfer_operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ifslab/error.hpp"
#include "ifslab/parallel.hpp"

namespace ifslab {

namespace {

Complex project(const SeedSpace& space, Complex z) {
    if (const auto* d = std::get_if<Disk>(&space.shape())) {
        const Complex off = z - d->center;
        const double r = std::abs(off);
        if (r > d->radius) return d->center + off * (d->radius / r);
    }
    return z;
}

// sums the row in blocks so the rows can be spread over workers
constexpr std::size_t kRowBlock = 256;

} // namespace

double DiscretizedOperator::row_sum(std::size_t row) const {
    double s = 0.0;
    for (std::size_t k = row_start[row]; k < row_start[row + 1]; ++k) s += weights[k];
    return s;
}

double DiscretizedOperator::entry(std::size_t row, std::size_t col) const {
    for (std::size_t k = row_start[row]; k < row_start[row + 1]; ++k)
        if (columns[k] == col) return weights[k];
    return 0.0;
}

void DiscretizedOperator::apply(const std::vector<double>& in, std::vector<double>& out) const {
    out.resize(size());
    const std::size_t blocks = (size() + kRowBlock - 1) / kRowBlock;
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t end = std::min(size(), (b + 1) * kRowBlock);
        for (std::size_t r = b * kRowBlock; r < end; ++r) {
            double s = 0.0;
            for (std::size_t k = row_start[r]; k < row_start[r + 1]; ++k) s += weights[k] * in[columns[k]];
            out[r] = s;
        }
    });
}

DiscretizedOperator build_operator(const ValidatedSystem& system, double t, std::size_t grid_size) {
    if (system.infinite())
        throw Error(ErrorCode::InfiniteAlphabetUnsupported, "the transfer operator needs a finite alphabet");
    if (!(t >= 0.0)) throw Error(ErrorCode::UnsupportedExponent, "transfer operator needs t >= 0");
    if (grid_size == 0) throw Error(ErrorCode::MalformedSpec, "operator grid size must be positive");

    const std::size_t g = grid_size;
    const Complex lo = system.space().bbox_lo(), hi = system.space().bbox_hi();
    const double wx = hi.real() - lo.real(), wy = hi.imag() - lo.imag();
    DiscretizedOperator op;
    op.t = t;
    op.grid_size = g;
    op.points.resize(g * g);
    for (std::size_t r = 0; r < g; ++r)
        for (std::size_t c = 0; c < g; ++c)
            op.points[r * g + c] = {lo.real() + (double(c) + 0.5) * wx / double(g), lo.imag() + (double(r) + 0.5) * wy / double(g)};

    // lattice coordinate of a point, clamped to the node hull
    auto coord = [&](double v, double origin, double width) {
        return std::clamp((v - origin) / width * double(g) - 0.5, 0.0, double(g - 1));
    };

    std::vector<std::vector<std::pair<std::size_t, double>>> rows(op.size());
    parallel_for(op.size(), [&](std::size_t node) {
        std::map<std::size_t, double> acc;
        const Complex x = project(system.space(), op.points[node]);
        for (const auto& gen : system.generators()) {
            const Complex y = apply(gen, x);
            const double w = t == 0.0 ? 1.0 : std::pow(std::abs(derivative(gen, x)), t);
            const double u = coord(y.real(), lo.real(), wx), v = coord(y.imag(), lo.imag(), wy);
            const std::size_t c0 = std::min<std::size_t>(static_cast<std::size_t>(u), g - 1);
            const std::size_t r0 = std::min<std::size_t>(static_cast<std::size_t>(v), g - 1);
            const std::size_t c1 = std::min(c0 + 1, g - 1), r1 = std::min(r0 + 1, g - 1);
            const double fu = u - double(c0), fv = v - double(r0);
            acc[r0 * g + c0] += w * (1 - fu) * (1 - fv);
            acc[r0 * g + c1] += w * fu * (1 - fv);
            acc[r1 * g + c0] += w * (1 - fu) * fv;
            acc[r1 * g + c1] += w * fu * fv;
        }
        for (const auto& [col, val] : acc)
            if (val != 0.0) rows[node].emplace_back(col, val);
    });

    op.row_start.reserve(op.size() + 1);
    op.row_start.push_back(0);
    for (const auto& row : rows) {
        for (const auto& [col, val] : row) {
            op.columns.push_back(col);
            op.weights.push_back(val);
        }
        op.row_start.push_back(op.columns.size());
    }
    return op;
}

Bracket leading_eigenvalue(const DiscretizedOperator& op, double tol, int max_iterations) {
    if (op.size() == 0) throw Error(ErrorCode::MalformedSpec, "empty operator");
    std::vector<double> v(op.size(), 1.0), w;
    // relative rounding of one sparse row product
    std::size_t longest = 1;
    for (std::size_t r = 0; r < op.size(); ++r) longest = std::max(longest, op.row_start[r + 1] - op.row_start[r]);
    const double slack = 4.0 * double(longest + 2) * kUnitRoundoff;

    Bracket best = Bracket::of(0.0, std::numeric_limits<double>::infinity());
    for (int it = 0; it < max_iterations; ++it) {
        op.apply(v, w);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0, peak = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const double q = w[k] / v[k];
            lo = std::min(lo, q);
            hi = std::max(hi, q);
            peak = std::max(peak, w[k]);
        }
        const Bracket cw = Bracket::of(lo * (1 - slack), hi * (1 + slack));
        best = best.overlaps(cw) ? best.intersect(cw) : cw;
        if (best.width() < tol) return best;
        if (!(peak > 0.0)) throw Error(ErrorCode::NoConvergence, "power iteration collapsed to zero", best);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::max(w[k] / peak, std::numeric_limits<double>::min());
    }
    throw Error(ErrorCode::NoConvergence, "power iteration did not reach the target width", best);
}

Bracket pressure_via_operator(const ValidatedSystem& system, double t, std::size_t grid_size, double tol, int max_iterations) {
    const DiscretizedOperator op = build_operator(system, t, grid_size);
    try {
        return log(leading_eigenvalue(op, tol, max_iterations));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoConvergence && e.partial() && e.partial()->lo() > 0.0)
            throw Error(ErrorCode::NoConvergence, e.what(), log(*e.partial()));
        throw;
    }
}

} // namespace ifslab
