#include "ifslab/topology.hpp"

#include <algorithm>
#include <cmath>

#include "ifslab/error.hpp"
#include "ifslab/parallel.hpp"

namespace ifslab {

namespace {

std::vector<Complex> coefficients(const Generator& g) {
    if (const auto* s = std::get_if<Similarity>(&g)) return {s->b, s->a};
    return std::get<Polynomial>(g).coeffs;
}

Complex horner(const std::vector<Complex>& c, Complex z) {
    Complex v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
    return v;
}

Bracket widened(double v) { return Bracket::of(v * (1 - 8 * kUnitRoundoff), v * (1 + 8 * kUnitRoundoff)); }

// sup over X of |d1 z + d0|: the modulus of an affine map is convex, so the
// maximum sits on an extreme point.
double affine_sup(Complex d0, Complex d1, const SeedSpace& space) {
    if (const auto* disk = std::get_if<Disk>(&space.shape())) return std::abs(d1) * disk->radius + std::abs(d1 * disk->center + d0);
    const Complex lo = space.bbox_lo(), hi = space.bbox_hi();
    double m = 0.0;
    for (const Complex z : {lo, hi, Complex{lo.real(), hi.imag()}, Complex{hi.real(), lo.imag()}})
        m = std::max(m, std::abs(d1 * z + d0));
    return m;
}

std::size_t letter_count(const ValidatedSystem& s, std::size_t truncation) {
    return s.infinite() ? truncation : std::min(truncation, s.explicit_count());
}

} // namespace

Generator letter_map(const ValidatedSystem& system, std::size_t letter) {
    if (!system.has_letter(letter)) throw Error(ErrorCode::UnknownLetter, "letter " + std::to_string(letter) + " is not in the alphabet");
    if (letter <= system.explicit_count()) return system.generators()[letter - 1];
    const double c = tail_ratio(system.tail(), letter);
    return Similarity{c, (1.0 - c) * system.space().center()};
}

Bracket map_distance(const Generator& f, const Generator& g, const SeedSpace& space, int samples) {
    auto cf = coefficients(f);
    const auto cg = coefficients(g);
    cf.resize(std::max(cf.size(), cg.size()), 0.0);
    for (std::size_t k = 0; k < cg.size(); ++k) cf[k] -= cg[k];
    while (cf.size() > 2 && cf.back() == 0.0) cf.pop_back();
    cf.resize(std::max<std::size_t>(cf.size(), 2), 0.0);

    if (cf.size() == 2) return widened(affine_sup(cf[0], cf[1], space)) + widened(std::abs(cf[1]));

    std::vector<Complex> df(cf.size() - 1);
    for (std::size_t k = 1; k < cf.size(); ++k) df[k - 1] = static_cast<double>(k) * cf[k];
    const double rho = space.max_modulus();
    double lip0 = 0.0, lip1 = 0.0;
    for (std::size_t k = 1; k < cf.size(); ++k) lip0 += static_cast<double>(k) * std::abs(cf[k]) * std::pow(rho, double(k - 1));
    for (std::size_t k = 2; k < cf.size(); ++k)
        lip1 += static_cast<double>(k * (k - 1)) * std::abs(cf[k]) * std::pow(rho, double(k - 2));
    // maximum modulus: the sup over X is attained on the boundary
    LipschitzSearch search;
    search.initial_samples = samples;
    const double len = space.boundary_length();
    const Bracket m0 = lipschitz_max([&](double s) { return std::abs(horner(cf, space.boundary_point(s))); }, len, lip0, search);
    const Bracket m1 = lipschitz_max([&](double s) { return std::abs(horner(df, space.boundary_point(s))); }, len, lip1, search);
    return Bracket::of(std::max(0.0, m0.lo()), m0.hi()) + Bracket::of(std::max(0.0, m1.lo()), m1.hi());
}

Bracket rho_distance(const ValidatedSystem& phi, const ValidatedSystem& psi, int samples) {
    if (!(phi.space() == psi.space())) throw Error(ErrorCode::SeedMismatch, "systems live on different seed spaces");
    if (phi.infinite() || psi.infinite() || phi.explicit_count() != psi.explicit_count())
        throw Error(ErrorCode::AlphabetMismatch, "rho needs the same finite alphabet");
    Bracket sum = Bracket::exact(0.0);
    for (std::size_t i = 0; i < phi.explicit_count(); ++i)
        sum = sum + map_distance(phi.generators()[i], psi.generators()[i], phi.space(), samples);
    return sum;
}

Bracket rho_infty_distance(const ValidatedSystem& phi, const ValidatedSystem& psi, int samples, std::size_t truncation) {
    if (!(phi.space() == psi.space())) throw Error(ErrorCode::SeedMismatch, "systems live on different seed spaces");
    const std::size_t n = std::max(letter_count(phi, truncation), letter_count(psi, truncation));
    std::vector<Bracket> terms(n);
    parallel_for(n, [&](std::size_t k) {
        const std::size_t letter = k + 1;
        const double w = std::ldexp(1.0, -static_cast<int>(letter));
        if (!phi.has_letter(letter) || !psi.has_letter(letter)) {
            terms[k] = Bracket::exact(w);
            return;
        }
        const Bracket d = map_distance(letter_map(phi, letter), letter_map(psi, letter), phi.space(), samples);
        terms[k] = Bracket::of(w * std::min(1.0, d.lo()), w * std::min(1.0, d.hi()));
    });
    double lo = 0.0, hi = 0.0;
    for (const auto& t : terms) {
        lo += t.lo();
        hi += t.hi();
    }
    hi += std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(truncation, 1000)));
    return Bracket::of(lo * (1 - 4 * kUnitRoundoff * double(n)), hi * (1 + 4 * kUnitRoundoff * double(n)));
}

std::string_view to_string(LambdaVerdict v) {
    switch (v) {
    case LambdaVerdict::ConvergesLambda: return "ConvergesLambda";
    case LambdaVerdict::PointwiseOnly: return "PointwiseOnly";
    case LambdaVerdict::Diverges: return "Diverges";
    case LambdaVerdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

LambdaReport lambda_convergence_check(const std::vector<ValidatedSystem>& sequence, const ValidatedSystem& limit,
                                      std::size_t letters_checked) {
    if (sequence.empty()) throw Error(ErrorCode::EmptySequence, "lambda check needs a nonempty sequence");
    LambdaReport rep;
    const std::size_t count = sequence.size();
    std::size_t letters = limit.infinite() ? letters_checked : std::min(letters_checked, limit.explicit_count());
    for (const auto& s : sequence)
        if (!s.infinite()) letters = std::min(letters, s.explicit_count());
    rep.letters_checked = letters;

    rep.pointwise_distances.resize(count);
    rep.log_norm_deviation.assign(count, 0.0);
    std::vector<double> far_block(count, 0.0), near_block(count, 0.0);
    bool alphabet_differs = false;
    for (const auto& s : sequence)
        if (s.infinite() != limit.infinite() || (!s.infinite() && s.explicit_count() != limit.explicit_count()))
            alphabet_differs = true;

    parallel_for(count, [&](std::size_t n) {
        rep.pointwise_distances[n] = rho_infty_distance(sequence[n], limit);
        double dev = 0.0;
        for (std::size_t i = 1; i <= letters; ++i) {
            const double d = std::abs(std::log(limit.letter_norm(i).mid()) - std::log(sequence[n].letter_norm(i).mid()));
            dev = std::max(dev, d);
            if (16 * i > letters && 8 * i <= letters) near_block[n] = std::max(near_block[n], d);
            if (2 * i > letters) far_block[n] = std::max(far_block[n], d);
        }
        rep.log_norm_deviation[n] = dev;
    });

    const std::size_t last = count - 1;
    auto hi = [&](std::size_t n) { return rep.pointwise_distances[n].hi(); };
    auto lo = [&](std::size_t n) { return rep.pointwise_distances[n].lo(); };
    const bool long_enough = count >= 3;
    const bool pointwise = long_enough && hi(last) < 1e-4 && hi(last - 1) < 1e-4 && hi(last - 2) < 1e-4 &&
                           hi(last) <= hi(last - 1) && hi(last - 1) <= hi(last - 2);
    bool growing = false;
    if (limit.infinite() && letters >= 16)
        for (std::size_t n = count >= 3 ? count - 3 : 0; n < count; ++n)
            growing = growing || far_block[n] > 1.1 * near_block[n] + 1e-12;
    const bool full_scan = !limit.infinite() || letters >= 16;

    if (alphabet_differs) {
        rep.verdict = LambdaVerdict::Diverges;
        rep.reason = "alphabets differ from the limit";
    } else if (!long_enough) {
        rep.reason = "fewer than three sequence terms";
    } else if (pointwise && !growing && full_scan) {
        rep.verdict = LambdaVerdict::ConvergesLambda;
        rep.witness_c = *std::ranges::max_element(rep.log_norm_deviation);
        rep.reason = "rho_infty below 1e-4 and nonincreasing; deviations flat in the letter index";
    } else if (pointwise && growing) {
        rep.verdict = LambdaVerdict::PointwiseOnly;
        rep.reason = "rho_infty converges but log-norm deviations grow with the letter index";
    } else if (pointwise) {
        rep.reason = "too few letters to test deviation growth";
    } else if (lo(last) >= 1e-4 && lo(last) >= lo(last - 1) && lo(last - 1) >= lo(last - 2)) {
        rep.verdict = LambdaVerdict::Diverges;
        rep.reason = "rho_infty bounded away from 0 and not decreasing";
    } else {
        rep.reason = "rho_infty has not settled below 1e-4";
    }
    return rep;
}

ThetaConstancy theta_local_constancy_check(const std::vector<SweepRecord>& records) {
    std::optional<std::size_t> max_lo, min_hi;
    for (std::size_t k = 0; k < records.size(); ++k) {
        if (records[k].error) continue;
        if (!max_lo || records[k].theta.lo() > records[*max_lo].theta.lo()) max_lo = k;
        if (!min_hi || records[k].theta.hi() < records[*min_hi].theta.hi()) min_hi = k;
    }
    ThetaConstancy out;
    if (max_lo && records[*max_lo].theta.lo() > records[*min_hi].theta.hi()) {
        out.constant = false;
        out.violation = std::pair{*max_lo, *min_hi};
    }
    return out;
}

} // namespace ifslab
