#include "ifslab/system.hpp"

#include <numbers>
#include <sstream>

#include "word_cache.hpp"

namespace ifslab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string letter_label(std::size_t i) { return "generator " + std::to_string(i + 1); }

/// Total change of argument of f along the boundary, in turns.
int winding(const SeedSpace& space, int samples, const std::function<Complex(Complex)>& f) {
    const double len = space.boundary_length();
    double total = 0.0;
    Complex prev = f(space.boundary_point(0.0));
    for (int k = 1; k <= samples; ++k) {
        const Complex cur = f(space.boundary_point(len * k / samples));
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

bool similarity_self_map(const Similarity& g, const SeedSpace& space) {
    const double tol = 1e-12 * space.diameter();
    if (const auto* d = std::get_if<Disk>(&space.shape())) {
        const Complex c = g.a * d->center + g.b;
        return std::abs(c - d->center) + std::abs(g.a) * d->radius <= d->radius + tol;
    }
    const auto& r = std::get<Rectangle>(space.shape());
    for (const Complex p : {r.lower_left, Complex{r.upper_right.real(), r.lower_left.imag()}, r.upper_right,
                            Complex{r.lower_left.real(), r.upper_right.imag()}})
        if (space.inner_distance(g.a * p + g.b) < -tol) return false;
    return true;
}

using Polygon = std::vector<Complex>;

Polygon image_outline(const Generator& g, const SeedSpace& space, int samples) {
    Polygon poly;
    if (const auto* s = std::get_if<Similarity>(&g); s && !space.is_disk()) {
        const auto& r = std::get<Rectangle>(space.shape());
        for (const Complex p : {r.lower_left, Complex{r.upper_right.real(), r.lower_left.imag()}, r.upper_right,
                                Complex{r.lower_left.real(), r.upper_right.imag()}})
            poly.push_back(s->a * p + s->b);
        return poly;
    }
    const double len = space.boundary_length();
    poly.reserve(samples);
    for (int k = 0; k < samples; ++k) poly.push_back(apply(g, space.boundary_point(len * k / samples)));
    return poly;
}

/// Strictly inside by more than `margin` (ray casting plus edge distance).
bool strictly_inside(const Polygon& poly, Complex p, double margin) {
    bool inside = false;
    double edge = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Complex a = poly[i], b = poly[j];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (p.real() < x) inside = !inside;
        }
        const Complex ab = b - a;
        const double len2 = std::norm(ab);
        const double u = len2 > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0) : 0.0;
        edge = std::min(edge, std::abs(p - (a + u * ab)));
    }
    return inside && edge > margin;
}

bool outlines_overlap(const Polygon& p, const Polygon& q, double margin) {
    for (const Complex z : q)
        if (strictly_inside(p, z, margin)) return true;
    for (const Complex z : p)
        if (strictly_inside(q, z, margin)) return true;
    return false;
}

SeparationReport separation_report(const SystemSpec& spec) {
    SeparationReport report;
    const std::size_t n = spec.generators.size();
    const double margin = 1e-9 * spec.space.diameter();
    if (spec.space.is_disk() && std::ranges::all_of(spec.generators, is_similarity)) {
        const auto& d = std::get<Disk>(spec.space.shape());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const auto& a = std::get<Similarity>(spec.generators[i]);
                const auto& b = std::get<Similarity>(spec.generators[j]);
                const double gap = std::abs((a.a - b.a) * d.center + a.b - b.b) -
                                   (std::abs(a.a) + std::abs(b.a)) * d.radius;
                if (gap < -margin) return {false, std::pair{i + 1, j + 1}};
            }
        return report;
    }
    std::vector<Polygon> outlines;
    outlines.reserve(n);
    for (const auto& g : spec.generators) outlines.push_back(image_outline(g, spec.space, 512));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (outlines_overlap(outlines[i], outlines[j], margin)) return {false, std::pair{i + 1, j + 1}};
    return report;
}

void validate_tail(const SystemSpec& spec, std::vector<ValidationIssue>& issues) {
    const std::size_t n = spec.generators.size();
    std::visit(overloaded{
                   [](const NoTail&) {},
                   [&](const PowerLogTail& t) {
                       if (!(t.scale > 0) || !(t.power > 0) || !(t.log_power >= 0) || !std::isfinite(t.scale))
                           issues.push_back({ErrorCode::MalformedSpec, "tail requires scale > 0, power > 0, logPower >= 0"});
                       else if (t.start < 1 || (t.log_power > 0 && t.start < 2))
                           issues.push_back({ErrorCode::MalformedSpec, "tail start must make ln i positive"});
                       else if (!(tail_ratio(spec.tail, t.start) < 1.0))
                           issues.push_back({ErrorCode::ContractionViolation, "tail ratio c_start is not below 1"});
                   },
                   [&](const GeometricTail& t) {
                       if (!(t.scale > 0) || !(t.q > 0 && t.q < 1) || !std::isfinite(t.scale))
                           issues.push_back({ErrorCode::MalformedSpec, "geometric tail requires scale > 0 and 0 < q < 1"});
                       else if (t.start < 1)
                           issues.push_back({ErrorCode::MalformedSpec, "tail start must be at least 1"});
                       else if (!(tail_ratio(spec.tail, t.start) < 1.0))
                           issues.push_back({ErrorCode::ContractionViolation, "tail ratio c_start is not below 1"});
                   },
               },
               spec.tail);
    if (has_tail(spec.tail) && tail_start(spec.tail) != n + 1)
        issues.push_back({ErrorCode::MalformedSpec, "tail must start at letter " + std::to_string(n + 1)});
}

} // namespace

Complex apply(const Generator& g, Complex z) {
    return std::visit(overloaded{
                          [&](const Similarity& s) { return s.a * z + s.b; },
                          [&](const Polynomial& p) {
                              Complex acc{};
                              for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * z + *it;
                              return acc;
                          },
                      },
                      g);
}

Complex derivative(const Generator& g, Complex z) {
    return std::visit(overloaded{
                          [](const Similarity& s) { return s.a; },
                          [&](const Polynomial& p) {
                              Complex acc{};
                              for (std::size_t k = p.coeffs.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * p.coeffs[k];
                              return acc;
                          },
                      },
                      g);
}

bool is_similarity(const Generator& g) { return std::holds_alternative<Similarity>(g); }

double second_derivative_bound(const Generator& g, double rho) {
    const auto* p = std::get_if<Polynomial>(&g);
    if (!p) return 0.0;
    double acc = 0.0;
    for (std::size_t k = p->coeffs.size(); k-- > 2;)
        acc = acc * rho + static_cast<double>(k * (k - 1)) * std::abs(p->coeffs[k]);
    return acc * (1 + 8 * kUnitRoundoff);
}

Generator compose_affine(const Generator& g, Complex s, Complex c) {
    if (const auto* sim = std::get_if<Similarity>(&g)) return Similarity{sim->a * s, sim->a * c + sim->b};
    const auto& p = std::get<Polynomial>(g);
    std::vector<Complex> acc;
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
        // acc <- acc * (s z + c) + coeff
        std::vector<Complex> next(acc.size() + 1);
        for (std::size_t k = 0; k < acc.size(); ++k) {
            next[k] += acc[k] * c;
            next[k + 1] += acc[k] * s;
        }
        next[0] += *it;
        acc = std::move(next);
    }
    return Polynomial{std::move(acc)};
}

bool has_tail(const TailModel& tail) { return !std::holds_alternative<NoTail>(tail); }

std::size_t tail_start(const TailModel& tail) {
    return std::visit(overloaded{
                          [](const NoTail&) -> std::size_t { return 0; },
                          [](const auto& t) -> std::size_t { return t.start; },
                      },
                      tail);
}

double tail_ratio(const TailModel& tail, std::size_t i) {
    return std::visit(overloaded{
                          [](const NoTail&) { return 0.0; },
                          [&](const PowerLogTail& t) {
                              const double x = static_cast<double>(i);
                              double c = t.scale * std::pow(x, -t.power);
                              if (t.log_power != 0.0) c *= std::pow(std::log(x), -t.log_power);
                              return c;
                          },
                          [&](const GeometricTail& t) { return t.scale * std::pow(t.q, static_cast<double>(i)); },
                      },
                      tail);
}

Bracket ValidatedSystem::letter_norm(std::size_t letter) const {
    if (letter >= 1 && letter <= sup_norms_.size()) return sup_norms_[letter - 1];
    if (has_letter(letter)) return Bracket::exact(tail_ratio(spec_.tail, letter));
    throw Error(ErrorCode::UnknownLetter, "letter " + std::to_string(letter) + " is not in the alphabet");
}

bool ValidatedSystem::has_letter(std::size_t letter) const {
    return letter >= 1 && (letter <= sup_norms_.size() || infinite());
}

ValidatedSystem ValidatedSystem::restricted(const std::vector<std::size_t>& letters) const {
    ValidatedSystem sub;
    sub.spec_.space = spec_.space;
    sub.spec_.osc_declared = spec_.osc_declared;
    sub.samples_ = samples_;
    const double rho = spec_.space.max_modulus();
    double lo = 0.0, hi = 0.0;
    for (const std::size_t letter : letters) {
        if (letter < 1 || letter > explicit_count())
            throw Error(ErrorCode::UnknownLetter, "letter " + std::to_string(letter) + " is not an explicit generator");
        const Generator& g = spec_.generators[letter - 1];
        sub.spec_.generators.push_back(g);
        sub.sup_norms_.push_back(sup_norms_[letter - 1]);
        sub.inf_norms_.push_back(inf_norms_[letter - 1]);
        lo = std::max(lo, sup_norms_[letter - 1].lo());
        hi = std::max(hi, sup_norms_[letter - 1].hi());
        if (!is_similarity(g)) {
            sub.similarity_ = false;
            sub.log_lipschitz_ = std::max(sub.log_lipschitz_, second_derivative_bound(g, rho) / inf_norms_[letter - 1].lo());
        }
    }
    sub.contraction_ = Bracket::of(lo, hi);
    sub.distortion_ = sub.similarity_ ? 1.0 : std::exp(sub.log_lipschitz_ * spec_.space.diameter() / (1.0 - hi));
    sub.separation_ = separation_;
    if (!separation_.disjoint) sub.separation_ = separation_report(sub.spec_);
    sub.word_cache_ = std::make_shared<detail::WordTableCache>();
    return sub;
}

Bracket derivative_sup_norm(const Generator& g, const SeedSpace& space, int samples) {
    if (const auto* s = std::get_if<Similarity>(&g)) return Bracket::exact(std::abs(s->a));
    const double lip = second_derivative_bound(g, space.max_modulus());
    LipschitzSearch search;
    search.initial_samples = samples;
    return lipschitz_max([&](double s) { return std::abs(derivative(g, space.boundary_point(s))); },
                         space.boundary_length(), lip, search);
}

Bracket derivative_inf_norm(const Generator& g, const SeedSpace& space, int samples) {
    if (const auto* s = std::get_if<Similarity>(&g)) return Bracket::exact(std::abs(s->a));
    const double lip = second_derivative_bound(g, space.max_modulus());
    LipschitzSearch search;
    search.initial_samples = samples;
    const Bracket b = lipschitz_min([&](double s) { return std::abs(derivative(g, space.boundary_point(s))); },
                                    space.boundary_length(), lip, search);
    return Bracket::of(std::max(0.0, b.lo()), b.hi());
}

ValidationOutcome validate_system(const SystemSpec& spec, int boundary_samples) {
    ValidationOutcome out;
    auto& issues = out.issues;
    if (!spec.space.well_formed()) {
        issues.push_back({ErrorCode::MalformedSpec, "seed space must have positive radius or extents"});
        return out;
    }
    const std::size_t n = spec.generators.size();
    if (n + (has_tail(spec.tail) ? 2 : 0) < 2) {
        issues.push_back({ErrorCode::EmptyAlphabet, "alphabet needs at least two letters, got " + std::to_string(n)});
        return out;
    }
    validate_tail(spec, issues);

    ValidatedSystem sys;
    sys.spec_ = spec;
    sys.samples_ = boundary_samples;
    const SeedSpace& space = spec.space;
    const double rho = space.max_modulus();
    double log_lip = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const Generator& g = spec.generators[i];
        if (const auto* s = std::get_if<Similarity>(&g)) {
            const double r = std::abs(s->a);
            if (!(r > 0 && r < 1) || !std::isfinite(std::abs(s->b))) {
                std::ostringstream msg;
                msg << letter_label(i) << " has |a| = " << r << ", outside (0,1)";
                issues.push_back({ErrorCode::ContractionViolation, msg.str()});
                continue;
            }
            if (!similarity_self_map(*s, space))
                issues.push_back({ErrorCode::SelfMapViolation, letter_label(i) + " maps X outside itself"});
            sys.sup_norms_.push_back(Bracket::exact(r));
            sys.inf_norms_.push_back(Bracket::exact(r));
            continue;
        }
        sys.similarity_ = false;
        const auto& p = std::get<Polynomial>(g);
        if (p.coeffs.size() < 2 || !std::ranges::all_of(p.coeffs, [](Complex c) { return std::isfinite(std::abs(c)); })) {
            issues.push_back({ErrorCode::MalformedSpec, letter_label(i) + " needs finite coefficients of degree >= 1"});
            continue;
        }
        const Bracket sup = derivative_sup_norm(g, space, boundary_samples);
        if (!(sup.hi() < 1.0)) {
            std::ostringstream msg;
            msg << letter_label(i) << " has sup |phi'| in " << sup << ", not below 1";
            issues.push_back({ErrorCode::ContractionViolation, msg.str()});
            continue;
        }
        if (winding(space, boundary_samples, [&](Complex z) { return derivative(g, z); }) != 0) {
            issues.push_back({ErrorCode::ContractionViolation, letter_label(i) + " has a critical point in X"});
            continue;
        }
        const Bracket inf = derivative_inf_norm(g, space, boundary_samples);
        if (!(inf.lo() > 0.0)) {
            issues.push_back({ErrorCode::ContractionViolation, letter_label(i) + " has derivative vanishing near the boundary"});
            continue;
        }
        const Complex image_center = apply(g, space.center());
        if (winding(space, boundary_samples, [&](Complex z) { return apply(g, z) - image_center; }) != 1)
            issues.push_back({ErrorCode::MalformedSpec, letter_label(i) + " is not injective on X"});
        LipschitzSearch search;
        search.initial_samples = boundary_samples;
        const Bracket depth = lipschitz_min([&](double s) { return space.inner_distance(apply(g, space.boundary_point(s))); },
                                            space.boundary_length(), sup.hi(), search);
        if (!(depth.lo() > 0.0))
            issues.push_back({ErrorCode::SelfMapViolation, letter_label(i) + " maps boundary samples outside the interior"});
        sys.sup_norms_.push_back(sup);
        sys.inf_norms_.push_back(inf);
        log_lip = std::max(log_lip, second_derivative_bound(g, rho) / inf.lo());
    }
    if (!issues.empty()) return out;

    double lo = 0.0, hi = 0.0;
    for (const Bracket& b : sys.sup_norms_) {
        lo = std::max(lo, b.lo());
        hi = std::max(hi, b.hi());
    }
    if (has_tail(spec.tail)) {
        const double c = tail_ratio(spec.tail, tail_start(spec.tail));
        lo = std::max(lo, c);
        hi = std::max(hi, c);
    }
    sys.contraction_ = Bracket::of(lo, hi);
    sys.log_lipschitz_ = log_lip;
    sys.distortion_ = sys.similarity_ ? 1.0 : std::exp(log_lip * space.diameter() / (1.0 - hi));
    sys.separation_ = separation_report(spec);
    sys.word_cache_ = std::make_shared<detail::WordTableCache>();
    out.system = std::move(sys);
    return out;
}

ValidatedSystem validated(const SystemSpec& spec, int boundary_samples) {
    ValidationOutcome out = validate_system(spec, boundary_samples);
    if (!out.ok()) throw Error(out.issues.front().code, out.issues.front().message);
    return std::move(*out.system);
}

Bracket word_norm(const ValidatedSystem& system, std::span<const std::size_t> word) {
    double lo = 1.0, hi = 1.0;
    for (const std::size_t letter : word) {
        const Bracket b = system.letter_norm(letter);
        lo *= b.lo();
        hi *= b.hi();
    }
    if (system.similarity()) return Bracket::exact(lo);
    if (word.size() > 1) lo /= std::pow(system.distortion(), static_cast<double>(word.size() - 1));
    return Bracket::of(lo, hi).widened(2.0 * static_cast<double>(word.size()) * kUnitRoundoff);
}

} // namespace ifslab
