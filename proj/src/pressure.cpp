#include "ifslab/pressure.hpp"

#include <array>
#include <sstream>

#include "ifslab/error.hpp"
#include "ifslab/parallel.hpp"
#include "ifslab/tail.hpp"
#include "word_cache.hpp"

namespace ifslab {

namespace {

constexpr std::size_t kTableCap = std::size_t{1} << 20;

struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + carry; }
};

Bracket norm_power_sum(const std::vector<Bracket>& norms, double t) {
    CompensatedSum lo, hi;
    for (const Bracket& b : norms) {
        lo.add(t == 0.0 ? 1.0 : std::pow(b.lo(), t));
        hi.add(t == 0.0 ? 1.0 : std::pow(b.hi(), t));
    }
    if (lo.value() == hi.value() && t == 0.0) return Bracket::exact(lo.value());
    return Bracket::of(lo.value(), hi.value()).widened(8 * kUnitRoundoff);
}

/// Sum of tail letters at t; infinite at t = 0 or on divergence.
Bracket tail_part(const ValidatedSystem& sys, double t) {
    if (!sys.infinite()) return Bracket::exact(0.0);
    if (t <= 0.0) return Bracket::infinite();
    return tail_sum(sys.tail(), t, sys.explicit_count() + 1);
}

// Word enumeration for polynomial systems. Words grow by prepending a letter:
// phi_{i w} = phi_i o phi_w, so each node carries phi_w(x_j) and |phi_w'(x_j)|^2
// at boundary samples x_j, plus the running log of the product of sup-norms.
class WordWalker {
public:
    WordWalker(const ValidatedSystem& sys, int samples, int depth)
        : sys_(sys), m_(samples), depth_(depth), y_(depth + 1, std::vector<Complex>(samples)),
          d2_(depth + 1, std::vector<double>(samples)), offset_(depth + 1), sup_(depth + 1) {
        const SeedSpace& space = sys.space();
        const double len = space.boundary_length();
        for (int j = 0; j < m_; ++j) {
            y_[0][j] = space.boundary_point(len * j / m_);
            d2_[0][j] = 1.0;
        }
        const double s = sys.contraction_ratio().hi();
        slack_ = sys.log_lipschitz() * (len / m_) / (2.0 * (1.0 - s));
        for (const Bracket& b : sys.sup_norms()) log_sup_.push_back(std::log(b.hi()));
    }

    /// Descend along `prefix` (applied innermost first), then enumerate every
    /// extension up to the walker depth. emit(level, record) is called per word.
    template <class Emit>
    void run(const std::vector<std::size_t>& prefix, Emit&& emit) {
        int k = 0;
        for (const std::size_t letter : prefix) {
            step(k, letter);
            ++k;
        }
        if (k > 0) emit(k, record(k));
        descend(k, emit);
    }

private:
    void step(int k, std::size_t letter) {
        const Generator& g = sys_.generators()[letter];
        const auto& y = y_[k];
        const auto& d2 = d2_[k];
        auto& ny = y_[k + 1];
        auto& nd2 = d2_[k + 1];
        double peak = 0.0;
        for (int j = 0; j < m_; ++j) {
            ny[j] = apply(g, y[j]);
            nd2[j] = d2[j] * std::norm(derivative(g, y[j]));
            peak = std::max(peak, nd2[j]);
        }
        offset_[k + 1] = offset_[k];
        if (peak < 1e-200) {
            for (double& v : nd2) v /= peak;
            offset_[k + 1] += 0.5 * std::log(peak);
        }
        sup_[k + 1] = sup_[k] + log_sup_[letter];
    }

    std::array<double, 3> record(int k) const {
        const auto [mn, mx] = std::ranges::minmax(d2_[k]);
        const double log_min = 0.5 * std::log(mn) + offset_[k];
        const double log_max = 0.5 * std::log(mx) + offset_[k];
        return {log_min - slack_, log_max, std::max(log_max, std::min(sup_[k], log_max + slack_))};
    }

    template <class Emit>
    void descend(int k, Emit& emit) {
        if (k >= depth_) return;
        for (std::size_t letter = 0; letter < sys_.explicit_count(); ++letter) {
            step(k, letter);
            emit(k + 1, record(k + 1));
            descend(k + 1, emit);
        }
    }

    const ValidatedSystem& sys_;
    int m_;
    int depth_;
    double slack_ = 0.0;
    std::vector<double> log_sup_;
    std::vector<std::vector<Complex>> y_;
    std::vector<std::vector<double>> d2_;
    std::vector<double> offset_;
    std::vector<double> sup_;
};

int table_depth(std::size_t letters, std::size_t cap) {
    int depth = 0;
    std::size_t total = 0, level = 1;
    while (true) {
        if (level > cap / letters) break;
        level *= letters;
        if (total + level > cap) break;
        total += level;
        ++depth;
    }
    return depth;
}

detail::WordTable build_table(const ValidatedSystem& sys, const PressureOptions& options) {
    const std::size_t n = sys.explicit_count();
    detail::WordTable table;
    table.budget = options.word_budget;
    table.samples = options.word_samples;
    table.depth = std::max(1, table_depth(n, std::min(options.word_budget, kTableCap)));
    table.levels.assign(table.depth, {});

    // split into independent subtrees below a short prefix
    int split = 0;
    std::size_t tasks = 1;
    while (split < table.depth - 1 && tasks < 8 * thread_count()) {
        tasks *= n;
        ++split;
    }
    std::vector<std::vector<std::size_t>> prefixes(tasks, std::vector<std::size_t>(split));
    for (std::size_t p = 0; p < tasks; ++p)
        for (std::size_t q = p, k = 0; k < static_cast<std::size_t>(split); ++k, q /= n) prefixes[p][k] = q % n;

    // words shorter than the split are enumerated once up front
    if (split > 0) {
        WordWalker head(sys, options.word_samples, split - 1);
        head.run({}, [&](int level, const std::array<double, 3>& r) { table.levels[level - 1].push_back(r); });
    }
    std::vector<std::vector<std::vector<std::array<double, 3>>>> parts(tasks);
    parallel_for(tasks, [&](std::size_t p) {
        auto& local = parts[p];
        local.assign(table.depth, {});
        WordWalker walker(sys, options.word_samples, table.depth);
        walker.run(prefixes[p], [&](int level, const std::array<double, 3>& r) { local[level - 1].push_back(r); });
    });
    for (auto& part : parts)
        for (int k = 0; k < table.depth; ++k)
            table.levels[k].insert(table.levels[k].end(), part[k].begin(), part[k].end());
    return table;
}

std::shared_ptr<const detail::WordTable> word_table(const ValidatedSystem& sys, const PressureOptions& options) {
    auto& cache = sys.word_cache();
    std::lock_guard lock(cache.mutex);
    if (!cache.table || cache.table->budget != options.word_budget || cache.table->samples != options.word_samples)
        cache.table = std::make_shared<const detail::WordTable>(build_table(sys, options));
    return cache.table;
}

/// (1/k) log of the three level sums at t.
std::array<double, 3> level_logs(const std::vector<std::array<double, 3>>& words, int k, double t) {
    std::array<CompensatedSum, 3> sums;
    for (const auto& w : words)
        for (int c = 0; c < 3; ++c) sums[c].add(std::exp(t * w[c]));
    std::array<double, 3> out{};
    for (int c = 0; c < 3; ++c) out[c] = std::log(sums[c].value()) / k;
    return out;
}

PressureEstimate polynomial_finite(const ValidatedSystem& sys, double t, double tol, const PressureOptions& options) {
    const std::size_t n = sys.explicit_count();
    if (t == 0.0) return {Bracket::exact(std::log(static_cast<double>(n))), 1, true};
    const double log_k = std::log(sys.distortion());
    Bracket level1 = log(Bracket::of(norm_power_sum(sys.inf_norms(), t).lo(), norm_power_sum(sys.sup_norms(), t).hi()));
    double lo = level1.lo(), hi = level1.hi();
    if (hi - lo < tol) return {level1, 1, true};

    const auto shared = word_table(sys, options);
    const detail::WordTable& table = *shared;
    for (int k = 1; k <= table.depth; ++k) {
        const auto logs = level_logs(table.levels[k - 1], k, t);
        lo = std::max({lo, logs[0], logs[1] - t * log_k / k});
        hi = std::min(hi, logs[2]);
    }
    const Bracket value = Bracket::of(std::min(lo, hi), std::max(lo, hi)).widened(1e-13, 1e-15);
    return {value, table.depth, value.width() < tol};
}

} // namespace

std::string_view to_string(RegularityClass c) {
    switch (c) {
    case RegularityClass::CofinitelyRegular: return "CofinitelyRegular";
    case RegularityClass::StronglyRegularNonCofinite: return "StronglyRegularNonCofinite";
    case RegularityClass::CriticallyRegular: return "CriticallyRegular";
    case RegularityClass::Irregular: return "Irregular";
    case RegularityClass::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

std::string_view short_name(RegularityClass c) {
    switch (c) {
    case RegularityClass::CofinitelyRegular: return "CFR";
    case RegularityClass::StronglyRegularNonCofinite: return "FSR";
    case RegularityClass::CriticallyRegular: return "CR";
    case RegularityClass::Irregular: return "IR";
    case RegularityClass::Undetermined: return "U";
    }
    return "U";
}

std::optional<RegularityClass> parse_regularity_class(std::string_view name) {
    for (const auto c : {RegularityClass::CofinitelyRegular, RegularityClass::StronglyRegularNonCofinite,
                         RegularityClass::CriticallyRegular, RegularityClass::Irregular, RegularityClass::Undetermined})
        if (name == to_string(c) || name == short_name(c)) return c;
    return std::nullopt;
}

Bracket explicit_norm_sum(const ValidatedSystem& system, double t) { return norm_power_sum(system.sup_norms(), t); }

PressureValue pressure_level(const ValidatedSystem& system, double t, int n, const PressureOptions& options) {
    if (!(t >= 0.0)) throw Error(ErrorCode::UnsupportedExponent, "pressure needs t >= 0");
    if (n < 1) throw Error(ErrorCode::MalformedSpec, "level must be at least 1");
    if (system.similarity()) {
        const Bracket sum = explicit_norm_sum(system, t) + tail_part(system, t);
        return log(sum);
    }
    if (system.infinite()) {
        if (n > 1)
            throw Error(ErrorCode::NonsimilarityInfiniteAlphabet,
                        "word levels beyond 1 need similarity generators on an infinite alphabet");
        const Bracket tail = tail_part(system, t);
        if (tail.is_infinite()) return tail;
        return log(norm_power_sum(system.sup_norms(), t) + tail);
    }
    const std::size_t letters = system.explicit_count();
    double count = 1.0;
    for (int k = 0; k < n; ++k) count *= static_cast<double>(letters);
    if (count > static_cast<double>(options.word_budget))
        throw Error(ErrorCode::BudgetExceeded, "level " + std::to_string(n) + " needs more words than the budget");
    if (n == 1) return log(norm_power_sum(system.sup_norms(), t));
    CompensatedSum lo, hi;
    WordWalker walker(system, options.word_samples, n);
    walker.run({}, [&](int level, const std::array<double, 3>& r) {
        if (level != n) return;
        lo.add(std::exp(t * r[1]));
        hi.add(std::exp(t * r[2]));
    });
    return Bracket::of(std::log(lo.value()) / n, std::log(hi.value()) / n).widened(1e-13, 1e-15);
}

PressureEstimate pressure_estimate(const ValidatedSystem& system, double t, double tol, const PressureOptions& options) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::UnsupportedExponent, "pressure needs finite t >= 0");
    if (system.similarity()) return {pressure_level(system, t, 1, options), 1, true};
    if (system.infinite()) {
        const Bracket tail = tail_part(system, t);
        if (tail.is_infinite()) return {tail, 1, true};
        const Bracket upper = log(norm_power_sum(system.sup_norms(), t) + tail);
        const double via_inf = log(norm_power_sum(system.inf_norms(), t) + tail).lo();
        const double via_k = upper.lo() - t * std::log(system.distortion());
        const Bracket value = Bracket::of(std::min(std::max(via_inf, via_k), upper.hi()), upper.hi());
        return {value, 1, value.width() < tol};
    }
    return polynomial_finite(system, t, tol, options);
}

PressureValue pressure(const ValidatedSystem& system, double t, double tol, const PressureOptions& options) {
    const PressureEstimate e = pressure_estimate(system, t, tol, options);
    if (!e.converged) {
        std::ostringstream msg;
        msg << "pressure bracket " << e.value << " at depth " << e.depth << " is wider than " << tol;
        throw Error(ErrorCode::BudgetExceeded, msg.str(), e.value);
    }
    return e.value;
}

PressureEstimate subsystem_pressure(const ValidatedSystem& system, const std::vector<std::size_t>& letters, double t,
                                    double tol, const PressureOptions& options) {
    if (letters.empty()) throw Error(ErrorCode::EmptyAlphabet, "subsystem has no letters");
    const std::size_t n = system.explicit_count();
    const bool explicit_only = std::ranges::all_of(letters, [&](std::size_t l) { return l >= 1 && l <= n; });
    if (!system.similarity() && explicit_only) return pressure_estimate(system.restricted(letters), t, tol, options);

    CompensatedSum lo, hi, inf;
    for (const std::size_t letter : letters) {
        const Bracket b = system.letter_norm(letter);
        lo.add(std::pow(b.lo(), t));
        hi.add(std::pow(b.hi(), t));
        inf.add(letter <= n ? std::pow(system.inf_norms()[letter - 1].lo(), t) : std::pow(b.lo(), t));
    }
    if (system.similarity()) return {log(Bracket::of(lo.value(), hi.value()).widened(8 * kUnitRoundoff)), 1, true};
    const double upper = std::log(hi.value());
    const double lower = std::max(std::log(inf.value()), std::log(lo.value()) - t * std::log(system.distortion()));
    const Bracket value = Bracket::of(std::min(lower, upper), upper).widened(4 * kUnitRoundoff);
    return {value, 1, value.width() < tol};
}

Bracket finiteness_parameter(const ValidatedSystem& system, double /*tol*/) {
    if (!system.infinite()) return Bracket::exact(0.0);
    return Bracket::exact(tail_abscissa(system.tail())).widened(kUnitRoundoff);
}

RegularityReport classify(const ValidatedSystem& system, double tol, const PressureOptions& options) {
    RegularityReport report;
    report.theta = finiteness_parameter(system, tol);
    std::ostringstream ev;
    if (!system.infinite()) {
        const double n = static_cast<double>(system.explicit_count());
        report.pressure_at_theta = Bracket::exact(std::log(n));
        report.regularity = RegularityClass::StronglyRegularNonCofinite;
        ev << "FiniteRegular: finite alphabet of " << system.explicit_count() << " letters, theta = 0, P(0) = log "
           << system.explicit_count() << " > 0";
        report.evidence = ev.str();
        return report;
    }
    const double theta = tail_abscissa(system.tail());
    const PressureEstimate at = pressure_estimate(system, theta, tol, options);
    report.pressure_at_theta = at.value;
    ev << "theta = " << theta << "; ";
    if (at.value.is_infinite()) {
        report.regularity = RegularityClass::CofinitelyRegular;
        ev << "tail series diverges at theta, P(theta) = inf";
        report.evidence = ev.str();
        return report;
    }
    ev << "tail series converges at theta, P(theta) in " << at.value << "; right limit P(theta + 2^-k):";
    for (int k : {4, 8, 12, 16}) {
        const PressureEstimate e = pressure_estimate(system, theta + std::ldexp(1.0, -k), tol, options);
        ev << " k=" << k << ' ' << e.value;
    }
    const Bracket& p = at.value;
    if (p.lo() > 0.0) {
        report.regularity = RegularityClass::StronglyRegularNonCofinite;
        ev << "; P(theta) > 0";
    } else if (p.hi() < 0.0) {
        report.regularity = RegularityClass::Irregular;
        ev << "; P(theta) < 0";
    } else if (p.width() < tol) {
        report.regularity = RegularityClass::CriticallyRegular;
        ev << "; P(theta) = 0 within " << tol;
    } else {
        report.regularity = RegularityClass::Undetermined;
        ev << "; bracket straddles 0 with width >= " << tol;
    }
    report.evidence = ev.str();
    return report;
}

} // namespace ifslab
