#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ifslab/bracket.hpp"
#include "ifslab/error.hpp"
#include "ifslab/geometry.hpp"

namespace ifslab {

/// z -> a z + b
struct Similarity {
    Complex a;
    Complex b;
    friend bool operator==(const Similarity&, const Similarity&) = default;
};

/// z -> sum_k coeffs[k] z^k
struct Polynomial {
    std::vector<Complex> coeffs;
    friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

using Generator = std::variant<Similarity, Polynomial>;

Complex apply(const Generator& g, Complex z);
Complex derivative(const Generator& g, Complex z);
[[nodiscard]] bool is_similarity(const Generator& g);
/// Bound on |g''| over the closed disk |z| <= rho.
double second_derivative_bound(const Generator& g, double rho);
/// g o (z -> s z + c). Similarities stay similarities.
Generator compose_affine(const Generator& g, Complex s, Complex c);

struct NoTail {
    friend bool operator==(const NoTail&, const NoTail&) = default;
};

/// c_i = scale * i^-power * (ln i)^-logPower for i >= start
struct PowerLogTail {
    std::size_t start = 2;
    double scale = 1.0;
    double power = 2.0;
    double log_power = 0.0;
    friend bool operator==(const PowerLogTail&, const PowerLogTail&) = default;
};

/// c_i = scale * q^i for i >= start
struct GeometricTail {
    std::size_t start = 1;
    double scale = 1.0;
    double q = 0.5;
    friend bool operator==(const GeometricTail&, const GeometricTail&) = default;
};

using TailModel = std::variant<NoTail, PowerLogTail, GeometricTail>;

[[nodiscard]] bool has_tail(const TailModel& tail);
/// First tail index, or 0 for NoTail.
[[nodiscard]] std::size_t tail_start(const TailModel& tail);
/// Ratio c_i of tail letter i (i >= start).
double tail_ratio(const TailModel& tail, std::size_t i);

struct SystemSpec {
    SeedSpace space;
    std::vector<Generator> generators;
    TailModel tail = NoTail{};
    bool osc_declared = true;
    friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// Boundary-sample disjointness of generator images (heuristic OSC evidence).
struct SeparationReport {
    bool disjoint = true;
    std::optional<std::pair<std::size_t, std::size_t>> overlapping;  // 1-based letters
};

struct ValidationIssue {
    ErrorCode code;
    std::string message;
};

struct ValidationOutcome;

namespace detail {
struct WordTableCache;
}

/// A SystemSpec that passed validation, annotated with derivative brackets
/// and distortion data. Immutable.
class ValidatedSystem {
public:
    [[nodiscard]] const SystemSpec& spec() const { return spec_; }
    [[nodiscard]] const SeedSpace& space() const { return spec_.space; }
    [[nodiscard]] const std::vector<Generator>& generators() const { return spec_.generators; }
    [[nodiscard]] const TailModel& tail() const { return spec_.tail; }

    [[nodiscard]] std::size_t explicit_count() const { return spec_.generators.size(); }
    [[nodiscard]] bool infinite() const { return has_tail(spec_.tail); }
    /// All explicit generators are similarities (tail letters always are).
    [[nodiscard]] bool similarity() const { return similarity_; }

    [[nodiscard]] const Bracket& contraction_ratio() const { return contraction_; }
    /// sup_X |phi_i'| and min_X |phi_i'| for explicit letters, 0-based.
    [[nodiscard]] const std::vector<Bracket>& sup_norms() const { return sup_norms_; }
    [[nodiscard]] const std::vector<Bracket>& inf_norms() const { return inf_norms_; }
    /// Bound on |(log phi_i')'| over X, max over explicit letters.
    [[nodiscard]] double log_lipschitz() const { return log_lipschitz_; }
    /// Bounded distortion constant K (1 for similarity systems).
    [[nodiscard]] double distortion() const { return distortion_; }
    [[nodiscard]] const SeparationReport& separation() const { return separation_; }
    [[nodiscard]] int boundary_samples() const { return samples_; }

    /// ||phi_i'|| for a 1-based letter, explicit or tail.
    [[nodiscard]] Bracket letter_norm(std::size_t letter) const;
    [[nodiscard]] bool has_letter(std::size_t letter) const;

    /// Subsystem on the given 1-based explicit letters, reusing validated data.
    [[nodiscard]] ValidatedSystem restricted(const std::vector<std::size_t>& letters) const;

    /// Lazily built word-level table for polynomial pressure; shared by copies.
    [[nodiscard]] detail::WordTableCache& word_cache() const { return *word_cache_; }

private:
    friend ValidationOutcome validate_system(const SystemSpec& spec, int boundary_samples);
    ValidatedSystem() = default;

    SystemSpec spec_;
    bool similarity_ = true;
    Bracket contraction_;
    std::vector<Bracket> sup_norms_;
    std::vector<Bracket> inf_norms_;
    double log_lipschitz_ = 0.0;
    double distortion_ = 1.0;
    SeparationReport separation_;
    int samples_ = 4096;
    std::shared_ptr<detail::WordTableCache> word_cache_;
};

struct ValidationOutcome {
    std::optional<ValidatedSystem> system;
    std::vector<ValidationIssue> issues;
    [[nodiscard]] bool ok() const { return issues.empty(); }
};

inline constexpr int kDefaultBoundarySamples = 4096;

ValidationOutcome validate_system(const SystemSpec& spec, int boundary_samples = kDefaultBoundarySamples);
/// validate_system, throwing the first issue as an Error.
ValidatedSystem validated(const SystemSpec& spec, int boundary_samples = kDefaultBoundarySamples);

Bracket derivative_sup_norm(const Generator& g, const SeedSpace& space, int samples = kDefaultBoundarySamples);
/// min_X |g'|, valid when g' has no zero in X.
Bracket derivative_inf_norm(const Generator& g, const SeedSpace& space, int samples = kDefaultBoundarySamples);

/// ||phi_w'|| for a word of 1-based letters; UnknownLetter on a bad letter.
Bracket word_norm(const ValidatedSystem& system, std::span<const std::size_t> word);

} // namespace ifslab
