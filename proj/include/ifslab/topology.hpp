#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ifslab/bracket.hpp"
#include "ifslab/family.hpp"
#include "ifslab/system.hpp"

namespace ifslab {

/// Letter i of a system as a map: the explicit generator, or for tail letters
/// the similarity of ratio c_i about the seed center.
Generator letter_map(const ValidatedSystem& system, std::size_t letter);

/// sup_X |f - g| + sup_X |f' - g'|, exact for similarities.
Bracket map_distance(const Generator& f, const Generator& g, const SeedSpace& space, int samples = 4096);

/// Sum over the letters of map_distance. AlphabetMismatch, SeedMismatch.
Bracket rho_distance(const ValidatedSystem& phi, const ValidatedSystem& psi, int samples = 4096);

/// sum_{i <= N} 2^-i min(1, map_distance), plus 2^-N on the upper end.
/// A letter present in only one system contributes 2^-i. SeedMismatch.
Bracket rho_infty_distance(const ValidatedSystem& phi, const ValidatedSystem& psi, int samples = 4096,
                           std::size_t truncation = 512);

enum class LambdaVerdict { ConvergesLambda, PointwiseOnly, Diverges, Inconclusive };

std::string_view to_string(LambdaVerdict v);

struct LambdaReport {
    std::vector<Bracket> pointwise_distances;
    /// sup over checked letters of |log||phi_i'|| - log||(phi_i^n)'|||, per index n
    std::vector<double> log_norm_deviation;
    std::optional<double> witness_c;
    LambdaVerdict verdict = LambdaVerdict::Inconclusive;
    std::size_t letters_checked = 0;
    std::string reason;
};

/// Pointwise convergence: the last three rho_infty upper ends below 1e-4 and nonincreasing.
/// Deviations count as unbounded when, at one of the last three indices, the maximum over
/// letters (L/2, L] exceeds 1.1 times the maximum over (L/16, L/8]. EmptySequence.
LambdaReport lambda_convergence_check(const std::vector<ValidatedSystem>& sequence, const ValidatedSystem& limit,
                                      std::size_t letters_checked = 10'000);

struct ThetaConstancy {
    bool constant = true;
    /// Record indices (i, j) with theta_i.lo > theta_j.hi.
    std::optional<std::pair<std::size_t, std::size_t>> violation;
};

/// All theta brackets share a point; records with errors are skipped.
ThetaConstancy theta_local_constancy_check(const std::vector<SweepRecord>& records);

} // namespace ifslab
