#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ifslab/bracket.hpp"
#include "ifslab/pressure.hpp"

namespace ifslab {

enum class DimensionMethod { BowenRoot, BowenInfimum, SubsystemSup };

std::string_view to_string(DimensionMethod m);

struct DimensionResult {
    Bracket h;
    DimensionMethod method = DimensionMethod::BowenRoot;
    int iterations = 0;
    /// Non-fatal remarks, e.g. the singleton-subsystem convention.
    std::string note;
};

/// h = inf{t >= 0 : P(t) <= 0} by monotone bisection on [theta, 2].
/// UndeterminedSign (best bracket attached) when the sign of P stays unresolved
/// on an interval wider than tol after the refinement rounds.
DimensionResult bowen_dimension(const ValidatedSystem& system, double tol, const PressureOptions& options = {});

/// Bowen root of the subsystem on a finite set of 1-based letters; [0,0] for a singleton.
DimensionResult finite_subsystem_dimension(const ValidatedSystem& system, const std::vector<std::size_t>& letters,
                                           double tol, const PressureOptions& options = {});

/// h of the truncations {1..k} for each k in sizes.
std::vector<DimensionResult> subsystem_sup_scan(const ValidatedSystem& system, const std::vector<std::size_t>& sizes,
                                                double tol, const PressureOptions& options = {});

} // namespace ifslab
