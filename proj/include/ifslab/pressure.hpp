#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifslab/bracket.hpp"
#include "ifslab/system.hpp"

namespace ifslab {

/// P(t) as a bracket; Bracket::infinite() when the pressure is +inf.
using PressureValue = Bracket;

struct PressureOptions {
    /// Total words enumerated per pressure evaluation (all levels together).
    std::size_t word_budget = 20'000'000;
    /// Boundary samples carried along each word for polynomial systems.
    int word_samples = 64;
};

enum class RegularityClass {
    CofinitelyRegular,
    StronglyRegularNonCofinite,
    CriticallyRegular,
    Irregular,
    Undetermined,
};

std::string_view to_string(RegularityClass c);
std::optional<RegularityClass> parse_regularity_class(std::string_view name);
/// Short tags used in sweep files: CFR, FSR, CR, IR, U.
std::string_view short_name(RegularityClass c);

struct RegularityReport {
    Bracket theta;
    PressureValue pressure_at_theta;
    RegularityClass regularity = RegularityClass::Undetermined;
    std::string evidence;
};

/// A pressure bracket with the deepest word level used; `converged` is false
/// when the word budget ran out before the requested width was reached.
struct PressureEstimate {
    PressureValue value;
    int depth = 1;
    bool converged = true;
};

/// Bracket for (1/n) log P^(n)(t).
PressureValue pressure_level(const ValidatedSystem& system, double t, int n, const PressureOptions& options = {});

/// Best bracket for P(t) aiming at width < tol, without throwing on budget.
PressureEstimate pressure_estimate(const ValidatedSystem& system, double t, double tol, const PressureOptions& options = {});

/// P(t); BudgetExceeded (best bracket attached) when the width target is not met.
PressureValue pressure(const ValidatedSystem& system, double t, double tol, const PressureOptions& options = {});

/// Pressure of the subsystem on a finite set of 1-based letters (explicit or tail).
PressureEstimate subsystem_pressure(const ValidatedSystem& system, const std::vector<std::size_t>& letters, double t,
                                    double tol, const PressureOptions& options = {});

Bracket finiteness_parameter(const ValidatedSystem& system, double tol);

RegularityReport classify(const ValidatedSystem& system, double tol, const PressureOptions& options = {});

/// Bracket for sum_{i in letters} ||phi_i'||^t over explicit letters.
Bracket explicit_norm_sum(const ValidatedSystem& system, double t);

} // namespace ifslab
