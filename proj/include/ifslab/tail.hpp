#pragma once

#include <cstddef>

#include "ifslab/bracket.hpp"
#include "ifslab/system.hpp"

namespace ifslab {

/// True iff sum_{i>=start} c_i^t diverges. Exact per tail variant.
[[nodiscard]] bool tail_diverges(const TailModel& tail, double t);

/// Bracket for sum_{i>=from} c_i^t (indices below the tail start are skipped);
/// Bracket::infinite() when the series diverges. UnsupportedExponent for t <= 0.
Bracket tail_sum(const TailModel& tail, double t, std::size_t from = 1);

/// Convergence abscissa of sum c_i^t: 1/power for PowerLogTail, 0 otherwise.
double tail_abscissa(const TailModel& tail);

/// Bracket for the integral of x^-a (ln x)^-b over [x0, inf). Requires x0 > 1
/// and convergence (a > 1, or a == 1 and b > 1).
Bracket power_log_integral(double a, double b, double x0);

} // namespace ifslab
