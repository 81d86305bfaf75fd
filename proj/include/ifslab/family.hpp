#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ifslab/dimension.hpp"
#include "ifslab/pressure.hpp"
#include "ifslab/system.hpp"

namespace ifslab {

/// Two letters with gamma-dependent ratios 4a(1/2 +- gamma)^2 plus the
/// normalised log tail scaled by a3, on the closed unit disk; gamma in B(0, r).
struct ExampleV {
    double a = 0.25;
    double a3 = 0.5;
    Complex z1{0.4, -0.8};
    Complex z2{-0.4, -0.8};
    Complex z3{0.0, 0.9};
    double r = 0.15;
};

/// Axis-aligned parameter rectangle (degenerate sides allowed for segments).
struct ParameterBox {
    Complex lo;
    Complex hi;
    [[nodiscard]] bool contains(Complex g) const {
        return g.real() >= lo.real() && g.real() <= hi.real() && g.imag() >= lo.imag() && g.imag() <= hi.imag();
    }
};

/// phi_i o psi_gamma for i in the scaled letters, psi_gamma(x) = gamma (x - x0) + x0.
/// An empty `scaled` list means every letter, tail included.
struct ScalingFamily {
    SystemSpec base;
    Complex center;
    std::vector<std::size_t> scaled;
    ParameterBox domain{{0.0, 0.0}, {1.0, 0.0}};
    [[nodiscard]] bool scales_all() const { return scaled.empty(); }
};

/// User-supplied systems at listed parameters.
struct GridFamily {
    std::vector<std::pair<Complex, SystemSpec>> entries;
};

using FamilySpec = std::variant<ExampleV, ScalingFamily, GridFamily>;

/// Ratio scale a3 * kappa of the ExampleV tail, with sum_{i>=3} c_i = (1 - 2a) / a3.
double example_v_tail_scale(const ExampleV& family);

SystemSpec instantiate_spec(const FamilySpec& family, Complex gamma);
/// OutOfDomain outside the parameter set; validation errors propagate.
ValidatedSystem instantiate(const FamilySpec& family, Complex gamma);

struct SweepRecord {
    Complex gamma;
    Bracket theta;
    PressureValue pressure_at_theta;
    RegularityClass regularity = RegularityClass::Undetermined;
    Bracket h;
    std::optional<std::string> error;
};

/// One record per grid point, in grid order. Failures are stored in `error`.
std::vector<SweepRecord> sweep(const FamilySpec& family, const std::vector<Complex>& grid, double tol,
                               const PressureOptions& options = {});

/// Record for a single system.
SweepRecord sweep_record(const ValidatedSystem& system, Complex gamma, double tol, const PressureOptions& options = {});

enum class FamilyType { I, II, III, IV, V, VI, VII, VIII, Undetermined };

std::string_view to_string(FamilyType t);

struct LocusVertex {
    Complex gamma;
    PressureValue pressure;
};

using Polyline = std::vector<LocusVertex>;

struct FamilyVerdict {
    FamilyType type = FamilyType::Undetermined;
    std::map<RegularityClass, std::size_t> counts;
    std::vector<Polyline> cr_locus;
    bool h_constant = false;
    std::optional<Bracket> h_value;
    std::string reason;
};

/// Case table over the observed classes; h is constant when max h.hi - min h.lo < 3 tol.
FamilyVerdict classify_family(const std::vector<SweepRecord>& records, double tol = 1e-7);

/// Rectangular parameter mesh: nodes re[i] + i im[j].
struct ParameterMesh {
    std::vector<double> re;
    std::vector<double> im;
};

/// Zero contour of gamma -> P(gamma, theta) by marching squares with bisection
/// on sign-changing edges; nodes whose bracket contains 0 are isolated vertices.
/// ThetaNotConstant when the finiteness parameter varies over the mesh.
std::vector<Polyline> cr_locus(const FamilySpec& family, const ParameterMesh& mesh, double tol,
                               const PressureOptions& options = {});

struct SmoothnessFlag {
    std::size_t index;
    Complex gamma;
    std::string reason;
};

/// Suspected non-analytic points along an ordered uniform 1-D path.
std::vector<SmoothnessFlag> smoothness_probe(const std::vector<SweepRecord>& records, double tol,
                                             double jump_factor = 10.0);

} // namespace ifslab
