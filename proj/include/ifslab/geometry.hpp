#pragma once

#include <complex>
#include <functional>
#include <variant>

#include "ifslab/bracket.hpp"

namespace ifslab {

using Complex = std::complex<double>;

struct Disk {
    Complex center;
    double radius = 1.0;
};

struct Rectangle {
    Complex lower_left;
    Complex upper_right;
};

/// Compact seed space X in the plane: a closed disk or an axis-aligned closed rectangle.
/// Both are convex, equal the closure of their interior and satisfy the cone condition.
class SeedSpace {
public:
    SeedSpace() : shape_(Disk{}) {}
    explicit SeedSpace(Disk d) : shape_(d) {}
    explicit SeedSpace(Rectangle r) : shape_(r) {}

    [[nodiscard]] const std::variant<Disk, Rectangle>& shape() const { return shape_; }
    [[nodiscard]] bool is_disk() const { return std::holds_alternative<Disk>(shape_); }

    /// Signed distance to the boundary, positive inside.
    [[nodiscard]] double inner_distance(Complex z) const;
    [[nodiscard]] bool contains(Complex z, double margin = 0.0) const { return inner_distance(z) >= margin; }

    [[nodiscard]] Complex center() const;
    [[nodiscard]] Complex bbox_lo() const;
    [[nodiscard]] Complex bbox_hi() const;
    [[nodiscard]] double diameter() const;
    /// max |z| over X.
    [[nodiscard]] double max_modulus() const;
    /// sup over X of |z - p|.
    [[nodiscard]] double max_distance_from(Complex p) const;

    /// Arc-length parametrisation of the boundary curve, s in [0, boundary_length()).
    [[nodiscard]] double boundary_length() const;
    [[nodiscard]] Complex boundary_point(double s) const;

    /// True iff the structural invariants (positive radius / extents) hold.
    [[nodiscard]] bool well_formed() const;

    friend bool operator==(const SeedSpace& a, const SeedSpace& b);

private:
    std::variant<Disk, Rectangle> shape_;
};

struct LipschitzSearch {
    int initial_samples = 4096;
    double target_slack = 1e-10;
    int max_evaluations = 2'000'000;
};

/// Bracket for max of f over [0, length) when f is `lipschitz`-Lipschitz and periodic.
/// Branch and bound: intervals whose Lipschitz upper bound cannot beat the best
/// sample by more than the target slack are discarded.
Bracket lipschitz_max(const std::function<double(double)>& f, double length, double lipschitz,
                      const LipschitzSearch& search = {});

/// Bracket for min of f, same contract as lipschitz_max.
Bracket lipschitz_min(const std::function<double(double)>& f, double length, double lipschitz,
                      const LipschitzSearch& search = {});

} // namespace ifslab
