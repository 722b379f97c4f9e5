#pragma once

#include "ldgbem/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <utility>
#include <vector>

namespace ldgbem {

/// Straight panel y(t) = a + t (b - a), t in [0, 1]. Its normal is the tangent rotated clockwise,
/// which is the outward normal when the panel is part of a counterclockwise boundary.
struct Segment {
    Vec2 a, b;

    [[nodiscard]] double length() const { return (b - a).norm(); }
    [[nodiscard]] Vec2 point(double t) const { return a + t * (b - a); }
    [[nodiscard]] Vec2 tangent() const { return (b - a) / length(); }
    [[nodiscard]] Vec2 normal() const
    {
        const Vec2 t = tangent();
        return {t.y(), -t.x()};
    }
};

enum class PairConfig {
    identical,          ///< same endpoints (either orientation)
    touching_collinear, ///< one shared endpoint, on one line, no overlap
    touching_angled,    ///< one shared endpoint, at an angle
    disjoint,           ///< positive distance
    unsupported,        ///< overlapping or T-junction
};

[[nodiscard]] PairConfig classify_pair(const Segment& x, const Segment& y);
[[nodiscard]] double segment_distance(const Segment& x, const Segment& y);

/// Fundamental solution of -Δ in the plane, E(r) = -ln(r) / (2π).
[[nodiscard]] double laplace_kernel(double r);

/// Highest monomial degree handled by the panel integrals.
inline constexpr int kMaxPanelDegree = 2;

/// {∫_0^1 E(|x - y(t)|) t^b |y'| dt}_{b=0..deg}; closed form near the panel.
[[nodiscard]] std::array<double, 3> single_layer_potential(const Vec2& x, const Segment& y, int deg);

/// {∫_0^1 ∂E/∂n(y) (x, y(t)) t^b |y'| dt}_{b=0..deg}, with n the panel normal.
[[nodiscard]] std::array<double, 3> double_layer_potential(const Vec2& x, const Segment& y, int deg);

/// Galerkin panel integrals I(a, b) = ∫_A ∫_B k(x, y) s^a t^b ds_x ds_y for monomials in the
/// panel parameters (arclength measure).
struct LogKernelIntegrals {
    Eigen::Matrix3d values = Eigen::Matrix3d::Zero();
    PairConfig config = PairConfig::disjoint;
    int deg_a = 0;
    int deg_b = 0;

    [[nodiscard]] double operator()(int a, int b) const { return values(a, b); }
};

/// Single layer kernel E. Closed form for identical and collinear touching panels, analytic inner
/// with graded or admissible Gauss outer integration otherwise. Throws AssemblyError for
/// overlapping panels and ConfigError for degenerate ones.
[[nodiscard]] LogKernelIntegrals log_segment_integrals(const Segment& A, int deg_a, const Segment& B, int deg_b);

/// Double layer kernel ∂E/∂n(y), y on B. Zero for collinear panels.
[[nodiscard]] LogKernelIntegrals double_layer_segment_integrals(const Segment& A, int deg_a, const Segment& B,
                                                                int deg_b);

/// Outer quadrature nodes (s, weight) on A, weights include |A|, for integrands whose only
/// singularities on A sit at the endpoints of B: graded toward those points, bisected until
/// admissible when B is close, plain Gauss when far. A may lie on the line of B.
[[nodiscard]] std::vector<std::pair<double, double>> outer_nodes(const Segment& A, const Segment& B);

/// {∫_A g(s) ∫_B E t^b dt ds}_{b=0..deg} for a smooth weight g on A. A and B may overlap.
[[nodiscard]] std::array<double, 3> single_layer_weighted(const Segment& A, const std::function<double(double)>& g,
                                                          const Segment& B, int deg_b);

/// As single_layer_weighted for the double layer kernel.
[[nodiscard]] std::array<double, 3> double_layer_weighted(const Segment& A, const std::function<double(double)>& g,
                                                          const Segment& B, int deg_b);

} // namespace ldgbem
