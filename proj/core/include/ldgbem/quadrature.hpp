#pragma once

#include <array>
#include <functional>
#include <vector>

namespace ldgbem {

/// Rule on [0, 1]; weights sum to 1.
struct SegmentRule {
    std::vector<double> points;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Rule on the reference triangle in barycentric coordinates; weights sum to 1/2.
struct TriangleRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int degree = 0;

    [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule on [0, 1], exact to degree 2n-1; 1 <= n <= 20.
[[nodiscard]] const SegmentRule& gauss_segment(int n);

/// Rule with positive weights exact to the requested degree, 1 <= order <= 12. Orders up to 6 are
/// symmetric; higher orders are collapsed tensor Gauss rules.
[[nodiscard]] const TriangleRule& gauss_triangle(int order);

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Integrable endpoint singularities are fine; interior ones should be split by the caller.
/// Throws OracleError when the error estimate stays above `tol` after `max_intervals` splits.
[[nodiscard]] double adaptive_segment_oracle(const std::function<double(double)>& f, double a, double b,
                                             double tol, int max_intervals = 4000);

} // namespace ldgbem
