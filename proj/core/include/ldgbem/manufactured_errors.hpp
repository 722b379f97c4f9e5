#pragma once

#include "ldgbem/coupled_system.hpp"
#include "ldgbem/ldg_assembly.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ldgbem {

/// u = sin(10x + 3y) inside, u^e = (x + y - 1) / ((x - 1/2)² + (y - 1/2)²) outside.
struct ExactSolution {
    [[nodiscard]] double u(const Vec2& x) const;
    [[nodiscard]] Vec2 grad_u(const Vec2& x) const;
    [[nodiscard]] double f(const Vec2& x) const; ///< -Δu = 109 u
    /// Throws QueryError at (1/2, 1/2).
    [[nodiscard]] double u_ext(const Vec2& x) const;
    [[nodiscard]] Vec2 grad_u_ext(const Vec2& x) const;
    [[nodiscard]] double g0(const Vec2& x) const { return u(x) - u_ext(x); }
    [[nodiscard]] double g1(const Vec2& x, const Vec2& n) const { return (grad_u(x) - grad_u_ext(x)).dot(n); }
    /// Boundary trace u^e|_Γ minus its mean, which vanishes by the symmetry x+y-1 -> -(x+y-1).
    [[nodiscard]] double psi(const Vec2& x) const { return u_ext(x); }

    [[nodiscard]] ProblemData data() const;
};

[[nodiscard]] ExactSolution exact_fields();

struct ErrorRow {
    int level = 0;
    double h = 0.0;
    long long ndof = 0;
    double e_sigma = 0.0;
    double e_u = 0.0;
    double e_jump = 0.0;        ///< ‖⟦û - û_h⟧‖ on all mesh faces, no α weight
    double e_jump_alpha = 0.0;  ///< same with α^{1/2}
    double e_psi_broken = 0.0;  ///< (‖e‖²_Γ + Σ_T ‖e‖_T |e|_{1,T})^{1/2}
    double e_psi_global = 0.0;  ///< (‖e‖²_Γ + ‖e‖_Γ |e|_{1,Γ})^{1/2}
    bool psi_global_fallback = false; ///< broken scheme: the global value is the broken one
    double e_flux = 0.0;        ///< ‖σ_h·n - ∂u/∂n‖_Γ
    double assembly_s = 0.0;
    double solve_s = 0.0;
};

/// The fields the error norms compare against. `grad_psi` is any extension of ψ whose gradient
/// gives the tangential derivative on Γ.
struct ErrorReference {
    std::function<double(const Vec2&)> u;
    std::function<Vec2(const Vec2&)> grad_u;
    std::function<double(const Vec2&)> psi;
    std::function<Vec2(const Vec2&)> grad_psi;
    std::function<double(const Vec2&)> g0;
};

[[nodiscard]] ErrorReference error_reference(const ExactSolution& exact);

struct ErrorOptions {
    int volume_order = 6;
    int boundary_points = 8;
};

[[nodiscard]] ErrorRow compute_errors(const DiscreteSolution& sol, const ErrorReference& ref,
                                      const ErrorOptions& opts = {});
[[nodiscard]] ErrorRow compute_errors(const DiscreteSolution& sol, const ExactSolution& exact,
                                      const ErrorOptions& opts = {});

/// Residual of ψ = (id/2 + K)ψ - Vλ for the exterior Cauchy data, tested with the indicators of
/// the boundary faces: ψ* is the nodal interpolant of u^e, λ* the face means of ∂u^e/∂n.
/// Returns (Σ_F r_F² / h_F)^{1/2}, the L²(Γ) norm of the face-wise projection of the residual.
[[nodiscard]] double calderon_residual(const Discretization& disc, const ExactSolution& exact);

struct EocColumn {
    std::string name;
    double slope = 0.0;    ///< least squares of log e against log h over the last three usable levels
    double residual = 0.0; ///< root mean square residual of that fit
    std::vector<double> pairwise; ///< log2(e_i / e_{i+1}); NaN where undefined
    std::vector<std::string> warnings;
};

struct EocTable {
    std::vector<ErrorRow> rows;
    std::vector<EocColumn> columns;

    [[nodiscard]] const EocColumn& column(const std::string& name) const;
};

/// Error columns by name, in CSV order.
[[nodiscard]] const std::vector<std::string>& error_column_names();
[[nodiscard]] double error_value(const ErrorRow& row, const std::string& name);

/// Requires at least two rows (ConfigError otherwise); nonpositive errors are left out with a warning.
[[nodiscard]] EocTable fit_eoc(const std::vector<ErrorRow>& rows);

} // namespace ldgbem
