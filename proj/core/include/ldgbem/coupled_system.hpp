#pragma once

#include "ldgbem/bem_ops.hpp"
#include "ldgbem/fe_spaces.hpp"
#include "ldgbem/ldg_assembly.hpp"
#include "ldgbem/mesh.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ldgbem {

enum class Scheme { dg_bem, conforming_bem };

struct SchemeConfig {
    Scheme scheme = Scheme::dg_bem;
    int level = 2;
    int refine_factor = 1;
    double c_alpha = 1.0;
    BetaMode beta_mode = BetaMode::normal;
    double nu = 1.0;
    double tolerance = 1e-10;
    int data_subdivisions = 1;
};

/// Meshes, spaces and boundary operators of one level. Immutable once built.
struct Discretization {
    SchemeConfig config;
    TriangleMesh mesh;
    FaceSet faces;
    BoundaryMesh bmesh;
    BoundaryP1Space space;
    FluxParameters params;
    SparseMatrix trace;
    SparseMatrix face_map;
    SegmentOperators ops;

    [[nodiscard]] AssemblyContext context() const
    {
        return {mesh, faces, bmesh, space, ops, params, trace, face_map};
    }
    [[nodiscard]] Eigen::Index num_sigma() const { return 3 * static_cast<Eigen::Index>(mesh.num_triangles()); }
    [[nodiscard]] Eigen::Index num_u() const { return num_sigma(); }
    [[nodiscard]] Eigen::Index num_psi() const { return static_cast<Eigen::Index>(space.num_dofs()); }
    [[nodiscard]] Eigen::Index offset_u() const { return num_sigma(); }
    [[nodiscard]] Eigen::Index offset_psi() const { return 2 * num_sigma(); }
    [[nodiscard]] Eigen::Index offset_mu() const { return offset_psi() + num_psi(); }
    [[nodiscard]] Eigen::Index size() const { return offset_mu() + 1; }
};

/// Throws ConfigError for inconsistent settings.
[[nodiscard]] std::shared_ptr<const Discretization> discretize(const SchemeConfig& config);

/// [[A, B], [-Bᵀ, C]] bordered by the mean row/column ⟨ψ, 1⟩_Γ; unknowns (σ, u, ψ, μ).
struct BlockSystem {
    std::shared_ptr<const Discretization> disc;
    BlockMatrices blocks;
    DgHypersingularForm d_form; ///< empty for the conforming scheme
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    Eigen::VectorXd mean_row;
};

[[nodiscard]] BlockSystem build_system(std::shared_ptr<const Discretization> disc, const ProblemData& data);
[[nodiscard]] BlockSystem build_system(const SchemeConfig& config, const ProblemData& data);

struct DiscreteSolution {
    std::shared_ptr<const Discretization> disc;
    Eigen::VectorXd x;
    double residual = 0.0; ///< ‖𝔄x - F‖ / ‖F‖ (absolute when F = 0)

    [[nodiscard]] Eigen::VectorXd sigma() const { return x.segment(0, disc->num_sigma()); }
    [[nodiscard]] Eigen::VectorXd u() const { return x.segment(disc->offset_u(), disc->num_u()); }
    [[nodiscard]] Eigen::VectorXd psi() const { return x.segment(disc->offset_psi(), disc->num_psi()); }
    [[nodiscard]] double multiplier() const { return x(disc->offset_mu()); }

    /// Throws QueryError outside the closed square.
    [[nodiscard]] double eval_u(const Vec2& p) const;
    [[nodiscard]] Vec2 eval_sigma(const Vec2& p) const;
    [[nodiscard]] double eval_u(std::size_t triangle, const Vec2& p) const;
    [[nodiscard]] Vec2 eval_sigma(std::size_t triangle, const Vec2& p) const;
    /// One-sided limits (from the incoming, from the outgoing segment) at arclength s ∈ [0, 4);
    /// both equal away from nodes.
    [[nodiscard]] std::pair<double, double> eval_psi(double s) const;
    /// σ_h·n on Γ; at a face boundary the face starting at s is used.
    [[nodiscard]] double eval_flux(double s) const;
};

/// Sparse LU with iterative refinement. Throws SolverError for a singular factorization or a
/// residual above the configured tolerance.
[[nodiscard]] DiscreteSolution solve(const BlockSystem& system);

struct InvariantCheck {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// Structural checks on an assembled system: symmetry of a and of the symmetric part of c,
/// skew pairing of the b blocks, skewness of the T-coupling, positivity of V, kernel of W,
/// the double layer of constants, and (given a solution) residual and zero mean of ψ_h.
[[nodiscard]] std::vector<InvariantCheck> check_invariants(const BlockSystem& system,
                                                           const DiscreteSolution* solution = nullptr);

} // namespace ldgbem
