#pragma once

#include "ldgbem/bem_ops.hpp"
#include "ldgbem/fe_spaces.hpp"
#include "ldgbem/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace ldgbem {

enum class BetaMode {
    normal, ///< β_F = n of the minus side
    zero,
};

struct FluxParameters {
    double c_alpha = 1.0;
    BetaMode beta_mode = BetaMode::normal;
    double nu = 1.0;
    std::vector<double> alpha_interior; ///< c_α / h_F per interior face
    std::vector<double> alpha_boundary; ///< c_α / h_F per boundary face of the mesh
    std::vector<Vec2> beta;             ///< per interior face
};

/// Throws ConfigError for nonpositive c_α or ν.
[[nodiscard]] FluxParameters make_flux_parameters(const FaceSet& faces, double c_alpha, BetaMode beta_mode,
                                                  double nu);

/// Everything the interior forms need to see; references only.
struct AssemblyContext {
    const TriangleMesh& mesh;
    const FaceSet& faces;
    const BoundaryMesh& bmesh;
    const BoundaryP1Space& space;
    const SegmentOperators& ops;
    const FluxParameters& params;
    const SparseMatrix& trace;    ///< normal_trace_map: boundary faces × σ
    const SparseMatrix& face_map; ///< face_indicator_map: segment monomials × boundary faces
};

/// Rows are test functions, columns trial functions. σ-blocks span 3 dofs per triangle,
/// u-blocks 3 per triangle, ψ-blocks the boundary space.
struct BlockMatrices {
    SparseMatrix A;     ///< a(σ, τ)
    SparseMatrix B_u;   ///< b(τ, (u, 0)), rows τ
    SparseMatrix B_psi; ///< b(τ, (0, ψ)), rows τ
    SparseMatrix C_uu;
    SparseMatrix C_upsi; ///< rows v, columns ψ
    Eigen::MatrixXd C_psipsi;
    Eigen::MatrixXd hypersingular; ///< d-form (DG) or W (conforming) inside C_psipsi
    Eigen::MatrixXd V_faces;       ///< ⟨1_F, V 1_F'⟩ on boundary faces
};

[[nodiscard]] SparseMatrix assemble_a(const AssemblyContext& ctx, const Eigen::MatrixXd& V_faces);

struct BBlocks {
    SparseMatrix u;
    SparseMatrix psi;
};
[[nodiscard]] BBlocks assemble_b(const AssemblyContext& ctx);

struct CBlocks {
    SparseMatrix uu;
    SparseMatrix upsi;
    Eigen::MatrixXd psipsi; ///< α penalty plus the hypersingular form
};
[[nodiscard]] CBlocks assemble_c(const AssemblyContext& ctx, const Eigen::MatrixXd& hypersingular);

struct ProblemData {
    std::function<double(const Vec2&)> f;
    BoundaryFunction g0;
    BoundaryFunction g1;
};

struct LoadVector {
    Eigen::VectorXd sigma;
    Eigen::VectorXd u;
    Eigen::VectorXd psi;
};

[[nodiscard]] LoadVector assemble_load(const AssemblyContext& ctx, const ProblemData& data, int data_subdivisions = 1);

} // namespace ldgbem
