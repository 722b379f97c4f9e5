#pragma once

#include "ldgbem/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <functional>

namespace ldgbem {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Broken P1: on triangle k the basis is {1, ξ, η}, (ξ, η) the reference coordinates of the
/// affine map x = v0 + ξ (v1 - v0) + η (v2 - v0). Global dof 3k + i.
struct DgBasisValues {
    std::array<double, 3> values;
    std::array<Vec2, 3> gradients;
};

/// Throws QueryError if p lies outside the closure of triangle k.
[[nodiscard]] DgBasisValues eval_dg_basis(const TriangleMesh& mesh, std::size_t k, const Vec2& p);

/// Reference coordinates without the closure check.
[[nodiscard]] Eigen::Vector2d reference_coordinates(const TriangleMesh& mesh, std::size_t k, const Vec2& p);
[[nodiscard]] std::array<Vec2, 3> dg_gradients(const TriangleMesh& mesh, std::size_t k);

/// Broken lowest-order Raviart-Thomas: {(1,0), (0,1), x - x_K} with x_K the centroid.
struct RtBasisValues {
    std::array<Vec2, 3> values;
    std::array<double, 3> divergences;
};

[[nodiscard]] RtBasisValues eval_rt_basis(const TriangleMesh& mesh, std::size_t k, const Vec2& p);

/// τ·n of the three basis functions of triangle k on the edge [a, b] with unit normal n.
[[nodiscard]] std::array<double, 3> rt_normal_traces(const TriangleMesh& mesh, std::size_t k, const Vec2& a,
                                                     const Vec2& n);

[[nodiscard]] Eigen::Matrix3d dg_mass_matrix(const TriangleMesh& mesh, std::size_t k);
[[nodiscard]] Eigen::Matrix3d rt_mass_matrix(const TriangleMesh& mesh, std::size_t k);

/// Rows: boundary faces. Row F extracts the constant σ·n on F from the owner's RT coefficients.
[[nodiscard]] SparseMatrix normal_trace_map(const TriangleMesh& mesh, const FaceSet& faces);

enum class BoundarySpaceKind { broken, continuous };

/// P1 on the boundary partition. Every space is described through its per-segment monomial
/// coefficients: φ|_T(t) = c0 + c1 t with t ∈ [0, 1] the scaled arclength on T, and
/// (c0, c1) of segment i = monomial_map * coefficients at rows 2i, 2i+1.
/// broken: dofs are (c0, c1) per segment. continuous: hat functions, dof i at node i.
struct BoundaryP1Space {
    BoundarySpaceKind kind = BoundarySpaceKind::broken;
    std::size_t num_segments = 0;
    SparseMatrix monomial_map;

    [[nodiscard]] std::size_t num_dofs() const { return static_cast<std::size_t>(monomial_map.cols()); }
};

[[nodiscard]] BoundaryP1Space make_boundary_space(const BoundaryMesh& bmesh, BoundarySpaceKind kind);

/// Rows: nodes. Value at node p is φ_in(p) - φ_out(p), incoming minus outgoing in ccw order.
[[nodiscard]] SparseMatrix boundary_jump_map(const BoundaryMesh& bmesh, const BoundaryP1Space& space);

/// Rows: nodes; the two one-sided values (incoming, outgoing) of the trace at each node.
struct NodeLimits {
    SparseMatrix incoming;
    SparseMatrix outgoing;
};
[[nodiscard]] NodeLimits boundary_node_limits(const BoundaryMesh& bmesh, const BoundaryP1Space& space);

/// ⟨φ_j, 1⟩_Γ for every basis function.
[[nodiscard]] Eigen::VectorXd boundary_mean_functional(const BoundaryMesh& bmesh, const BoundaryP1Space& space);

/// Rows: 2 * segments (monomials {1, t}); column f is the indicator of boundary face f.
[[nodiscard]] SparseMatrix face_indicator_map(const BoundaryMesh& bmesh, std::size_t num_boundary_faces);

/// Continuous piecewise-linear interpolant of g at the nodes, expressed in the given space.
[[nodiscard]] Eigen::VectorXd interpolate_boundary(const BoundaryMesh& bmesh, const BoundaryP1Space& space,
                                                   const std::function<double(const Vec2&)>& g);

/// Value of φ on segment i at local parameter t.
[[nodiscard]] double eval_boundary(const BoundaryP1Space& space, const Eigen::VectorXd& coeffs, std::size_t segment,
                                   double t);

/// dφ/ds on segment i (constant).
[[nodiscard]] double eval_boundary_derivative(const BoundaryMesh& bmesh, const BoundaryP1Space& space,
                                              const Eigen::VectorXd& coeffs, std::size_t segment);

} // namespace ldgbem
