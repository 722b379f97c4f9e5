#pragma once

#include "ldgbem/fe_spaces.hpp"
#include "ldgbem/mesh.hpp"

#include <Eigen/Core>

#include <functional>

namespace ldgbem {

/// Galerkin matrices on the segment monomials {1, t} of G_h (index 2i + a):
///   V(2i+a, 2j+b) = ∫_{T_i} ∫_{T_j} E(|x - y|) t^a s^b,
///   K(2i+a, 2j+b) = ∫_{T_i} t^a ∫_{T_j} ∂E/∂n(y) (x, y) s^b,
///   M the block diagonal L²(Γ) mass.
/// Every boundary family is a sparse combination of these monomials, so all operator blocks are
/// congruences R_rowsᵀ X R_cols of these three matrices.
struct SegmentOperators {
    Eigen::MatrixXd V;
    Eigen::MatrixXd K;
    Eigen::MatrixXd M;
};

[[nodiscard]] SegmentOperators assemble_segment_operators(const BoundaryMesh& bmesh);

/// ⟨p_i, V q_j⟩ with families given as monomial maps (2 * segments rows).
[[nodiscard]] Eigen::MatrixXd assemble_V(const SegmentOperators& ops, const SparseMatrix& rows, const SparseMatrix& cols);
[[nodiscard]] Eigen::MatrixXd assemble_K(const SegmentOperators& ops, const SparseMatrix& rows, const SparseMatrix& cols);
[[nodiscard]] Eigen::MatrixXd assemble_mass(const SegmentOperators& ops, const SparseMatrix& rows,
                                            const SparseMatrix& cols);

/// Rows: nodes p. (Tψ)(p) = ∫_Γ E(|p - y|) dψ/ds(y) ds(y), including corner nodes.
[[nodiscard]] Eigen::MatrixXd assemble_T_node_matrix(const BoundaryMesh& bmesh, const BoundaryP1Space& space);

/// Curl-curl part ⟨V dψ/ds, dφ/ds⟩ on the segment monomials (only the t-monomials couple).
[[nodiscard]] Eigen::MatrixXd curl_curl_monomials(const BoundaryMesh& bmesh, const SegmentOperators& ops);

/// d(ψ, φ) with rows = test φ, columns = trial ψ. The jump is incoming minus outgoing; with this
/// orientation the consistent coupling is -⟨Tψ, ⟦φ⟧⟩ + ⟨⟦ψ⟧, Tφ⟩.
struct DgHypersingularForm {
    Eigen::MatrixXd curl_curl; ///< symmetric
    Eigen::MatrixXd coupling;  ///< skew
    Eigen::MatrixXd penalty;   ///< symmetric, Jᵀ diag(ν) J

    [[nodiscard]] Eigen::MatrixXd matrix() const { return curl_curl + coupling + penalty; }
};

/// Throws ConfigError unless nu has one positive entry per node.
[[nodiscard]] DgHypersingularForm assemble_d(const BoundaryMesh& bmesh, const BoundaryP1Space& space,
                                             const SegmentOperators& ops, const Eigen::VectorXd& nu);

/// ⟨V dψ/ds, dφ/ds⟩ on the continuous space.
[[nodiscard]] Eigen::MatrixXd assemble_conforming_W(const BoundaryMesh& bmesh, const BoundaryP1Space& space,
                                                    const SegmentOperators& ops);

/// Boundary datum g(x, n) with n the outward normal at x.
using BoundaryFunction = std::function<double(const Vec2&, const Vec2&)>;

struct BoundaryLoad {
    Eigen::VectorXd flux;      ///< per boundary face F: ⟨g0 + V g1, 1_F⟩
    Eigen::VectorXd alpha_g0;  ///< per segment monomial: ⟨α g0, t^a⟩
    Eigen::VectorXd calderon;  ///< per segment monomial: ⟨g1, (id/2 + K) t^a⟩
};

/// alpha holds one value per segment. The data enter only through quadrature of g against the
/// closed-form potentials of the panels; `subdivisions` splits every data panel further.
[[nodiscard]] BoundaryLoad apply_rhs_boundary_terms(const BoundaryMesh& bmesh, std::size_t num_boundary_faces,
                                                    const BoundaryFunction& g0, const BoundaryFunction& g1,
                                                    const Eigen::VectorXd& alpha, int subdivisions = 1);

} // namespace ldgbem
