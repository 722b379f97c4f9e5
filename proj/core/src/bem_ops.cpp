#include "ldgbem/bem_ops.hpp"

#include "ldgbem/errors.hpp"
#include "ldgbem/log_kernel.hpp"
#include "ldgbem/quadrature.hpp"

#include <string>

namespace ldgbem {

namespace {

Segment panel(const BoundarySegment& s) { return {s.a, s.b}; }

constexpr int kDataPoints = 12;

} // namespace

SegmentOperators assemble_segment_operators(const BoundaryMesh& bmesh)
{
    const auto n = static_cast<Eigen::Index>(bmesh.num_segments());
    SegmentOperators ops;
    ops.V = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    ops.K = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    ops.M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Segment A = panel(bmesh.segments[static_cast<std::size_t>(i)]);
        const double len = A.length();
        ops.M.block<2, 2>(2 * i, 2 * i) << len, len / 2.0, len / 2.0, len / 3.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const Segment B = panel(bmesh.segments[static_cast<std::size_t>(j)]);
            if (j >= i) {
                const auto v = log_segment_integrals(A, 1, B, 1);
                ops.V.block<2, 2>(2 * i, 2 * j) = v.values.topLeftCorner<2, 2>();
                ops.V.block<2, 2>(2 * j, 2 * i) = v.values.topLeftCorner<2, 2>().transpose();
            }
            ops.K.block<2, 2>(2 * i, 2 * j) = double_layer_segment_integrals(A, 1, B, 1).values.topLeftCorner<2, 2>();
        }
    }
    return ops;
}

Eigen::MatrixXd assemble_V(const SegmentOperators& ops, const SparseMatrix& rows, const SparseMatrix& cols)
{
    return Eigen::MatrixXd(rows.transpose()) * ops.V * cols;
}

Eigen::MatrixXd assemble_K(const SegmentOperators& ops, const SparseMatrix& rows, const SparseMatrix& cols)
{
    return Eigen::MatrixXd(rows.transpose()) * ops.K * cols;
}

Eigen::MatrixXd assemble_mass(const SegmentOperators& ops, const SparseMatrix& rows, const SparseMatrix& cols)
{
    return Eigen::MatrixXd(rows.transpose()) * ops.M * cols;
}

Eigen::MatrixXd assemble_T_node_matrix(const BoundaryMesh& bmesh, const BoundaryP1Space& space)
{
    const auto n = static_cast<Eigen::Index>(bmesh.num_segments());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, 2 * n);
    for (Eigen::Index p = 0; p < n; ++p) {
        const Vec2& x = bmesh.node(static_cast<std::size_t>(p));
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& seg = bmesh.segments[static_cast<std::size_t>(j)];
            // dψ/ds on segment j is its t-coefficient over the length
            t(p, 2 * j + 1) = single_layer_potential(x, panel(seg), 0)[0] / seg.length;
        }
    }
    return t * space.monomial_map;
}

Eigen::MatrixXd curl_curl_monomials(const BoundaryMesh& bmesh, const SegmentOperators& ops)
{
    const auto n = static_cast<Eigen::Index>(bmesh.num_segments());
    Eigen::MatrixXd cc = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            cc(2 * i + 1, 2 * j + 1) = ops.V(2 * i, 2 * j) / (bmesh.segments[static_cast<std::size_t>(i)].length *
                                                              bmesh.segments[static_cast<std::size_t>(j)].length);
    return cc;
}

DgHypersingularForm assemble_d(const BoundaryMesh& bmesh, const BoundaryP1Space& space, const SegmentOperators& ops,
                               const Eigen::VectorXd& nu)
{
    if (nu.size() != static_cast<Eigen::Index>(bmesh.num_nodes()))
        throw ConfigError("nu needs one value per boundary node");
    if ((nu.array() <= 0.0).any())
        throw ConfigError("nu must be positive");
    const Eigen::MatrixXd r = space.monomial_map;
    const Eigen::MatrixXd jump = boundary_jump_map(bmesh, space);
    const Eigen::MatrixXd t = assemble_T_node_matrix(bmesh, space);
    DgHypersingularForm d;
    d.curl_curl = r.transpose() * curl_curl_monomials(bmesh, ops) * r;
    const Eigen::MatrixXd jt = jump.transpose() * t;
    d.coupling = jt.transpose() - jt;
    d.penalty = jump.transpose() * nu.asDiagonal() * jump;
    return d;
}

Eigen::MatrixXd assemble_conforming_W(const BoundaryMesh& bmesh, const BoundaryP1Space& space,
                                      const SegmentOperators& ops)
{
    const Eigen::MatrixXd r = space.monomial_map;
    return r.transpose() * curl_curl_monomials(bmesh, ops) * r;
}

BoundaryLoad apply_rhs_boundary_terms(const BoundaryMesh& bmesh, std::size_t num_boundary_faces,
                                      const BoundaryFunction& g0, const BoundaryFunction& g1,
                                      const Eigen::VectorXd& alpha, int subdivisions)
{
    if (subdivisions < 1)
        throw ConfigError("data subdivisions must be positive");
    const auto n = bmesh.num_segments();
    if (alpha.size() != static_cast<Eigen::Index>(n))
        throw ConfigError("alpha needs one value per boundary segment");
    BoundaryLoad load;
    load.flux = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_boundary_faces));
    load.alpha_g0 = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(n));
    load.calderon = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(n));

    const auto& rule = gauss_segment(kDataPoints);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& seg = bmesh.segments[i];
        if (seg.face < 0 || static_cast<std::size_t>(seg.face) >= num_boundary_faces)
            throw AssemblyError("boundary segment " + std::to_string(i) + " is not nested in a mesh face");
        const auto f = static_cast<Eigen::Index>(seg.face);
        const auto r = static_cast<Eigen::Index>(2 * i);
        for (int k = 0; k < subdivisions; ++k) {
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double t = (k + rule.points[q]) / subdivisions;
                const double w = rule.weights[q] * seg.length / subdivisions;
                const Vec2 x = seg.point(t);
                const double v0 = g0(x, seg.normal);
                const double v1 = g1(x, seg.normal);
                load.flux(f) += w * v0;
                load.alpha_g0(r) += w * alpha(r / 2) * v0;
                load.alpha_g0(r + 1) += w * alpha(r / 2) * v0 * t;
                load.calderon(r) += 0.5 * w * v1;
                load.calderon(r + 1) += 0.5 * w * v1 * t;
            }
        }
    }

    // ⟨V g1, 1_T⟩ and ⟨g1, K t^a⟩, the data panel outside and the test panel inside
    for (std::size_t j = 0; j < n; ++j) {
        const auto& src = bmesh.segments[j];
        for (int k = 0; k < subdivisions; ++k) {
            const Segment piece{src.point(static_cast<double>(k) / subdivisions),
                                src.point(static_cast<double>(k + 1) / subdivisions)};
            const std::function<double(double)> g = [&](double s) { return g1(piece.point(s), src.normal); };
            for (std::size_t i = 0; i < n; ++i) {
                const Segment test = panel(bmesh.segments[i]);
                const auto sl = single_layer_weighted(piece, g, test, 0);
                const auto dl = double_layer_weighted(piece, g, test, 1);
                load.flux(static_cast<Eigen::Index>(bmesh.segments[i].face)) += sl[0];
                load.calderon(static_cast<Eigen::Index>(2 * i)) += dl[0];
                load.calderon(static_cast<Eigen::Index>(2 * i + 1)) += dl[1];
            }
        }
    }
    return load;
}

} // namespace ldgbem
