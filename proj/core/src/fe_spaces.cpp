#include "ldgbem/fe_spaces.hpp"

#include "ldgbem/errors.hpp"
#include "ldgbem/quadrature.hpp"

#include <Eigen/LU>

#include <string>
#include <vector>

namespace ldgbem {

namespace {

Eigen::Matrix2d jacobian(const TriangleMesh& mesh, std::size_t k)
{
    Eigen::Matrix2d j;
    j.col(0) = mesh.vertex(k, 1) - mesh.vertex(k, 0);
    j.col(1) = mesh.vertex(k, 2) - mesh.vertex(k, 0);
    return j;
}

void check_closure(std::size_t k, const Eigen::Vector2d& ref)
{
    constexpr double tol = 1e-12;
    if (ref.x() < -tol || ref.y() < -tol || ref.x() + ref.y() > 1.0 + tol)
        throw QueryError("point outside triangle " + std::to_string(k));
}

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const Triplets& t)
{
    SparseMatrix m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

} // namespace

Eigen::Vector2d reference_coordinates(const TriangleMesh& mesh, std::size_t k, const Vec2& p)
{
    return jacobian(mesh, k).inverse() * (p - mesh.vertex(k, 0));
}

std::array<Vec2, 3> dg_gradients(const TriangleMesh& mesh, std::size_t k)
{
    const Eigen::Matrix2d inv = jacobian(mesh, k).inverse();
    return {Vec2::Zero(), inv.row(0).transpose(), inv.row(1).transpose()};
}

DgBasisValues eval_dg_basis(const TriangleMesh& mesh, std::size_t k, const Vec2& p)
{
    const Eigen::Vector2d ref = reference_coordinates(mesh, k, p);
    check_closure(k, ref);
    return {{1.0, ref.x(), ref.y()}, dg_gradients(mesh, k)};
}

RtBasisValues eval_rt_basis(const TriangleMesh& mesh, std::size_t k, const Vec2& p)
{
    check_closure(k, reference_coordinates(mesh, k, p));
    return {{Vec2(1.0, 0.0), Vec2(0.0, 1.0), p - mesh.centroid(k)}, {0.0, 0.0, 2.0}};
}

std::array<double, 3> rt_normal_traces(const TriangleMesh& mesh, std::size_t k, const Vec2& a, const Vec2& n)
{
    return {n.x(), n.y(), (a - mesh.centroid(k)).dot(n)};
}

Eigen::Matrix3d dg_mass_matrix(const TriangleMesh& mesh, std::size_t k)
{
    const auto& rule = gauss_triangle(2);
    const double det = std::abs(jacobian(mesh, k).determinant());
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Eigen::Vector3d phi(1.0, rule.points[q][1], rule.points[q][2]);
        m += rule.weights[q] * det * phi * phi.transpose();
    }
    return m;
}

Eigen::Matrix3d rt_mass_matrix(const TriangleMesh& mesh, std::size_t k)
{
    const auto& rule = gauss_triangle(2);
    const double det = std::abs(jacobian(mesh, k).determinant());
    const Vec2 xc = mesh.centroid(k);
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto& b = rule.points[q];
        const Vec2 x = b[0] * mesh.vertex(k, 0) + b[1] * mesh.vertex(k, 1) + b[2] * mesh.vertex(k, 2);
        Eigen::Matrix<double, 2, 3> phi;
        phi << 1.0, 0.0, x.x() - xc.x(), 0.0, 1.0, x.y() - xc.y();
        m += rule.weights[q] * det * phi.transpose() * phi;
    }
    return m;
}

SparseMatrix normal_trace_map(const TriangleMesh& mesh, const FaceSet& faces)
{
    Triplets t;
    const auto nt = mesh.num_triangles();
    for (std::size_t f = 0; f < faces.boundary.size(); ++f) {
        const auto& face = faces.boundary[f];
        if (face.owner < 0 || static_cast<std::size_t>(face.owner) >= nt)
            throw MeshError("boundary face " + std::to_string(f) + " has no owning triangle");
        const auto k = static_cast<std::size_t>(face.owner);
        const auto tr = rt_normal_traces(mesh, k, face.a, face.normal);
        for (int i = 0; i < 3; ++i)
            t.emplace_back(static_cast<int>(f), static_cast<int>(3 * k) + i, tr[static_cast<std::size_t>(i)]);
    }
    return from_triplets(static_cast<Eigen::Index>(faces.boundary.size()), static_cast<Eigen::Index>(3 * nt), t);
}

BoundaryP1Space make_boundary_space(const BoundaryMesh& bmesh, BoundarySpaceKind kind)
{
    const auto n = static_cast<int>(bmesh.num_segments());
    BoundaryP1Space space;
    space.kind = kind;
    space.num_segments = bmesh.num_segments();
    Triplets t;
    if (kind == BoundarySpaceKind::broken) {
        for (int i = 0; i < 2 * n; ++i)
            t.emplace_back(i, i, 1.0);
        space.monomial_map = from_triplets(2 * n, 2 * n, t);
    } else {
        // hat functions: φ|_i = φ_i (1 - t) + φ_{i+1} t
        for (int i = 0; i < n; ++i) {
            const int next = (i + 1) % n;
            t.emplace_back(2 * i, i, 1.0);
            t.emplace_back(2 * i + 1, i, -1.0);
            t.emplace_back(2 * i + 1, next, 1.0);
        }
        space.monomial_map = from_triplets(2 * n, n, t);
    }
    return space;
}

NodeLimits boundary_node_limits(const BoundaryMesh& bmesh, const BoundaryP1Space& space)
{
    const auto n = static_cast<int>(bmesh.num_nodes());
    Triplets in, out;
    for (int p = 0; p < n; ++p) {
        const auto i = static_cast<int>(bmesh.incoming(static_cast<std::size_t>(p)));
        const auto o = static_cast<int>(bmesh.outgoing(static_cast<std::size_t>(p)));
        in.emplace_back(p, 2 * i, 1.0);
        in.emplace_back(p, 2 * i + 1, 1.0);
        out.emplace_back(p, 2 * o, 1.0);
    }
    const SparseMatrix r = space.monomial_map;
    SparseMatrix a = from_triplets(n, 2 * n, in) * r;
    SparseMatrix b = from_triplets(n, 2 * n, out) * r;
    a.prune(0.0);
    b.prune(0.0);
    return {a, b};
}

SparseMatrix boundary_jump_map(const BoundaryMesh& bmesh, const BoundaryP1Space& space)
{
    const auto lim = boundary_node_limits(bmesh, space);
    SparseMatrix j = lim.incoming - lim.outgoing;
    j.prune(0.0);
    return j;
}

Eigen::VectorXd boundary_mean_functional(const BoundaryMesh& bmesh, const BoundaryP1Space& space)
{
    Eigen::VectorXd m(2 * static_cast<Eigen::Index>(bmesh.num_segments()));
    for (std::size_t i = 0; i < bmesh.num_segments(); ++i) {
        const double len = bmesh.segments[i].length;
        m(static_cast<Eigen::Index>(2 * i)) = len;
        m(static_cast<Eigen::Index>(2 * i + 1)) = 0.5 * len;
    }
    return space.monomial_map.transpose() * m;
}

SparseMatrix face_indicator_map(const BoundaryMesh& bmesh, std::size_t num_boundary_faces)
{
    Triplets t;
    for (std::size_t i = 0; i < bmesh.num_segments(); ++i) {
        const int f = bmesh.segments[i].face;
        if (f < 0 || static_cast<std::size_t>(f) >= num_boundary_faces)
            throw AssemblyError("boundary segment " + std::to_string(i) + " is not nested in a mesh face");
        t.emplace_back(static_cast<int>(2 * i), f, 1.0);
    }
    return from_triplets(2 * static_cast<Eigen::Index>(bmesh.num_segments()),
                         static_cast<Eigen::Index>(num_boundary_faces), t);
}

Eigen::VectorXd interpolate_boundary(const BoundaryMesh& bmesh, const BoundaryP1Space& space,
                                     const std::function<double(const Vec2&)>& g)
{
    const auto n = static_cast<Eigen::Index>(bmesh.num_nodes());
    Eigen::VectorXd nodal(n);
    for (Eigen::Index i = 0; i < n; ++i)
        nodal(i) = g(bmesh.node(static_cast<std::size_t>(i)));
    if (space.kind == BoundarySpaceKind::continuous)
        return nodal;
    Eigen::VectorXd c(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        c(2 * i) = nodal(i);
        c(2 * i + 1) = nodal((i + 1) % n) - nodal(i);
    }
    return c;
}

double eval_boundary(const BoundaryP1Space& space, const Eigen::VectorXd& coeffs, std::size_t segment, double t)
{
    const auto row = static_cast<Eigen::Index>(2 * segment);
    double c0 = 0.0, c1 = 0.0;
    for (SparseMatrix::InnerIterator it(space.monomial_map, row); it; ++it)
        c0 += it.value() * coeffs(it.col());
    for (SparseMatrix::InnerIterator it(space.monomial_map, row + 1); it; ++it)
        c1 += it.value() * coeffs(it.col());
    return c0 + c1 * t;
}

double eval_boundary_derivative(const BoundaryMesh& bmesh, const BoundaryP1Space& space,
                                const Eigen::VectorXd& coeffs, std::size_t segment)
{
    const double slope = eval_boundary(space, coeffs, segment, 1.0) - eval_boundary(space, coeffs, segment, 0.0);
    return slope / bmesh.segments[segment].length;
}

} // namespace ldgbem
