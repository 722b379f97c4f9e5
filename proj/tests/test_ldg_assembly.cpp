#include "oracle.hpp"

#include "ldgbem/coupled_system.hpp"
#include "ldgbem/errors.hpp"
#include "ldgbem/ldg_assembly.hpp"
#include "ldgbem/manufactured_errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace ldgbem;

namespace {

std::shared_ptr<const Discretization> make(int level, BetaMode beta = BetaMode::normal, double c_alpha = 1.0)
{
    SchemeConfig c;
    c.level = level;
    c.beta_mode = beta;
    c.c_alpha = c_alpha;
    return discretize(c);
}

/// RT coefficients of the global field (a + c x, b + c y).
Eigen::VectorXd rt_field(const TriangleMesh& m, double a, double b, double c)
{
    Eigen::VectorXd v(3 * static_cast<Eigen::Index>(m.num_triangles()));
    for (std::size_t k = 0; k < m.num_triangles(); ++k) {
        const Vec2 xk = m.centroid(k);
        v.segment<3>(3 * static_cast<Eigen::Index>(k)) << a + c * xk.x(), b + c * xk.y(), c;
    }
    return v;
}

/// Broken P1 coefficients of the global affine function g.
Eigen::VectorXd dg_field(const TriangleMesh& m, const std::function<double(const Vec2&)>& g)
{
    Eigen::VectorXd v(3 * static_cast<Eigen::Index>(m.num_triangles()));
    for (std::size_t k = 0; k < m.num_triangles(); ++k) {
        const double g0 = g(m.vertex(k, 0));
        v.segment<3>(3 * static_cast<Eigen::Index>(k)) << g0, g(m.vertex(k, 1)) - g0, g(m.vertex(k, 2)) - g0;
    }
    return v;
}

Eigen::VectorXd unit(Eigen::Index n, Eigen::Index i)
{
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    return e;
}

} // namespace

TEST_CASE("flux parameters")
{
    const TriangleMesh m = build_uniform_square_mesh(2);
    const FaceSet f = extract_faces(m);
    const FluxParameters p = make_flux_parameters(f, 2.0, BetaMode::normal, 1.0);
    CHECK(p.alpha_interior.size() == f.interior.size());
    CHECK(p.alpha_boundary[0] == doctest::Approx(8.0));
    CHECK(p.beta[3] == f.interior[3].normal_minus);
    CHECK(make_flux_parameters(f, 1.0, BetaMode::zero, 1.0).beta[3].norm() == 0.0);
    CHECK_THROWS_AS((void)make_flux_parameters(f, 0.0, BetaMode::zero, 1.0), ConfigError);
    CHECK_THROWS_AS((void)make_flux_parameters(f, 1.0, BetaMode::zero, -1.0), ConfigError);
}

TEST_CASE("a form")
{
    const auto d = make(2);
    const BlockSystem sys = build_system(d, exact_fields().data());
    const SparseMatrix& A = sys.blocks.A;
    const auto ns = d->num_sigma();

    // a field without normal trace on Γ only sees the mass
    std::size_t inner = 0;
    for (std::size_t k = 0; k < d->mesh.num_triangles(); ++k) {
        bool touches = false;
        for (int e = 0; e < 3; ++e)
            touches = touches || d->faces.triangle_faces[k][static_cast<std::size_t>(e)] < 0;
        if (!touches) {
            inner = k;
            break;
        }
    }
    const auto i0 = 3 * static_cast<Eigen::Index>(inner);
    CHECK(A.coeff(i0, i0) == doctest::Approx(std::abs(d->mesh.signed_area(inner))).epsilon(1e-14));

    // σ = (1, 0): ‖σ‖² + ⟨n_x, V n_x⟩ with the two vertical sides from the oracle
    const Eigen::VectorXd s = rt_field(d->mesh, 1.0, 0.0, 0.0);
    const Segment right{{1, 0}, {1, 1}}, left{{0, 1}, {0, 0}};
    const double self = oracle::single_layer(right, 0, right, 0);
    const double cross = oracle::single_layer(left, 0, right, 0);
    CHECK(s.dot(A * s) == doctest::Approx(1.0 + 2.0 * self - 2.0 * cross).epsilon(1e-11));

    CHECK(SparseMatrix(A - SparseMatrix(A.transpose())).norm() <= 1e-13);
    CHECK(A.rows() == ns);
}

TEST_CASE("b form")
{
    const auto d = make(2, BetaMode::zero);
    const BBlocks b = assemble_b(d->context());
    const auto& m = d->mesh;

    // with matching normal traces and continuous v, b(τ, v) = (div τ, v); τ = x, v = 1 + x
    const Eigen::VectorXd tau = rt_field(m, 0.0, 0.0, 1.0);
    const Eigen::VectorXd v = dg_field(m, [](const Vec2& x) { return 1.0 + x.x(); });
    CHECK(tau.dot(b.u * v) == doctest::Approx(3.0).epsilon(1e-13));
    const Eigen::VectorXd tc = rt_field(m, 0.3, -0.7, 0.0);
    CHECK(std::abs(tc.dot(b.u * v)) <= 1e-13);

    // one interior face, τ = (1, 0) on K+ only and v the indicator of K-: (1/2) n_x |F|
    const auto it = std::find_if(d->faces.interior.begin(), d->faces.interior.end(),
                                 [](const InteriorFace& f) { return std::abs(f.normal_minus.x()) > 0.5; });
    REQUIRE(it != d->faces.interior.end());
    const auto n = d->num_sigma();
    const double entry = unit(n, 3 * it->plus).dot(b.u * unit(n, 3 * it->minus));
    CHECK(entry == doctest::Approx(0.5 * it->normal_minus.x() * it->length).epsilon(1e-14));

    // the upwind part moves the face value to one side
    const auto dn = make(2, BetaMode::normal);
    const BBlocks bn = assemble_b(dn->context());
    const double up = unit(n, 3 * it->plus).dot(bn.u * unit(n, 3 * it->minus));
    CHECK(up == doctest::Approx(1.5 * it->normal_minus.x() * it->length).epsilon(1e-14));

    // ψ enters through -(id/2 + K), which annihilates constants
    const BoundaryP1Space& sp = d->space;
    const Eigen::VectorXd one = interpolate_boundary(d->bmesh, sp, [](const Vec2&) { return 1.0; });
    CHECK((b.psi * one).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(b.psi.rows() == n);
    CHECK(b.psi.cols() == d->num_psi());
}

TEST_CASE("c form")
{
    const auto d = make(2, BetaMode::normal, 1.5);
    const CBlocks c = assemble_c(d->context(), Eigen::MatrixXd::Zero(d->num_psi(), d->num_psi()));
    const auto n = d->num_u();

    // constants in u and ψ together carry no jump
    const Eigen::VectorXd u1 = dg_field(d->mesh, [](const Vec2&) { return 1.0; });
    const Eigen::VectorXd p1 = interpolate_boundary(d->bmesh, d->space, [](const Vec2&) { return 1.0; });
    CHECK(std::abs(u1.dot(c.uu * u1) + 2.0 * u1.dot(c.upsi * p1) + p1.dot(c.psipsi * p1)) <= 1e-12);

    // the indicator of any triangle has unit jumps on its three faces: 3 c_α
    for (std::size_t k : {0UL, 7UL, 20UL}) {
        const Eigen::VectorXd e = unit(n, 3 * static_cast<Eigen::Index>(k));
        CHECK(e.dot(c.uu * e) == doctest::Approx(4.5).epsilon(1e-14));
    }

    // positive semidefinite
    std::mt19937 rng(9);
    std::normal_distribution<double> g;
    for (int k = 0; k < 200; ++k) {
        Eigen::VectorXd u(n), p(d->num_psi());
        for (auto& x : u)
            x = g(rng);
        for (auto& x : p)
            x = g(rng);
        CHECK(u.dot(c.uu * u) + 2.0 * u.dot(c.upsi * p) + p.dot(c.psipsi * p) >= -1e-12);
    }
    CHECK_THROWS_AS((void)assemble_c(d->context(), Eigen::MatrixXd::Zero(2, 2)), AssemblyError);
}

TEST_CASE("load vector")
{
    const auto d = make(2);
    const auto ctx = d->context();
    const BoundaryFunction zero = [](const Vec2&, const Vec2&) { return 0.0; };

    const LoadVector z = assemble_load(ctx, {[](const Vec2&) { return 0.0; }, zero, zero});
    CHECK(z.u.norm() == 0.0);
    CHECK(z.sigma.norm() == 0.0);
    CHECK(z.psi.norm() == 0.0);

    const LoadVector one = assemble_load(ctx, {[](const Vec2&) { return 1.0; }, zero, zero});
    for (std::size_t k = 0; k < d->mesh.num_triangles(); ++k)
        CHECK(one.u(3 * static_cast<Eigen::Index>(k)) == doctest::Approx(std::abs(d->mesh.signed_area(k))).epsilon(1e-14));

    // a quartic source is integrated exactly against the P1 basis
    const auto f = [](const Vec2& x) { return x.x() * x.x() * x.y() * x.y() - 2.0 * x.x() * x.y() + 1.0; };
    const LoadVector q = assemble_load(ctx, {f, zero, zero});
    for (std::size_t k : {0UL, 13UL, 31UL}) {
        const Vec2 &v0 = d->mesh.vertex(k, 0), &v1 = d->mesh.vertex(k, 1), &v2 = d->mesh.vertex(k, 2);
        for (int i = 0; i < 3; ++i) {
            const auto integrand = [&](const Vec2& x) {
                const Eigen::Vector2d r = reference_coordinates(d->mesh, k, x);
                const double basis = i == 0 ? 1.0 : r(i - 1);
                return f(x) * basis;
            };
            CHECK(q.u(3 * static_cast<Eigen::Index>(k) + i) ==
                  doctest::Approx(oracle::triangle_integral(integrand, v0, v1, v2, 1e-15)).epsilon(1e-12));
        }
    }

    // g0 only: ⟨α g0, v⟩ lands on boundary triangles, ⟨g0, τ·n⟩ on σ, -⟨α g0, φ⟩ on ψ
    const BoundaryFunction g0 = [](const Vec2&, const Vec2&) { return 1.0; };
    const LoadVector l = assemble_load(ctx, {[](const Vec2&) { return 0.0; }, g0, zero});
    const double h = d->faces.boundary[0].length;
    const auto owner = static_cast<Eigen::Index>(d->faces.boundary[0].owner);
    double expect = 0.0;
    for (int e = 0; e < 3; ++e)
        if (d->faces.triangle_faces[static_cast<std::size_t>(owner)][static_cast<std::size_t>(e)] < 0)
            expect += 1.0; // α h_F = c_α
    CHECK(l.u(3 * owner) == doctest::Approx(expect).epsilon(1e-14));
    const Eigen::VectorXd ones = interpolate_boundary(d->bmesh, d->space, [](const Vec2&) { return 1.0; });
    CHECK(l.psi.dot(ones) == doctest::Approx(-4.0 / h).epsilon(1e-13));
    const Eigen::VectorXd sx = rt_field(d->mesh, 1.0, 0.0, 0.0);
    CHECK(std::abs(l.sigma.dot(sx)) <= 1e-14);
}
