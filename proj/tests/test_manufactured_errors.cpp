#include "oracle.hpp"

#include "ldgbem/errors.hpp"
#include "ldgbem/manufactured_errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace ldgbem;

namespace {

std::shared_ptr<const Discretization> make(Scheme s, int level)
{
    SchemeConfig c;
    c.scheme = s;
    c.level = level;
    return discretize(c);
}

double sq(double v) { return v * v; }

} // namespace

TEST_CASE("interior field")
{
    const ExactSolution e = exact_fields();
    CHECK(e.u({0.0, 0.0}) == 0.0);
    CHECK(e.f({0.0, 0.0}) == 0.0);
    const double step = 5e-5;
    for (const Vec2& x : {Vec2(0.1, 0.2), Vec2(0.7, 0.4), Vec2(0.95, 0.05)}) {
        const double lap = (e.u(x + Vec2(step, 0)) + e.u(x - Vec2(step, 0)) + e.u(x + Vec2(0, step)) +
                            e.u(x - Vec2(0, step)) - 4.0 * e.u(x)) /
                           (step * step);
        CHECK(e.f(x) == doctest::Approx(-lap).epsilon(1e-5).scale(1.0));
        const Vec2 fd((e.u(x + Vec2(step, 0)) - e.u(x - Vec2(step, 0))) / (2 * step),
                      (e.u(x + Vec2(0, step)) - e.u(x - Vec2(0, step))) / (2 * step));
        CHECK((fd - e.grad_u(x)).norm() <= 1e-6);
    }
}

TEST_CASE("exterior field")
{
    const ExactSolution e = exact_fields();
    CHECK(e.u_ext({1.0, 0.0}) == 0.0);
    CHECK(e.u_ext({1.0, 1.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS((void)e.u_ext({0.5, 0.5}), QueryError);
    CHECK_THROWS_AS((void)e.grad_u_ext({0.5, 0.5}), QueryError);

    // harmonic away from the centre, fourth-order stencil
    const double h = 1e-3;
    const auto d2 = [&](const Vec2& x, const Vec2& dir) {
        return (-e.u_ext(x + 2 * h * dir) + 16 * e.u_ext(x + h * dir) - 30 * e.u_ext(x) + 16 * e.u_ext(x - h * dir) -
                e.u_ext(x - 2 * h * dir)) /
               (12 * h * h);
    };
    for (const Vec2& x : {Vec2(1.5, 0.2), Vec2(-0.4, 2.0), Vec2(0.0, 0.0), Vec2(3.0, 3.0)}) {
        CHECK(std::abs(d2(x, {1, 0}) + d2(x, {0, 1})) <= 1e-8);
        const Vec2 fd((e.u_ext(x + Vec2(h, 0)) - e.u_ext(x - Vec2(h, 0))) / (2 * h),
                      (e.u_ext(x + Vec2(0, h)) - e.u_ext(x - Vec2(0, h))) / (2 * h));
        CHECK((fd - e.grad_u_ext(x)).norm() <= 1e-5);
    }
    // decays like 1/|x|
    for (double r : {1e2, 1e4, 1e6})
        CHECK(r * std::abs(e.u_ext({r, 0.3 * r})) <= 2.0);

    // ψ has zero mean on Γ
    double mean = 0.0;
    for (const auto& [a, b] : {std::pair{Vec2(0, 0), Vec2(1, 0)}, std::pair{Vec2(1, 0), Vec2(1, 1)},
                               std::pair{Vec2(1, 1), Vec2(0, 1)}, std::pair{Vec2(0, 1), Vec2(0, 0)}})
        mean += oracle::integrate_pieces([&](double t) { return e.psi(a + t * (b - a)); }, {0.0, 1.0}, 1e-14);
    CHECK(std::abs(mean) <= 1e-13);

    // data
    const Vec2 x(0.3, 0.0), n(0.0, -1.0);
    CHECK(e.g0(x) == doctest::Approx(e.u(x) - e.u_ext(x)));
    CHECK(e.g1(x, n) == doctest::Approx(-(e.grad_u(x).y() - e.grad_u_ext(x).y())));
}

TEST_CASE("errors vanish on representable fields")
{
    for (Scheme s : {Scheme::dg_bem, Scheme::conforming_bem}) {
        const auto d = make(s, 2);
        const auto lin = [](const Vec2& x) { return 1.0 + 2.0 * x.x() - x.y(); };
        const auto bnd = [](const Vec2& x) { return x.x() * x.y() - 0.25; };
        DiscreteSolution sol;
        sol.disc = d;
        sol.x = Eigen::VectorXd::Zero(d->size());
        for (std::size_t k = 0; k < d->mesh.num_triangles(); ++k) {
            const auto o = 3 * static_cast<Eigen::Index>(k);
            const double v0 = lin(d->mesh.vertex(k, 0));
            sol.x.segment<3>(o) << 2.0, -1.0, 0.0;
            sol.x.segment<3>(d->offset_u() + o) << v0, lin(d->mesh.vertex(k, 1)) - v0, lin(d->mesh.vertex(k, 2)) - v0;
        }
        sol.x.segment(d->offset_psi(), d->num_psi()) = interpolate_boundary(d->bmesh, d->space, bnd);

        const ErrorReference ref{lin, [](const Vec2&) { return Vec2(2.0, -1.0); }, bnd,
                                 [](const Vec2& x) { return Vec2(x.y(), x.x()); },
                                 [&](const Vec2& x) { return lin(x) - bnd(x); }};
        const ErrorRow r = compute_errors(sol, ref);
        CHECK(r.e_sigma <= 1e-13);
        CHECK(r.e_u <= 1e-13);
        CHECK(r.e_jump <= 1e-13);
        CHECK(r.e_jump_alpha <= 1e-13);
        CHECK(r.e_psi_broken <= 1e-7); // square root of a product of round-off terms
        CHECK(r.e_psi_global <= 1e-7);
        CHECK(r.e_flux <= 1e-13);
        CHECK(r.psi_global_fallback == (s == Scheme::dg_bem));
        CHECK(r.level == 2);
        CHECK(r.ndof == d->size());
    }
}

TEST_CASE("errors of the zero field against quadrature")
{
    const auto d = make(Scheme::conforming_bem, 4);
    DiscreteSolution sol;
    sol.disc = d;
    sol.x = Eigen::VectorXd::Zero(d->size());
    const ExactSolution e = exact_fields();
    const ErrorRow r = compute_errors(sol, e, {12, 12});

    const auto side = [](double x) {
        return oracle::integrate_pieces([x](double y) { return sq(std::sin(10.0 * x + 3.0 * y)); }, {0.0, 1.0}, 1e-15);
    };
    const double u2 = oracle::integrate_pieces(side, {0.0, 1.0}, 1e-14);
    CHECK(sq(r.e_u) == doctest::Approx(u2).epsilon(1e-8));
    CHECK(sq(r.e_sigma) == doctest::Approx(109.0 * (1.0 - u2)).epsilon(1e-8));

    double flux = 0.0, jump = 0.0;
    for (const auto& [a, b] : {std::pair{Vec2(0, 0), Vec2(1, 0)}, std::pair{Vec2(1, 0), Vec2(1, 1)},
                               std::pair{Vec2(1, 1), Vec2(0, 1)}, std::pair{Vec2(0, 1), Vec2(0, 0)}}) {
        const Vec2 t = b - a, n(t.y(), -t.x());
        flux += oracle::integrate_pieces([&](double s) { return sq(e.grad_u(a + s * t).dot(n)); }, {0.0, 1.0}, 1e-14);
        jump += oracle::integrate_pieces([&](double s) { return sq(e.g0(a + s * t)); }, {0.0, 1.0}, 1e-14);
    }
    CHECK(sq(r.e_flux) == doctest::Approx(flux).epsilon(1e-8));
    CHECK(sq(r.e_jump) == doctest::Approx(jump).epsilon(1e-8));
}

TEST_CASE("quadrature saturation")
{
    const auto d = make(Scheme::dg_bem, 4);
    const DiscreteSolution sol = solve(build_system(d, exact_fields().data()));
    const ErrorRow a = compute_errors(sol, exact_fields(), {6, 8});
    const ErrorRow b = compute_errors(sol, exact_fields(), {8, 12});
    for (const auto& name : error_column_names())
        CHECK(error_value(a, name) == doctest::Approx(error_value(b, name)).epsilon(1e-3));
}

TEST_CASE("convergence rates")
{
    std::vector<ErrorRow> rows;
    for (int l = 1; l <= 4; ++l) {
        ErrorRow r;
        r.level = l;
        r.h = std::pow(0.5, l);
        r.e_sigma = r.h;
        r.e_u = std::pow(r.h, 1.5) * (l % 2 ? 1.01 : 0.99);
        r.e_jump = l == 2 ? 0.0 : r.h * r.h;
        r.e_psi_broken = r.e_psi_global = r.e_flux = 1.0;
        rows.push_back(r);
    }
    const EocTable t = fit_eoc(rows);
    CHECK(t.column("e_sigma").slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.column("e_sigma").residual <= 1e-12);
    CHECK(t.column("e_sigma").pairwise.size() == 3);
    CHECK(t.column("e_sigma").pairwise[0] == doctest::Approx(1.0));
    CHECK(std::abs(t.column("e_u").slope - 1.5) <= 0.05);
    CHECK(t.column("e_u").residual > 0.0);
    CHECK(t.column("e_flux").slope == 0.0);

    const EocColumn& j = t.column("e_jump");
    CHECK(j.warnings.size() == 1);
    CHECK(std::isnan(j.pairwise[0]));
    CHECK(std::isnan(j.pairwise[1]));
    CHECK(j.pairwise[2] == doctest::Approx(2.0));
    CHECK(j.slope == doctest::Approx(2.0));

    CHECK_THROWS_AS((void)fit_eoc({rows[0]}), ConfigError);
    CHECK_THROWS_AS((void)t.column("e_nothing"), ConfigError);
    CHECK(fit_eoc({rows[0], rows[1]}).column("e_sigma").slope == doctest::Approx(1.0));
}

TEST_CASE("Calderon residual of the exterior data")
{
    const ExactSolution e = exact_fields();
    const double r2 = calderon_residual(*make(Scheme::conforming_bem, 2), e);
    const double r3 = calderon_residual(*make(Scheme::conforming_bem, 3), e);
    CHECK(r2 > 0.0);
    CHECK(std::log2(r2 / r3) >= 1.0);
}
