#include "ldgbem/manufactured_errors.hpp"

#include "ldgbem/errors.hpp"
#include "ldgbem/quadrature.hpp"

#include <cmath>
#include <limits>

namespace ldgbem {

double ExactSolution::u(const Vec2& x) const { return std::sin(10.0 * x.x() + 3.0 * x.y()); }

Vec2 ExactSolution::grad_u(const Vec2& x) const
{
    const double c = std::cos(10.0 * x.x() + 3.0 * x.y());
    return {10.0 * c, 3.0 * c};
}

double ExactSolution::f(const Vec2& x) const { return 109.0 * u(x); }

double ExactSolution::u_ext(const Vec2& x) const
{
    const double dx = x.x() - 0.5, dy = x.y() - 0.5;
    const double r2 = dx * dx + dy * dy;
    if (r2 == 0.0)
        throw QueryError("exterior solution is singular at (1/2, 1/2)");
    return (x.x() + x.y() - 1.0) / r2;
}

Vec2 ExactSolution::grad_u_ext(const Vec2& x) const
{
    const double dx = x.x() - 0.5, dy = x.y() - 0.5;
    const double r2 = dx * dx + dy * dy;
    if (r2 == 0.0)
        throw QueryError("exterior solution is singular at (1/2, 1/2)");
    const double num = x.x() + x.y() - 1.0;
    return {1.0 / r2 - 2.0 * num * dx / (r2 * r2), 1.0 / r2 - 2.0 * num * dy / (r2 * r2)};
}

ProblemData ExactSolution::data() const
{
    const ExactSolution e = *this;
    return {[e](const Vec2& x) { return e.f(x); }, [e](const Vec2& x, const Vec2&) { return e.g0(x); },
            [e](const Vec2& x, const Vec2& n) { return e.g1(x, n); }};
}

ExactSolution exact_fields() { return {}; }

ErrorReference error_reference(const ExactSolution& exact)
{
    return {[exact](const Vec2& x) { return exact.u(x); }, [exact](const Vec2& x) { return exact.grad_u(x); },
            [exact](const Vec2& x) { return exact.psi(x); }, [exact](const Vec2& x) { return exact.grad_u_ext(x); },
            [exact](const Vec2& x) { return exact.g0(x); }};
}

ErrorRow compute_errors(const DiscreteSolution& sol, const ExactSolution& exact, const ErrorOptions& opts)
{
    return compute_errors(sol, error_reference(exact), opts);
}

ErrorRow compute_errors(const DiscreteSolution& sol, const ErrorReference& exact, const ErrorOptions& opts)
{
    const Discretization& d = *sol.disc;
    const auto& mesh = d.mesh;
    ErrorRow row;
    row.level = mesh.level;
    row.h = mesh.h;
    row.ndof = static_cast<long long>(d.size());

    const auto& tri = gauss_triangle(opts.volume_order);
    double es = 0.0, eu = 0.0;
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
        const double det = 2.0 * std::abs(mesh.signed_area(k));
        double sk = 0.0, uk = 0.0;
        for (std::size_t q = 0; q < tri.size(); ++q) {
            const auto& b = tri.points[q];
            const Vec2 x = b[0] * mesh.vertex(k, 0) + b[1] * mesh.vertex(k, 1) + b[2] * mesh.vertex(k, 2);
            sk += tri.weights[q] * (exact.grad_u(x) - sol.eval_sigma(k, x)).squaredNorm();
            const double du = exact.u(x) - sol.eval_u(k, x);
            uk += tri.weights[q] * du * du;
        }
        es += det * sk;
        eu += det * uk;
    }
    row.e_sigma = std::sqrt(es);
    row.e_u = std::sqrt(eu);

    const auto& rule = gauss_segment(opts.boundary_points);
    double jump = 0.0, jump_alpha = 0.0;
    for (std::size_t fi = 0; fi < d.faces.interior.size(); ++fi) {
        const auto& f = d.faces.interior[fi];
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2 x = f.a + rule.points[q] * (f.b - f.a);
            const double j = sol.eval_u(static_cast<std::size_t>(f.minus), x) -
                             sol.eval_u(static_cast<std::size_t>(f.plus), x);
            s += rule.weights[q] * j * j;
        }
        jump += s * f.length;
        jump_alpha += d.params.alpha_interior[fi] * s * f.length;
    }

    const Eigen::VectorXd psi = sol.psi();
    double l2 = 0.0, h1 = 0.0, mixed = 0.0, flux = 0.0;
    for (std::size_t i = 0; i < d.bmesh.num_segments(); ++i) {
        const auto& seg = d.bmesh.segments[i];
        const auto& face = d.faces.boundary[static_cast<std::size_t>(seg.face)];
        const auto k = static_cast<std::size_t>(face.owner);
        const double dpsi_h = eval_boundary_derivative(d.bmesh, d.space, psi, i);
        const double flux_h = d.trace.row(seg.face).dot(sol.sigma());
        double e0 = 0.0, e1 = 0.0, bj = 0.0, fl = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double t = rule.points[q];
            const double w = rule.weights[q] * seg.length;
            const Vec2 x = seg.point(t);
            const double psi_h = eval_boundary(d.space, psi, i, t);
            const double e = exact.psi(x) - psi_h;
            const double de = exact.grad_psi(x).dot(seg.tangent) - dpsi_h;
            const double j = exact.g0(x) - (sol.eval_u(k, x) - psi_h);
            const double fe = flux_h - exact.grad_u(x).dot(seg.normal);
            e0 += w * e * e;
            e1 += w * de * de;
            bj += w * j * j;
            fl += w * fe * fe;
        }
        l2 += e0;
        h1 += e1;
        mixed += std::sqrt(e0 * e1);
        jump += bj;
        jump_alpha += d.params.alpha_boundary[static_cast<std::size_t>(seg.face)] * bj;
        flux += fl;
    }
    row.e_jump = std::sqrt(jump);
    row.e_jump_alpha = std::sqrt(jump_alpha);
    row.e_psi_broken = std::sqrt(l2 + mixed);
    if (d.config.scheme == Scheme::conforming_bem) {
        row.e_psi_global = std::sqrt(l2 + std::sqrt(l2 * h1));
    } else {
        row.e_psi_global = row.e_psi_broken;
        row.psi_global_fallback = true;
    }
    row.e_flux = std::sqrt(flux);
    return row;
}

double calderon_residual(const Discretization& d, const ExactSolution& exact)
{
    const BoundaryP1Space hat = make_boundary_space(d.bmesh, BoundarySpaceKind::continuous);
    const Eigen::VectorXd psi = interpolate_boundary(d.bmesh, hat, [&](const Vec2& x) { return exact.u_ext(x); });
    const auto nf = static_cast<Eigen::Index>(d.faces.boundary.size());
    const auto& rule = gauss_segment(8);
    Eigen::VectorXd lambda(nf);
    for (Eigen::Index f = 0; f < nf; ++f) {
        const auto& face = d.faces.boundary[static_cast<std::size_t>(f)];
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q)
            s += rule.weights[q] * exact.grad_u_ext(face.a + rule.points[q] * (face.b - face.a)).dot(face.normal);
        lambda(f) = s;
    }
    const Eigen::VectorXd r = (0.5 * assemble_mass(d.ops, d.face_map, hat.monomial_map) -
                               assemble_K(d.ops, d.face_map, hat.monomial_map)) * psi +
                              assemble_V(d.ops, d.face_map, d.face_map) * lambda;
    double sum = 0.0;
    for (Eigen::Index f = 0; f < nf; ++f)
        sum += r(f) * r(f) / d.faces.boundary[static_cast<std::size_t>(f)].length;
    return std::sqrt(sum);
}

const std::vector<std::string>& error_column_names()
{
    static const std::vector<std::string> names{"e_sigma", "e_u", "e_jump", "e_psi_broken", "e_psi_global", "e_flux"};
    return names;
}

double error_value(const ErrorRow& row, const std::string& name)
{
    if (name == "e_sigma")
        return row.e_sigma;
    if (name == "e_u")
        return row.e_u;
    if (name == "e_jump")
        return row.e_jump;
    if (name == "e_jump_alpha")
        return row.e_jump_alpha;
    if (name == "e_psi_broken")
        return row.e_psi_broken;
    if (name == "e_psi_global")
        return row.e_psi_global;
    if (name == "e_flux")
        return row.e_flux;
    throw ConfigError("unknown error column " + name);
}

const EocColumn& EocTable::column(const std::string& name) const
{
    for (const auto& c : columns)
        if (c.name == name)
            return c;
    throw ConfigError("unknown error column " + name);
}

EocTable fit_eoc(const std::vector<ErrorRow>& rows)
{
    if (rows.size() < 2)
        throw ConfigError("convergence fit needs at least two levels");
    EocTable table;
    table.rows = rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& name : error_column_names()) {
        EocColumn col;
        col.name = name;
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : rows) {
            const double e = error_value(r, name);
            if (e > 0.0 && std::isfinite(e))
                pts.emplace_back(std::log(r.h), std::log(e));
            else
                col.warnings.push_back("level " + std::to_string(r.level) + ": nonpositive error excluded");
        }
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            const double a = error_value(rows[i], name), b = error_value(rows[i + 1], name);
            col.pairwise.push_back(a > 0.0 && b > 0.0 ? std::log(a / b) / std::log(rows[i].h / rows[i + 1].h) : nan);
        }
        if (pts.size() < 2) {
            col.slope = nan;
            col.residual = nan;
            col.warnings.push_back("fewer than two usable levels");
        } else {
            const std::size_t first = pts.size() > 3 ? pts.size() - 3 : 0;
            const auto n = static_cast<double>(pts.size() - first);
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = first; i < pts.size(); ++i) {
                sx += pts[i].first;
                sy += pts[i].second;
                sxx += pts[i].first * pts[i].first;
                sxy += pts[i].first * pts[i].second;
            }
            col.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            const double icpt = (sy - col.slope * sx) / n;
            double ss = 0.0;
            for (std::size_t i = first; i < pts.size(); ++i) {
                const double r = pts[i].second - (icpt + col.slope * pts[i].first);
                ss += r * r;
            }
            col.residual = std::sqrt(ss / n);
        }
        table.columns.push_back(std::move(col));
    }
    return table;
}

} // namespace ldgbem
