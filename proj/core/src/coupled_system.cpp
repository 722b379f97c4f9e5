#include "ldgbem/coupled_system.hpp"

#include "ldgbem/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

namespace ldgbem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void append(Triplets& t, const SparseMatrix& m, Eigen::Index r0, Eigen::Index c0, double scale = 1.0,
            bool transpose = false)
{
    for (Eigen::Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
            const auto i = static_cast<int>(transpose ? it.col() : it.row());
            const auto j = static_cast<int>(transpose ? it.row() : it.col());
            t.emplace_back(static_cast<int>(r0) + i, static_cast<int>(c0) + j, scale * it.value());
        }
}

void append(Triplets& t, const Eigen::MatrixXd& m, Eigen::Index r0, Eigen::Index c0)
{
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0)
                t.emplace_back(static_cast<int>(r0 + i), static_cast<int>(c0 + j), m(i, j));
}

} // namespace

std::shared_ptr<const Discretization> discretize(const SchemeConfig& config)
{
    if (!(config.tolerance > 0.0) || config.tolerance > 1e-6)
        throw ConfigError("solver tolerance must lie in (0, 1e-6]");
    if (config.data_subdivisions < 1)
        throw ConfigError("data subdivisions must be positive");
    auto d = std::make_shared<Discretization>();
    d->config = config;
    d->mesh = build_uniform_square_mesh(config.level);
    d->faces = extract_faces(d->mesh);
    d->bmesh = build_boundary_mesh(d->mesh, config.refine_factor);
    d->space = make_boundary_space(d->bmesh, config.scheme == Scheme::dg_bem ? BoundarySpaceKind::broken
                                                                              : BoundarySpaceKind::continuous);
    d->params = make_flux_parameters(d->faces, config.c_alpha, config.beta_mode, config.nu);
    d->trace = normal_trace_map(d->mesh, d->faces);
    d->face_map = face_indicator_map(d->bmesh, d->faces.boundary.size());
    d->ops = assemble_segment_operators(d->bmesh);
    return d;
}

BlockSystem build_system(std::shared_ptr<const Discretization> disc, const ProblemData& data)
{
    const Discretization& d = *disc;
    const AssemblyContext ctx = d.context();
    BlockSystem sys;
    sys.disc = disc;
    auto& bl = sys.blocks;
    bl.V_faces = assemble_V(d.ops, d.face_map, d.face_map);
    bl.A = assemble_a(ctx, bl.V_faces);
    auto b = assemble_b(ctx);
    bl.B_u = std::move(b.u);
    bl.B_psi = std::move(b.psi);
    if (d.config.scheme == Scheme::dg_bem) {
        const Eigen::VectorXd nu = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d.bmesh.num_nodes()), d.params.nu);
        sys.d_form = assemble_d(d.bmesh, d.space, d.ops, nu);
        bl.hypersingular = sys.d_form.matrix();
    } else {
        bl.hypersingular = assemble_conforming_W(d.bmesh, d.space, d.ops);
    }
    auto c = assemble_c(ctx, bl.hypersingular);
    bl.C_uu = std::move(c.uu);
    bl.C_upsi = std::move(c.upsi);
    bl.C_psipsi = std::move(c.psipsi);
    sys.mean_row = boundary_mean_functional(d.bmesh, d.space);

    const Eigen::Index ou = d.offset_u(), op = d.offset_psi(), om = d.offset_mu();
    Triplets t;
    append(t, bl.A, 0, 0);
    append(t, bl.B_u, 0, ou);
    append(t, bl.B_psi, 0, op);
    append(t, bl.B_u, ou, 0, -1.0, true);
    append(t, bl.B_psi, op, 0, -1.0, true);
    append(t, bl.C_uu, ou, ou);
    append(t, bl.C_upsi, ou, op);
    append(t, bl.C_upsi, op, ou, 1.0, true);
    append(t, bl.C_psipsi, op, op);
    for (Eigen::Index j = 0; j < d.num_psi(); ++j) {
        t.emplace_back(static_cast<int>(om), static_cast<int>(op + j), sys.mean_row(j));
        t.emplace_back(static_cast<int>(op + j), static_cast<int>(om), sys.mean_row(j));
    }
    sys.matrix = SparseMatrix(d.size(), d.size());
    sys.matrix.setFromTriplets(t.begin(), t.end());

    const LoadVector load = assemble_load(ctx, data, d.config.data_subdivisions);
    sys.rhs = Eigen::VectorXd::Zero(d.size());
    sys.rhs.segment(0, d.num_sigma()) = load.sigma;
    sys.rhs.segment(ou, d.num_u()) = load.u;
    sys.rhs.segment(op, d.num_psi()) = load.psi;
    return sys;
}

BlockSystem build_system(const SchemeConfig& config, const ProblemData& data)
{
    return build_system(discretize(config), data);
}

DiscreteSolution solve(const BlockSystem& system)
{
    const Eigen::SparseMatrix<double> a = system.matrix;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage());
    DiscreteSolution sol;
    sol.disc = system.disc;
    sol.x = lu.solve(system.rhs);
    const double scale = system.rhs.norm() > 0.0 ? system.rhs.norm() : 1.0;
    for (int it = 0; it < 3; ++it) {
        const Eigen::VectorXd r = system.rhs - a * sol.x;
        if (r.norm() <= 1e-15 * scale)
            break;
        sol.x += lu.solve(r);
    }
    sol.residual = (system.rhs - a * sol.x).norm() / scale;
    if (!std::isfinite(sol.residual) || sol.residual > system.disc->config.tolerance)
        throw SolverError("relative residual " + std::to_string(sol.residual) + " above tolerance");
    return sol;
}

double DiscreteSolution::eval_u(std::size_t k, const Vec2& p) const
{
    const auto b = eval_dg_basis(disc->mesh, k, p);
    const auto o = disc->offset_u() + 3 * static_cast<Eigen::Index>(k);
    return x(o) * b.values[0] + x(o + 1) * b.values[1] + x(o + 2) * b.values[2];
}

Vec2 DiscreteSolution::eval_sigma(std::size_t k, const Vec2& p) const
{
    const auto b = eval_rt_basis(disc->mesh, k, p);
    const auto o = 3 * static_cast<Eigen::Index>(k);
    return x(o) * b.values[0] + x(o + 1) * b.values[1] + x(o + 2) * b.values[2];
}

double DiscreteSolution::eval_u(const Vec2& p) const { return eval_u(disc->mesh.locate(p), p); }

Vec2 DiscreteSolution::eval_sigma(const Vec2& p) const { return eval_sigma(disc->mesh.locate(p), p); }

std::pair<double, double> DiscreteSolution::eval_psi(double s) const
{
    const auto& bm = disc->bmesh;
    const std::size_t i = bm.locate(s);
    const auto& seg = bm.segments[i];
    const double t = std::clamp((s - seg.s0) / seg.length, 0.0, 1.0);
    const Eigen::VectorXd c = psi();
    const double out = eval_boundary(disc->space, c, i, t);
    if (t > 1e-12)
        return {out, out};
    return {eval_boundary(disc->space, c, bm.incoming(i), 1.0), out};
}

double DiscreteSolution::eval_flux(double s) const
{
    const auto face = static_cast<Eigen::Index>(disc->bmesh.segments[disc->bmesh.locate(s)].face);
    return disc->trace.row(face).dot(sigma());
}

std::vector<InvariantCheck> check_invariants(const BlockSystem& system, const DiscreteSolution* solution)
{
    const Discretization& d = *system.disc;
    const auto& bl = system.blocks;
    std::vector<InvariantCheck> out;
    const auto add = [&out](std::string name, double value, double bound, bool pass) {
        out.push_back({std::move(name), value, bound, pass});
    };
    const auto max_abs = [](const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; };
    const auto max_abs_sparse = [](const SparseMatrix& m) {
        double v = 0.0;
        for (Eigen::Index r = 0; r < m.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(m, r); it; ++it)
                v = std::max(v, std::abs(it.value()));
        return v;
    };
    const auto asymmetry = [&](const SparseMatrix& m) { return max_abs_sparse(SparseMatrix(m - SparseMatrix(m.transpose()))); };

    const double a_asym = asymmetry(bl.A);
    add("a symmetric", a_asym, 1e-12, a_asym <= 1e-12);

    Eigen::MatrixXd c_sym = bl.C_psipsi;
    if (d.config.scheme == Scheme::dg_bem)
        c_sym -= system.d_form.coupling;
    const double c_asym = std::max(asymmetry(bl.C_uu), max_abs(c_sym - c_sym.transpose()));
    add("c symmetric", c_asym, 1e-12, c_asym <= 1e-12);

    // The σ rows against the (u, ψ) columns and their mirror must cancel exactly.
    const Eigen::Index ns = d.num_sigma(), nup = d.offset_mu() - ns;
    const SparseMatrix upper = system.matrix.block(0, ns, ns, nup);
    const SparseMatrix lower = system.matrix.block(ns, 0, nup, ns);
    const double b_pair = max_abs_sparse(SparseMatrix(upper + SparseMatrix(lower.transpose())));
    add("b skew pairing", b_pair, 0.0, b_pair == 0.0);

    if (d.config.scheme == Scheme::dg_bem) {
        const double skew = max_abs(system.d_form.coupling + system.d_form.coupling.transpose());
        add("T-coupling skew", skew, 1e-12, skew <= 1e-12);
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev(0.5 * (bl.V_faces + bl.V_faces.transpose()));
    const double vmin = ev.eigenvalues().minCoeff();
    add("V positive definite (min eigenvalue)", vmin, 0.0, vmin > 0.0);

    if (d.config.scheme == Scheme::conforming_bem) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> w(bl.hypersingular);
        const auto& e = w.eigenvalues();
        add("W kernel eigenvalue", std::abs(e(0)), 1e-12, std::abs(e(0)) <= 1e-12);
        add("W second eigenvalue", e(1), 0.0, e(1) > 0.0);
    }

    const BoundaryP1Space hat = make_boundary_space(d.bmesh, BoundarySpaceKind::continuous);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(hat.num_dofs()));
    const Eigen::VectorXd gauss = (assemble_K(d.ops, d.face_map, hat.monomial_map) +
                                   0.5 * assemble_mass(d.ops, d.face_map, hat.monomial_map)) * ones;
    const double g = gauss.cwiseAbs().maxCoeff();
    add("double layer of constants", g, 1e-6, g <= 1e-6);

    if (solution) {
        add("relative residual", solution->residual, d.config.tolerance, solution->residual <= d.config.tolerance);
        const double mean = std::abs(system.mean_row.dot(solution->psi()));
        add("mean of psi_h", mean, 1e-10, mean <= 1e-10);
    }
    return out;
}

} // namespace ldgbem
