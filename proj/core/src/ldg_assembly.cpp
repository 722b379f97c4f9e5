#include "ldgbem/ldg_assembly.hpp"

#include "ldgbem/errors.hpp"
#include "ldgbem/quadrature.hpp"

namespace ldgbem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

int idx(std::size_t k, int i) { return static_cast<int>(3 * k) + i; }

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const Triplets& t)
{
    SparseMatrix m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Eigen::Vector3d dg_values(const TriangleMesh& mesh, std::size_t k, const Vec2& x)
{
    const Eigen::Vector2d r = reference_coordinates(mesh, k, x);
    return {1.0, r.x(), r.y()};
}

Eigen::Index sigma_size(const AssemblyContext& ctx) { return 3 * static_cast<Eigen::Index>(ctx.mesh.num_triangles()); }

double segment_alpha(const AssemblyContext& ctx, const BoundarySegment& seg)
{
    return ctx.params.alpha_boundary[static_cast<std::size_t>(seg.face)];
}

} // namespace

FluxParameters make_flux_parameters(const FaceSet& faces, double c_alpha, BetaMode beta_mode, double nu)
{
    if (!(c_alpha > 0.0))
        throw ConfigError("alpha scale must be positive");
    if (!(nu > 0.0))
        throw ConfigError("nu must be positive");
    FluxParameters p;
    p.c_alpha = c_alpha;
    p.beta_mode = beta_mode;
    p.nu = nu;
    for (const auto& f : faces.interior) {
        p.alpha_interior.push_back(c_alpha / f.length);
        p.beta.push_back(beta_mode == BetaMode::normal ? f.normal_minus : Vec2::Zero());
    }
    for (const auto& f : faces.boundary)
        p.alpha_boundary.push_back(c_alpha / f.length);
    return p;
}

SparseMatrix assemble_a(const AssemblyContext& ctx, const Eigen::MatrixXd& V_faces)
{
    const auto nf = static_cast<Eigen::Index>(ctx.faces.boundary.size());
    if (V_faces.rows() != nf || V_faces.cols() != nf || ctx.trace.rows() != nf)
        throw AssemblyError("single layer matrix does not match the normal trace map");
    Triplets t;
    for (std::size_t k = 0; k < ctx.mesh.num_triangles(); ++k) {
        const Eigen::Matrix3d m = rt_mass_matrix(ctx.mesh, k);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (m(i, j) != 0.0)
                    t.emplace_back(idx(k, i), idx(k, j), m(i, j));
    }
    const SparseMatrix mass = from_triplets(sigma_size(ctx), sigma_size(ctx), t);
    const SparseMatrix v = V_faces.sparseView();
    SparseMatrix bem = ctx.trace.transpose() * v * ctx.trace;
    return mass + bem;
}

BBlocks assemble_b(const AssemblyContext& ctx)
{
    const auto& mesh = ctx.mesh;
    Triplets t;
    // -(∇v, τ)_K; ∫_K τ = |K| τ(x_K) and the x - x_K member has zero mean
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
        const double area = std::abs(mesh.signed_area(k));
        const auto grads = dg_gradients(mesh, k);
        for (int j = 1; j < 3; ++j) {
            t.emplace_back(idx(k, 0), idx(k, j), -area * grads[static_cast<std::size_t>(j)].x());
            t.emplace_back(idx(k, 1), idx(k, j), -area * grads[static_cast<std::size_t>(j)].y());
        }
    }
    // ⟨⟦v⟧, {τ} - ⟦τ⟧β⟩ with τ·n constant per face: only ∫_F v = |F| v(midpoint) is needed
    for (std::size_t fi = 0; fi < ctx.faces.interior.size(); ++fi) {
        const auto& f = ctx.faces.interior[fi];
        const Vec2 n = f.normal_minus;
        const double b = ctx.params.beta[fi].dot(n);
        const Vec2 mid = 0.5 * (f.a + f.b);
        const auto km = static_cast<std::size_t>(f.minus), kp = static_cast<std::size_t>(f.plus);
        const Eigen::Vector3d vm = dg_values(mesh, km, mid) * f.length;
        const Eigen::Vector3d vp = dg_values(mesh, kp, mid) * f.length;
        const auto tm = rt_normal_traces(mesh, km, f.a, n);
        const auto tp = rt_normal_traces(mesh, kp, f.a, n);
        for (int i = 0; i < 3; ++i) {
            const double wm = (0.5 - b) * tm[static_cast<std::size_t>(i)];
            const double wp = (0.5 + b) * tp[static_cast<std::size_t>(i)];
            for (int j = 0; j < 3; ++j) {
                t.emplace_back(idx(km, i), idx(km, j), wm * vm(j));
                t.emplace_back(idx(km, i), idx(kp, j), -wm * vp(j));
                t.emplace_back(idx(kp, i), idx(km, j), wp * vm(j));
                t.emplace_back(idx(kp, i), idx(kp, j), -wp * vp(j));
            }
        }
    }
    // ⟨v, τ·n⟩_Γ
    for (const auto& f : ctx.faces.boundary) {
        const auto k = static_cast<std::size_t>(f.owner);
        const Eigen::Vector3d v = dg_values(mesh, k, 0.5 * (f.a + f.b)) * f.length;
        const auto tr = rt_normal_traces(mesh, k, f.a, f.normal);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                t.emplace_back(idx(k, i), idx(k, j), tr[static_cast<std::size_t>(i)] * v(j));
    }
    BBlocks out;
    out.u = from_triplets(sigma_size(ctx), sigma_size(ctx), t);
    out.u.prune(0.0);

    // ⟨τ·n, (id/2 - K)φ⟩ - ⟨φ, τ·n⟩ = -⟨τ·n, (id/2 + K)φ⟩
    const Eigen::MatrixXd faces_psi =
        -(assemble_K(ctx.ops, ctx.face_map, ctx.space.monomial_map) +
          0.5 * assemble_mass(ctx.ops, ctx.face_map, ctx.space.monomial_map));
    const SparseMatrix fp = faces_psi.sparseView();
    out.psi = ctx.trace.transpose() * fp;
    return out;
}

CBlocks assemble_c(const AssemblyContext& ctx, const Eigen::MatrixXd& hypersingular)
{
    const auto& mesh = ctx.mesh;
    const auto nu = sigma_size(ctx);
    const auto npsi = static_cast<Eigen::Index>(ctx.space.num_dofs());
    if (hypersingular.rows() != npsi || hypersingular.cols() != npsi)
        throw AssemblyError("hypersingular form does not match the boundary space");
    const auto& rule = gauss_segment(2);
    Triplets tuu;
    for (std::size_t fi = 0; fi < ctx.faces.interior.size(); ++fi) {
        const auto& f = ctx.faces.interior[fi];
        const double alpha = ctx.params.alpha_interior[fi];
        const auto km = static_cast<std::size_t>(f.minus), kp = static_cast<std::size_t>(f.plus);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2 x = f.a + rule.points[q] * (f.b - f.a);
            const double w = alpha * rule.weights[q] * f.length;
            const Eigen::Vector3d vm = dg_values(mesh, km, x);
            const Eigen::Vector3d vp = dg_values(mesh, kp, x);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    tuu.emplace_back(idx(km, i), idx(km, j), w * vm(i) * vm(j));
                    tuu.emplace_back(idx(km, i), idx(kp, j), -w * vm(i) * vp(j));
                    tuu.emplace_back(idx(kp, i), idx(km, j), -w * vp(i) * vm(j));
                    tuu.emplace_back(idx(kp, i), idx(kp, j), w * vp(i) * vp(j));
                }
            }
        }
    }
    // α(u - ψ)(v - φ) on each G_h segment, ψ through its segment monomials
    const auto nm = 2 * static_cast<Eigen::Index>(ctx.bmesh.num_segments());
    Triplets tum, tmm;
    for (std::size_t s = 0; s < ctx.bmesh.num_segments(); ++s) {
        const auto& seg = ctx.bmesh.segments[s];
        const double alpha = segment_alpha(ctx, seg);
        const auto k = static_cast<std::size_t>(ctx.faces.boundary[static_cast<std::size_t>(seg.face)].owner);
        const int m0 = static_cast<int>(2 * s);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double tq = rule.points[q];
            const double w = alpha * rule.weights[q] * seg.length;
            const Eigen::Vector3d v = dg_values(mesh, k, seg.point(tq));
            const Eigen::Vector2d p(1.0, tq);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j)
                    tuu.emplace_back(idx(k, i), idx(k, j), w * v(i) * v(j));
                for (int j = 0; j < 2; ++j)
                    tum.emplace_back(idx(k, i), m0 + j, -w * v(i) * p(j));
            }
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    tmm.emplace_back(m0 + i, m0 + j, w * p(i) * p(j));
        }
    }
    CBlocks out;
    out.uu = from_triplets(nu, nu, tuu);
    out.upsi = from_triplets(nu, nm, tum) * ctx.space.monomial_map;
    const SparseMatrix mm = from_triplets(nm, nm, tmm);
    const SparseMatrix r = ctx.space.monomial_map;
    out.psipsi = Eigen::MatrixXd(SparseMatrix(r.transpose() * mm * r)) + hypersingular;
    return out;
}

LoadVector assemble_load(const AssemblyContext& ctx, const ProblemData& data, int data_subdivisions)
{
    const auto& mesh = ctx.mesh;
    LoadVector load;
    load.u = Eigen::VectorXd::Zero(sigma_size(ctx));
    const auto& tri = gauss_triangle(5);
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
        const double det = 2.0 * std::abs(mesh.signed_area(k));
        for (std::size_t q = 0; q < tri.size(); ++q) {
            const auto& b = tri.points[q];
            const Vec2 x = b[0] * mesh.vertex(k, 0) + b[1] * mesh.vertex(k, 1) + b[2] * mesh.vertex(k, 2);
            const double w = tri.weights[q] * det * data.f(x);
            load.u(idx(k, 0)) += w;
            load.u(idx(k, 1)) += w * b[1];
            load.u(idx(k, 2)) += w * b[2];
        }
    }

    Eigen::VectorXd alpha(static_cast<Eigen::Index>(ctx.bmesh.num_segments()));
    for (std::size_t s = 0; s < ctx.bmesh.num_segments(); ++s)
        alpha(static_cast<Eigen::Index>(s)) = segment_alpha(ctx, ctx.bmesh.segments[s]);
    const BoundaryLoad bl =
        apply_rhs_boundary_terms(ctx.bmesh, ctx.faces.boundary.size(), data.g0, data.g1, alpha, data_subdivisions);

    // ⟨α g0, v⟩_Γ
    const auto& rule = gauss_segment(12);
    for (std::size_t s = 0; s < ctx.bmesh.num_segments(); ++s) {
        const auto& seg = ctx.bmesh.segments[s];
        const auto k = static_cast<std::size_t>(ctx.faces.boundary[static_cast<std::size_t>(seg.face)].owner);
        for (int piece = 0; piece < data_subdivisions; ++piece) {
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double tq = (piece + rule.points[q]) / data_subdivisions;
                const Vec2 x = seg.point(tq);
                const double w = alpha(static_cast<Eigen::Index>(s)) * rule.weights[q] * seg.length /
                                 data_subdivisions * data.g0(x, seg.normal);
                load.u.segment<3>(idx(k, 0)) += w * dg_values(mesh, k, x);
            }
        }
    }
    load.sigma = ctx.trace.transpose() * bl.flux;
    load.psi = ctx.space.monomial_map.transpose() * (bl.calderon - bl.alpha_g0);
    return load;
}

} // namespace ldgbem
