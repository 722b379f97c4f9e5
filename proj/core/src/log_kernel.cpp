#include "ldgbem/log_kernel.hpp"

#include "ldgbem/errors.hpp"
#include "ldgbem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ldgbem {

namespace {

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;
constexpr int kGradedLevels = 46;
constexpr int kNearPoints = 16;
constexpr int kFarPoints = 10;
constexpr double kFarRatio = 2.0;

double cross(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

double point_segment_distance(const Vec2& p, const Segment& s)
{
    const Vec2 d = s.b - s.a;
    const double t = std::clamp((p - s.a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (p - s.point(t)).norm();
}

bool segments_intersect(const Segment& x, const Segment& y)
{
    const double d1 = cross(x.b - x.a, y.a - x.a);
    const double d2 = cross(x.b - x.a, y.b - x.a);
    const double d3 = cross(y.b - y.a, x.a - y.a);
    const double d4 = cross(y.b - y.a, x.b - y.a);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// x log(x) style products vanish at r2 = 0
double safe_log(double r2) { return r2 > 0.0 ? std::log(r2) : 0.0; }

double eta_atan(double eta, double u) { return eta > 0.0 ? eta * std::atan(u / eta) : 0.0; }

// Antiderivatives in u of 1/2 ln(u^2 + eta^2) u^k, k = 0, 1, 2.
std::array<double, 3> log_moments(double u, double eta)
{
    const double r2 = u * u + eta * eta;
    const double l = safe_log(r2);
    const double at = eta_atan(eta, u); // eta * atan(u / eta)
    return {0.5 * u * l - u + at, 0.25 * (r2 * l - u * u),
            0.5 * (u * u * u / 3.0 * l - 2.0 / 9.0 * u * u * u + 2.0 / 3.0 * eta * eta * u - 2.0 / 3.0 * eta * eta * at)};
}

// Antiderivatives in u of eta_s u^k / (u^2 + eta^2), eta_s the signed distance, eta = |eta_s| > 0.
std::array<double, 3> dlp_moments(double u, double eta_s)
{
    const double eta = std::abs(eta_s);
    const double at = std::atan(u / eta);
    const double sgn = eta_s > 0.0 ? 1.0 : -1.0;
    return {sgn * at, eta_s * 0.5 * std::log(u * u + eta * eta), eta_s * (u - eta * at)};
}

// Convert moments of u^k into moments of ((u + xi)/L)^b.
std::array<double, 3> shift_moments(const std::array<double, 3>& m, double xi, double len, int deg)
{
    std::array<double, 3> out{m[0], 0.0, 0.0};
    if (deg >= 1)
        out[1] = (m[1] + xi * m[0]) / len;
    if (deg >= 2)
        out[2] = (m[2] + 2.0 * xi * m[1] + xi * xi * m[0]) / (len * len);
    return out;
}

template <class Kernel>
std::array<double, 3> numeric_potential(const Vec2& x, const Segment& y, int deg, Kernel&& k)
{
    const auto& rule = gauss_segment(kFarPoints);
    const double len = y.length();
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double t = rule.points[q];
        const double v = rule.weights[q] * len * k(x, y.point(t));
        double tp = 1.0;
        for (int b = 0; b <= deg; ++b, tp *= t)
            out[static_cast<std::size_t>(b)] += v * tp;
    }
    return out;
}

void check_degree(int deg)
{
    if (deg < 0 || deg > kMaxPanelDegree)
        throw ConfigError("panel density degree must lie in [0, 2]");
}

// ∫_0^1 ∫_0^1 ln|s - t| s^a t^b ds dt
constexpr double kIdentical[3][3] = {{-3.0 / 2.0, -3.0 / 4.0, -35.0 / 72.0},
                                     {-3.0 / 4.0, -7.0 / 16.0, -11.0 / 36.0},
                                     {-35.0 / 72.0, -11.0 / 36.0, -2.0 / 9.0}};

// ∫_0^1 ∫_0^1 ln(s + r t) s^a t^b ds dt for r >= 1, as A ln(1+r) + B ln r + P. The three terms grow
// like r³ ln r and cancel, so they are summed in extended precision.
double collinear_table(int a, int b, double r_in)
{
    using real = long double;
    const real r = r_in;
    const real l1 = std::log1p(r), lr = std::log(r);
    const real r2 = r * r, r3 = r2 * r;
    real A = 0, B = 0, P = 0;
    switch (3 * a + b) {
    case 0:
        A = 0.5 * (r2 + 2 * r + 1) / r, B = -0.5 * r, P = -1.5;
        break;
    case 1:
        A = (2 * r3 + 3 * r2 - 1) / (6 * r2), B = -r / 3, P = (2 - 7 * r) / (12 * r);
        break;
    case 2:
        A = (3 * r2 * r2 + 4 * r3 + 1) / (12 * r3), B = -0.25 * r, P = (-26 * r2 + 3 * r - 6) / (72 * r2);
        break;
    case 3:
        A = (-r3 + 3 * r + 2) / (6 * r), B = r2 / 6, P = (2 * r - 7) / 12;
        break;
    case 4:
        A = (-r2 * r2 + 2 * r2 - 1) / (8 * r2), B = r2 / 8, P = (2 * r2 - 3 * r + 2) / (16 * r);
        break;
    case 5:
        A = (-3 * r3 * r2 + 5 * r3 + 2) / (30 * r3), B = r2 / 10, P = (18 * r3 - 19 * r2 + 6 * r - 12) / (180 * r2);
        break;
    case 6:
        A = (r2 * r2 + 4 * r + 3) / (12 * r), B = -r3 / 12, P = (-6 * r2 + 3 * r - 26) / 72;
        break;
    case 7:
        A = (2 * r3 * r2 + 5 * r2 - 3) / (30 * r2), B = -r3 / 15, P = (-12 * r3 + 6 * r2 - 19 * r + 18) / (180 * r);
        break;
    case 8:
        A = (r3 * r3 + 2 * r3 + 1) / (18 * r3), B = -r3 / 18, P = (-2 * r2 * r2 + r3 - 2 * r2 + r - 2) / (36 * r2);
        break;
    default:
        throw ConfigError("collinear table index out of range");
    }
    return static_cast<double>(A * l1 + B * lr + P);
}

// Monomial change under t -> 1 - t: (1 - t)^a = sum_k flip(a, k) t^k.
Eigen::Matrix3d flip_matrix()
{
    Eigen::Matrix3d f;
    f << 1, 0, 0, 1, -1, 0, 1, -2, 1;
    return f;
}

struct Shared {
    bool a_at_end = false; // shared point is A.b
    bool b_at_end = false; // shared point is B.b
};

Shared shared_ends(const Segment& A, const Segment& B)
{
    const double tol = 1e-12 * std::max(A.length(), B.length());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (((i ? A.b : A.a) - (j ? B.b : B.a)).norm() <= tol)
                return {i == 1, j == 1};
    return {};
}

LogKernelIntegrals identical_closed_form(const Segment& A, int da, const Segment& B, int db)
{
    LogKernelIntegrals out;
    out.config = PairConfig::identical;
    const double len = A.length();
    const double logl = std::log(len);
    for (int a = 0; a <= kMaxPanelDegree; ++a)
        for (int b = 0; b <= kMaxPanelDegree; ++b)
            out.values(a, b) = -kInvTwoPi * len * len * (logl / ((a + 1.0) * (b + 1.0)) + kIdentical[a][b]);
    // reversed orientation of B: t_B = 1 - t_A
    if ((A.a - B.a).norm() > 1e-12 * len)
        out.values = (out.values * flip_matrix().transpose()).eval();
    out.values.block(0, db + 1, 3, 2 - db).setZero();
    out.values.block(da + 1, 0, 2 - da, 3).setZero();
    return out;
}

LogKernelIntegrals collinear_closed_form(const Segment& A, int da, const Segment& B, int db)
{
    // In local parameters measured from the shared point, |x - y| = LA s' + LB t'.
    const double la = A.length(), lb = B.length();
    Eigen::Matrix3d local;
    for (int a = 0; a <= kMaxPanelDegree; ++a) {
        for (int b = 0; b <= kMaxPanelDegree; ++b) {
            const double mm = 1.0 / ((a + 1.0) * (b + 1.0));
            const double r = lb / la;
            const double phi = r >= 1.0 ? std::log(la) * mm + collinear_table(a, b, r)
                                        : std::log(lb) * mm + collinear_table(b, a, 1.0 / r);
            local(a, b) = -kInvTwoPi * la * lb * phi;
        }
    }
    const Shared sh = shared_ends(A, B);
    const Eigen::Matrix3d fa = sh.a_at_end ? flip_matrix() : Eigen::Matrix3d::Identity();
    const Eigen::Matrix3d fb = sh.b_at_end ? flip_matrix() : Eigen::Matrix3d::Identity();
    LogKernelIntegrals out;
    out.config = PairConfig::touching_collinear;
    out.values = fa * local * fb.transpose();
    out.values.block(0, db + 1, 3, 2 - db).setZero();
    out.values.block(da + 1, 0, 2 - da, 3).setZero();
    return out;
}

void append_gauss(std::vector<std::pair<double, double>>& nodes, double s0, double s1, double len, int n)
{
    const auto& rule = gauss_segment(n);
    for (std::size_t q = 0; q < rule.size(); ++q)
        nodes.emplace_back(s0 + (s1 - s0) * rule.points[q], rule.weights[q] * (s1 - s0) * len);
}

// Gauss on [s0, s1], bisected until every point of `near` lies at least one piece length away
// (the endpoints of B off A, whose potentials are analytic only up to that distance).
void append_separated(std::vector<std::pair<double, double>>& nodes, const Segment& A, const std::vector<Vec2>& near,
                      double s0, double s1, int depth)
{
    const Segment piece{A.point(s0), A.point(s1)};
    const bool ok = std::all_of(near.begin(), near.end(),
                                [&](const Vec2& p) { return piece.length() <= point_segment_distance(p, piece); });
    if (ok || depth >= 60) {
        append_gauss(nodes, s0, s1, A.length(), kNearPoints);
        return;
    }
    const double mid = 0.5 * (s0 + s1);
    append_separated(nodes, A, near, s0, mid, depth + 1);
    append_separated(nodes, A, near, mid, s1, depth + 1);
}

// Geometric mesh on [lo, hi] refined toward one of the two ends.
void append_graded(std::vector<std::pair<double, double>>& nodes, const Segment& A, const std::vector<Vec2>& near,
                   double lo, double hi, bool toward_lo)
{
    const double width = hi - lo;
    double outer = width;
    for (int k = 0; k < kGradedLevels; ++k) {
        const double inner = 0.5 * outer;
        if (toward_lo)
            append_separated(nodes, A, near, lo + inner, lo + outer, 0);
        else
            append_separated(nodes, A, near, hi - outer, hi - inner, 0);
        outer = inner;
    }
    if (toward_lo)
        append_gauss(nodes, lo, lo + outer, A.length(), kNearPoints);
    else
        append_gauss(nodes, hi - outer, hi, A.length(), kNearPoints);
}

void append_admissible(std::vector<std::pair<double, double>>& nodes, const Segment& A, const Segment& B, double s0,
                       double s1, int depth)
{
    const Segment piece{A.point(s0), A.point(s1)};
    const double d = segment_distance(piece, B);
    if (piece.length() <= d || depth >= 60) {
        append_gauss(nodes, s0, s1, A.length(), kNearPoints);
        return;
    }
    const double mid = 0.5 * (s0 + s1);
    append_admissible(nodes, A, B, s0, mid, depth + 1);
    append_admissible(nodes, A, B, mid, s1, depth + 1);
}

template <class Potential>
LogKernelIntegrals numeric_pair(const Segment& A, int da, const Segment& B, int db, PairConfig cfg, Potential&& pot)
{
    LogKernelIntegrals out;
    out.config = cfg;
    for (const auto& [s, w] : outer_nodes(A, B)) {
        const auto inner = pot(A.point(s), B, db);
        double sp = 1.0;
        for (int a = 0; a <= da; ++a, sp *= s)
            for (int b = 0; b <= db; ++b)
                out.values(a, b) += w * sp * inner[static_cast<std::size_t>(b)];
    }
    return out;
}

template <class Potential>
std::array<double, 3> weighted(const Segment& A, const std::function<double(double)>& g, const Segment& B, int db,
                               Potential&& pot)
{
    check_degree(db);
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (const auto& [s, w] : outer_nodes(A, B)) {
        const double gs = g(s);
        const auto inner = pot(A.point(s), B, db);
        for (int b = 0; b <= db; ++b)
            out[static_cast<std::size_t>(b)] += w * gs * inner[static_cast<std::size_t>(b)];
    }
    return out;
}

} // namespace

double laplace_kernel(double r) { return -kInvTwoPi * std::log(r); }

double segment_distance(const Segment& x, const Segment& y)
{
    if (segments_intersect(x, y))
        return 0.0;
    return std::min({point_segment_distance(x.a, y), point_segment_distance(x.b, y), point_segment_distance(y.a, x),
                     point_segment_distance(y.b, x)});
}

PairConfig classify_pair(const Segment& x, const Segment& y)
{
    const double lx = x.length(), ly = y.length();
    if (!(lx > 0.0) || !(ly > 0.0))
        throw ConfigError("degenerate (zero-length) panel");
    const double tol = 1e-12 * std::max(lx, ly);
    const bool aa = (x.a - y.a).norm() <= tol, ab = (x.a - y.b).norm() <= tol;
    const bool ba = (x.b - y.a).norm() <= tol, bb = (x.b - y.b).norm() <= tol;
    if ((aa && bb) || (ab && ba))
        return PairConfig::identical;
    const int shared = static_cast<int>(aa) + ab + ba + bb;
    if (shared == 1) {
        const Vec2 p = (aa || ab) ? x.a : x.b;
        const Vec2 qx = (aa || ab) ? x.b : x.a;
        const Vec2 qy = (aa || ba) ? y.b : y.a;
        const Vec2 dx = (qx - p) / lx, dy = (qy - p) / ly;
        if (std::abs(cross(dx, dy)) < 1e-12)
            return dx.dot(dy) < 0.0 ? PairConfig::touching_collinear : PairConfig::unsupported;
        return PairConfig::touching_angled;
    }
    return segment_distance(x, y) > tol ? PairConfig::disjoint : PairConfig::unsupported;
}

std::array<double, 3> single_layer_potential(const Vec2& x, const Segment& y, int deg)
{
    check_degree(deg);
    const double len = y.length();
    if (point_segment_distance(x, y) >= kFarRatio * len)
        return numeric_potential(x, y, deg, [](const Vec2& p, const Vec2& q) { return laplace_kernel((p - q).norm()); });
    const Vec2 e = (y.b - y.a) / len;
    const Vec2 d = x - y.a;
    const double xi = d.dot(e);
    const double eta = std::abs(cross(e, d));
    const auto m1 = log_moments(len - xi, eta);
    const auto m0 = log_moments(-xi, eta);
    const std::array<double, 3> m{m1[0] - m0[0], m1[1] - m0[1], m1[2] - m0[2]};
    auto out = shift_moments(m, xi, len, deg);
    for (auto& v : out)
        v *= -kInvTwoPi;
    return out;
}

std::array<double, 3> double_layer_potential(const Vec2& x, const Segment& y, int deg)
{
    check_degree(deg);
    const double len = y.length();
    const Vec2 n = y.normal();
    if (point_segment_distance(x, y) >= kFarRatio * len)
        return numeric_potential(x, y, deg, [&n](const Vec2& p, const Vec2& q) {
            const Vec2 r = p - q;
            return kInvTwoPi * r.dot(n) / r.squaredNorm();
        });
    const Vec2 e = (y.b - y.a) / len;
    const Vec2 d = x - y.a;
    const double eta_s = d.dot(n);
    if (std::abs(eta_s) <= 1e-14 * len)
        return {0.0, 0.0, 0.0};
    const double xi = d.dot(e);
    const auto m1 = dlp_moments(len - xi, eta_s);
    const auto m0 = dlp_moments(-xi, eta_s);
    const std::array<double, 3> m{m1[0] - m0[0], m1[1] - m0[1], m1[2] - m0[2]};
    auto out = shift_moments(m, xi, len, deg);
    for (auto& v : out)
        v *= kInvTwoPi;
    return out;
}

std::vector<std::pair<double, double>> outer_nodes(const Segment& A, const Segment& B)
{
    const double len = A.length();
    const double tol = 1e-12 * std::max(len, B.length());
    // parameters on A where an endpoint of B sits; the inner potential is singular there
    std::vector<double> cuts;
    std::vector<Vec2> near;
    for (const Vec2& e : {B.a, B.b}) {
        const double t = (e - A.a).dot(A.b - A.a) / (len * len);
        if (t >= -1e-12 && t <= 1.0 + 1e-12 && (A.point(t) - e).norm() <= tol)
            cuts.push_back(std::clamp(t, 0.0, 1.0));
        else
            near.push_back(e);
    }
    std::vector<std::pair<double, double>> nodes;
    if (cuts.empty()) {
        const double d = segment_distance(A, B);
        if (d >= kFarRatio * std::max(len, B.length()))
            append_gauss(nodes, 0.0, 1.0, len, kFarPoints);
        else if (d > tol)
            append_admissible(nodes, A, B, 0.0, 1.0, 0);
        else // A inside the line of B away from its endpoints: smooth
            append_gauss(nodes, 0.0, 1.0, len, kNearPoints);
        return nodes;
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> breaks{0.0};
    for (double c : cuts)
        if (c - breaks.back() > 1e-12)
            breaks.push_back(c);
    if (1.0 - breaks.back() > 1e-12)
        breaks.push_back(1.0);
    else
        breaks.back() = 1.0;
    const auto singular = [&cuts](double t) {
        return std::any_of(cuts.begin(), cuts.end(), [t](double c) { return std::abs(c - t) <= 1e-12; });
    };
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double l = breaks[i], r = breaks[i + 1];
        const bool sl = singular(l), sr = singular(r);
        if (sl && sr) {
            const double m = 0.5 * (l + r);
            append_graded(nodes, A, near, l, m, true);
            append_graded(nodes, A, near, m, r, false);
        } else {
            append_graded(nodes, A, near, l, r, sl);
        }
    }
    return nodes;
}

LogKernelIntegrals log_segment_integrals(const Segment& A, int deg_a, const Segment& B, int deg_b)
{
    check_degree(deg_a);
    check_degree(deg_b);
    const PairConfig cfg = classify_pair(A, B);
    LogKernelIntegrals out;
    switch (cfg) {
    case PairConfig::identical:
        out = identical_closed_form(A, deg_a, B, deg_b);
        break;
    case PairConfig::touching_collinear:
        out = collinear_closed_form(A, deg_a, B, deg_b);
        break;
    case PairConfig::unsupported:
        throw AssemblyError("overlapping panels cannot be paired");
    default:
        out = numeric_pair(A, deg_a, B, deg_b, cfg,
                           [](const Vec2& x, const Segment& y, int d) { return single_layer_potential(x, y, d); });
    }
    out.deg_a = deg_a;
    out.deg_b = deg_b;
    return out;
}

LogKernelIntegrals double_layer_segment_integrals(const Segment& A, int deg_a, const Segment& B, int deg_b)
{
    check_degree(deg_a);
    check_degree(deg_b);
    const PairConfig cfg = classify_pair(A, B);
    LogKernelIntegrals out;
    switch (cfg) {
    case PairConfig::identical:
    case PairConfig::touching_collinear:
        // (x - y) . n(y) vanishes on a common line
        out.config = cfg;
        break;
    case PairConfig::unsupported:
        throw AssemblyError("overlapping panels cannot be paired");
    default:
        out = numeric_pair(A, deg_a, B, deg_b, cfg,
                           [](const Vec2& x, const Segment& y, int d) { return double_layer_potential(x, y, d); });
    }
    out.deg_a = deg_a;
    out.deg_b = deg_b;
    return out;
}

std::array<double, 3> single_layer_weighted(const Segment& A, const std::function<double(double)>& g,
                                            const Segment& B, int deg_b)
{
    return weighted(A, g, B, deg_b,
                    [](const Vec2& x, const Segment& y, int d) { return single_layer_potential(x, y, d); });
}

std::array<double, 3> double_layer_weighted(const Segment& A, const std::function<double(double)>& g,
                                            const Segment& B, int deg_b)
{
    return weighted(A, g, B, deg_b,
                    [](const Vec2& x, const Segment& y, int d) { return double_layer_potential(x, y, d); });
}

} // namespace ldgbem
