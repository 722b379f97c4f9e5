#include "ldgbem/quadrature.hpp"

#include "ldgbem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>
#include <utility>

namespace ldgbem {

namespace {

// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x)
{
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, p0};
}

SegmentRule make_gauss_legendre(int n)
{
    SegmentRule rule;
    rule.points.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            const auto [pn, pnm1] = legendre(n, x);
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const auto [pn, pnm1] = legendre(n, x);
        dp = n * (x * pn - pnm1) / (x * x - 1.0);
        const auto idx = static_cast<std::size_t>(n - 1 - i);
        rule.points[idx] = 0.5 * (x + 1.0);
        rule.weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

void add_orbit3(TriangleRule& r, double a, double w)
{
    const double b = 1.0 - 2.0 * a;
    r.points.push_back({a, a, b});
    r.points.push_back({a, b, a});
    r.points.push_back({b, a, a});
    r.weights.insert(r.weights.end(), 3, 0.5 * w);
}

void add_orbit6(TriangleRule& r, double a, double b, double w)
{
    const double c = 1.0 - a - b;
    const std::array<std::array<double, 3>, 6> perms{
        {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}}};
    for (const auto& p : perms)
        r.points.push_back(p);
    r.weights.insert(r.weights.end(), 6, 0.5 * w);
}

TriangleRule make_triangle_rule(int order)
{
    TriangleRule r;
    switch (order) {
    case 1:
        r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        r.weights.push_back(0.5);
        r.degree = 1;
        break;
    case 2:
        add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
        r.degree = 2;
        break;
    case 3: // the degree-3 Strang-Fix rule has a negative weight; use the 6-point degree-4 rule
    case 4:
        add_orbit3(r, 0.44594849091596488631832925388305, 0.22338158967801146569500700843312);
        add_orbit3(r, 0.091576213509770743459571463402202, 0.10995174365532186763832632490021);
        r.degree = 4;
        break;
    case 5: {
        const double s15 = std::sqrt(15.0);
        r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        r.weights.push_back(0.5 * 9.0 / 40.0);
        add_orbit3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
        add_orbit3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
        r.degree = 5;
        break;
    }
    case 6:
        add_orbit3(r, 0.24928674517091042129163855310702, 0.11678627572637936602528961138558);
        add_orbit3(r, 0.063089014491502228340331602870819, 0.050844906370206816920936809106869);
        add_orbit6(r, 0.053145049844816947353249671631398, 0.31035245103378440541660773395655,
                   0.082851075618373575193553456420442);
        r.degree = 6;
        break;
    default:
        throw ConfigError("triangle quadrature order must lie in [1, 6], got " + std::to_string(order));
    }
    return r;
}

// QUADPACK qk15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

Interval kronrod15(const std::function<double(double)>& f, double a, double b)
{
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    const double fc = f(c);
    double k = kWgk[7] * fc;
    double g = kWg[3] * fc;
    for (std::size_t j = 0; j < 7; ++j) {
        const double s = f(c - r * kXgk[j]) + f(c + r * kXgk[j]);
        k += kWgk[j] * s;
        if (j % 2 == 1)
            g += kWg[j / 2] * s;
    }
    return {a, b, k * r, std::abs((k - g) * r)};
}

} // namespace

const SegmentRule& gauss_segment(int n)
{
    if (n < 1 || n > 20)
        throw ConfigError("Gauss-Legendre point count must lie in [1, 20], got " + std::to_string(n));
    static std::array<SegmentRule, 21> cache;
    static std::once_flag flag;
    std::call_once(flag, [] {
        for (int k = 1; k <= 20; ++k)
            cache[static_cast<std::size_t>(k)] = make_gauss_legendre(k);
    });
    return cache[static_cast<std::size_t>(n)];
}

namespace {

// Collapsed (conical product) rule: x = u, y = (1 - u) v with Gauss-Legendre in u and v.
TriangleRule make_conical_rule(int order)
{
    const int n = (order + 2) / 2 + 1;
    const auto& g = gauss_segment(n);
    TriangleRule r;
    r.degree = order;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double u = g.points[i], v = g.points[j];
            const double x = u, y = (1.0 - u) * v;
            r.points.push_back({1.0 - x - y, x, y});
            r.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
        }
    return r;
}

} // namespace

const TriangleRule& gauss_triangle(int order)
{
    if (order < 1 || order > 12)
        throw ConfigError("triangle quadrature order must lie in [1, 12], got " + std::to_string(order));
    static std::array<TriangleRule, 13> cache;
    static std::once_flag flag;
    std::call_once(flag, [] {
        for (int k = 1; k <= 6; ++k)
            cache[static_cast<std::size_t>(k)] = make_triangle_rule(k);
        for (int k = 7; k <= 12; ++k)
            cache[static_cast<std::size_t>(k)] = make_conical_rule(k);
    });
    return cache[static_cast<std::size_t>(order)];
}

double adaptive_segment_oracle(const std::function<double(double)>& f, double a, double b, double tol,
                               int max_intervals)
{
    std::priority_queue<Interval> heap;
    Interval first = kronrod15(f, a, b);
    double total_err = first.error;
    heap.push(first);
    int count = 1;
    while (total_err > tol) {
        if (count >= max_intervals)
            throw OracleError("adaptive quadrature did not reach tolerance " + std::to_string(tol));
        const Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Interval left = kronrod15(f, worst.a, mid);
        const Interval right = kronrod15(f, mid, worst.b);
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    std::vector<Interval> pieces;
    pieces.reserve(heap.size());
    while (!heap.empty()) {
        pieces.push_back(heap.top());
        heap.pop();
    }
    std::sort(pieces.begin(), pieces.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    double sum = 0.0;
    for (const auto& p : pieces)
        sum += p.value;
    return sum;
}

} // namespace ldgbem
