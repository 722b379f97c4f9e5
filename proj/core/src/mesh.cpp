#include "ldgbem/mesh.hpp"

#include "ldgbem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <tuple>
#include <unordered_map>

namespace ldgbem {

namespace {

constexpr double kPerimeter = 4.0;
constexpr double kGeomTol = 1e-13;

Vec2 outward_normal(const Vec2& p, const Vec2& q)
{
    const Vec2 d = q - p;
    return Vec2(d.y(), -d.x()) / d.norm();
}

// Cyclic test: does arclength p lie in the closed interval [s0, s0 + len] on the perimeter?
bool on_arc(double p, double s0, double len)
{
    double d = std::fmod(p - s0 + 2.0 * kPerimeter, kPerimeter);
    if (d > kPerimeter - kGeomTol)
        d -= kPerimeter;
    return d >= -kGeomTol && d <= len + kGeomTol;
}

bool on_boundary(const Vec2& p)
{
    return std::abs(p.x()) < kGeomTol || std::abs(p.y()) < kGeomTol
           || std::abs(p.x() - 1.0) < kGeomTol || std::abs(p.y() - 1.0) < kGeomTol;
}

} // namespace

double TriangleMesh::signed_area(std::size_t k) const
{
    const Vec2 e1 = vertex(k, 1) - vertex(k, 0);
    const Vec2 e2 = vertex(k, 2) - vertex(k, 0);
    return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double TriangleMesh::inradius(std::size_t k) const
{
    double perimeter = 0.0;
    for (int i = 0; i < 3; ++i)
        perimeter += (vertex(k, (i + 1) % 3) - vertex(k, i)).norm();
    return 2.0 * std::abs(signed_area(k)) / perimeter;
}

Vec2 TriangleMesh::centroid(std::size_t k) const
{
    return (vertex(k, 0) + vertex(k, 1) + vertex(k, 2)) / 3.0;
}

std::size_t TriangleMesh::locate(const Vec2& p) const
{
    if (p.x() < -kGeomTol || p.x() > 1.0 + kGeomTol || p.y() < -kGeomTol || p.y() > 1.0 + kGeomTol)
        throw QueryError("point outside the unit square");
    const int n = 1 << level;
    const int i = std::clamp(static_cast<int>(std::floor(p.x() / h)), 0, n - 1);
    const int j = std::clamp(static_cast<int>(std::floor(p.y() / h)), 0, n - 1);
    const double lx = p.x() - i * h;
    const double ly = p.y() - j * h;
    const std::size_t cell = static_cast<std::size_t>(j * n + i);
    // lower-right triangle lies below the diagonal
    return ly <= lx ? 2 * cell : 2 * cell + 1;
}

TriangleMesh build_uniform_square_mesh(int level)
{
    if (level < 1 || level > 8)
        throw ConfigError("mesh level must lie in [1, 8], got " + std::to_string(level));
    TriangleMesh mesh;
    mesh.level = level;
    const int n = 1 << level;
    mesh.h = 1.0 / n;
    mesh.vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.vertices.emplace_back(i * mesh.h, j * mesh.h);
    const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    mesh.triangles.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    }
    mesh.diameters.reserve(mesh.triangles.size());
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        double d = 0.0;
        for (int e = 0; e < 3; ++e)
            d = std::max(d, (mesh.vertex(k, (e + 1) % 3) - mesh.vertex(k, e)).norm());
        mesh.diameters.push_back(d);
    }
    return mesh;
}

FaceSet extract_faces(const TriangleMesh& mesh)
{
    struct Incidence {
        int triangle;
        int local;
    };
    const auto nv = static_cast<long long>(mesh.vertices.size());
    std::unordered_map<long long, std::vector<Incidence>> edges;
    edges.reserve(mesh.triangles.size() * 2);
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        for (int e = 0; e < 3; ++e) {
            const long long p = mesh.triangles[k][static_cast<std::size_t>((e + 1) % 3)];
            const long long q = mesh.triangles[k][static_cast<std::size_t>((e + 2) % 3)];
            edges[std::min(p, q) * nv + std::max(p, q)].push_back({static_cast<int>(k), e});
        }
    }

    // Iterate in key order for a build-independent face numbering.
    std::vector<long long> keys;
    keys.reserve(edges.size());
    for (const auto& kv : edges)
        keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());

    FaceSet faces;
    faces.triangle_faces.assign(mesh.triangles.size(), {0, 0, 0});
    for (const long long key : keys) {
        const auto& inc = edges[key];
        if (inc.size() > 2)
            throw MeshError("non-conforming mesh: edge shared by more than two triangles");
        const auto edge_points = [&](const Incidence& i) {
            const auto k = static_cast<std::size_t>(i.triangle);
            return std::pair<Vec2, Vec2>{mesh.vertex(k, (i.local + 1) % 3), mesh.vertex(k, (i.local + 2) % 3)};
        };
        if (inc.size() == 2) {
            const Incidence& m = inc[0].triangle < inc[1].triangle ? inc[0] : inc[1];
            const Incidence& p = inc[0].triangle < inc[1].triangle ? inc[1] : inc[0];
            InteriorFace f;
            f.minus = m.triangle;
            f.plus = p.triangle;
            f.local_minus = m.local;
            f.local_plus = p.local;
            std::tie(f.a, f.b) = edge_points(m);
            f.normal_minus = outward_normal(f.a, f.b);
            f.length = (f.b - f.a).norm();
            faces.triangle_faces[static_cast<std::size_t>(m.triangle)][static_cast<std::size_t>(m.local)] =
                static_cast<int>(faces.interior.size());
            faces.triangle_faces[static_cast<std::size_t>(p.triangle)][static_cast<std::size_t>(p.local)] =
                static_cast<int>(faces.interior.size());
            faces.interior.push_back(f);
        } else {
            BoundaryFace f;
            f.owner = inc[0].triangle;
            f.local = inc[0].local;
            std::tie(f.a, f.b) = edge_points(inc[0]);
            if (!on_boundary(f.a) || !on_boundary(f.b))
                throw MeshError("edge with a single neighbour lies inside the domain");
            f.normal = outward_normal(f.a, f.b);
            f.length = (f.b - f.a).norm();
            f.s0 = boundary_arclength(f.a);
            faces.boundary.push_back(f);
        }
    }
    std::sort(faces.boundary.begin(), faces.boundary.end(),
              [](const BoundaryFace& x, const BoundaryFace& y) { return x.s0 < y.s0; });
    for (std::size_t j = 0; j < faces.boundary.size(); ++j) {
        const auto& f = faces.boundary[j];
        faces.triangle_faces[static_cast<std::size_t>(f.owner)][static_cast<std::size_t>(f.local)] =
            -static_cast<int>(j) - 1;
    }
    return faces;
}

double BoundaryMesh::perimeter() const
{
    double total = 0.0;
    for (const auto& s : segments)
        total += s.length;
    return total;
}

std::size_t BoundaryMesh::locate(double s) const
{
    const double per = perimeter();
    if (s < -kGeomTol || s >= per + kGeomTol)
        throw QueryError("boundary arclength outside [0, perimeter)");
    if (s >= per - kGeomTol)
        s = 0.0;
    // segments are sorted by s0
    auto it = std::upper_bound(segments.begin(), segments.end(), s + kGeomTol,
                               [](double v, const BoundarySegment& seg) { return v < seg.s0; });
    return static_cast<std::size_t>(std::distance(segments.begin(), it)) - 1;
}

BoundaryMesh build_boundary_mesh(const TriangleMesh& mesh, int refine_factor)
{
    if (refine_factor != 1 && refine_factor != 2 && refine_factor != 4)
        throw ConfigError("boundary refine factor must be 1, 2 or 4");
    const FaceSet faces = extract_faces(mesh);
    BoundaryMesh bmesh;
    bmesh.refine_factor = refine_factor;
    bmesh.segments.reserve(faces.boundary.size() * static_cast<std::size_t>(refine_factor));
    for (std::size_t j = 0; j < faces.boundary.size(); ++j) {
        const auto& f = faces.boundary[j];
        for (int r = 0; r < refine_factor; ++r) {
            BoundarySegment seg;
            seg.a = f.a + (static_cast<double>(r) / refine_factor) * (f.b - f.a);
            seg.b = f.a + (static_cast<double>(r + 1) / refine_factor) * (f.b - f.a);
            seg.length = f.length / refine_factor;
            seg.tangent = (f.b - f.a) / f.length;
            seg.normal = f.normal;
            seg.s0 = f.s0 + r * seg.length;
            seg.face = static_cast<int>(j);
            bmesh.segments.push_back(seg);
        }
    }
    return bmesh;
}

LocalUniformityReport check_local_quasi_uniformity(const TriangleMesh& mesh, const FaceSet& faces,
                                                   const BoundaryMesh& bmesh, double delta_max)
{
    LocalUniformityReport rep;
    for (const auto& f : faces.interior) {
        const double r = mesh.diameters[static_cast<std::size_t>(f.minus)]
                         / mesh.diameters[static_cast<std::size_t>(f.plus)];
        rep.delta_interior = std::max({rep.delta_interior, r, 1.0 / r});
    }

    // Arclength intervals of the boundary faces of each triangle, plus its boundary vertices.
    struct Touch {
        std::vector<double> vertices;
        std::vector<std::pair<double, double>> arcs;
    };
    std::unordered_map<int, Touch> touch;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        for (int i = 0; i < 3; ++i) {
            const Vec2& p = mesh.vertex(k, i);
            if (on_boundary(p))
                touch[static_cast<int>(k)].vertices.push_back(boundary_arclength(p));
        }
    }
    for (const auto& f : faces.boundary)
        touch[f.owner].arcs.emplace_back(f.s0, f.length);

    for (const auto& [k, t] : touch) {
        const double hk = mesh.diameters[static_cast<std::size_t>(k)];
        for (const auto& seg : bmesh.segments) {
            bool touching = false;
            for (double p : t.vertices)
                touching = touching || on_arc(p, seg.s0, seg.length);
            for (const auto& [s0, len] : t.arcs)
                touching = touching || on_arc(seg.s0, s0, len);
            if (touching)
                rep.delta_boundary = std::max({rep.delta_boundary, hk / seg.length, seg.length / hk});
        }
    }
    rep.delta = std::max(rep.delta_interior, rep.delta_boundary);
    rep.pass = rep.delta <= delta_max;
    return rep;
}

void write_mesh(std::ostream& out, const TriangleMesh& mesh)
{
    out.precision(17);
    out << "VERTICES " << mesh.vertices.size() << '\n';
    for (const auto& v : mesh.vertices)
        out << v.x() << ' ' << v.y() << '\n';
    out << "TRIANGLES " << mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles)
        out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

double boundary_arclength(const Vec2& p)
{
    if (std::abs(p.y()) < kGeomTol && p.x() < 1.0 - kGeomTol)
        return p.x();
    if (std::abs(p.x() - 1.0) < kGeomTol && p.y() < 1.0 - kGeomTol)
        return 1.0 + p.y();
    if (std::abs(p.y() - 1.0) < kGeomTol && p.x() > kGeomTol)
        return 2.0 + (1.0 - p.x());
    if (std::abs(p.x()) < kGeomTol && p.y() > kGeomTol)
        return 3.0 + (1.0 - p.y());
    throw QueryError("point is not on the boundary of the unit square");
}

} // namespace ldgbem
