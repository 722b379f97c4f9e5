#include "ldgbem/errors.hpp"
#include "ldgbem/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace ldgbem;

TEST_CASE("uniform mesh counts")
{
    const TriangleMesh m1 = build_uniform_square_mesh(1);
    CHECK(m1.num_triangles() == 8);
    CHECK(m1.vertices.size() == 9);
    CHECK(m1.h == 0.5);
    CHECK(build_uniform_square_mesh(3).num_triangles() == 128);
}

TEST_CASE("level 6 areas")
{
    const TriangleMesh m = build_uniform_square_mesh(6);
    REQUIRE(m.num_triangles() == 8192);
    double total = 0.0, smallest = 1.0;
    for (std::size_t k = 0; k < m.num_triangles(); ++k) {
        const double a = m.signed_area(k);
        CHECK(a > 0.0);
        total += a;
        smallest = std::min(smallest, a);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(smallest == std::ldexp(1.0, -13));
}

TEST_CASE("invalid levels")
{
    CHECK_THROWS_AS((void)build_uniform_square_mesh(0), ConfigError);
    CHECK_THROWS_AS((void)build_boundary_mesh(build_uniform_square_mesh(1), 3), ConfigError);
}

TEST_CASE("face extraction")
{
    const TriangleMesh m = build_uniform_square_mesh(1);
    const FaceSet f = extract_faces(m);
    CHECK(f.boundary.size() == 8);
    CHECK(f.interior.size() == 8);

    // Euler on a general level: E = 3T/2 + B/2
    const TriangleMesh m4 = build_uniform_square_mesh(4);
    const FaceSet f4 = extract_faces(m4);
    CHECK(2 * f4.interior.size() + f4.boundary.size() == 3 * m4.num_triangles());
    CHECK(f4.boundary.size() == 64);

    // every triangle sees three distinct faces
    for (std::size_t k = 0; k < m4.num_triangles(); ++k) {
        std::set<int> ids(f4.triangle_faces[k].begin(), f4.triangle_faces[k].end());
        CHECK(ids.size() == 3);
    }
    for (const auto& face : f4.interior) {
        CHECK(face.minus < face.plus);
        // the normal points from K- into K+
        const Vec2 mid = 0.5 * (face.a + face.b);
        CHECK((m4.centroid(static_cast<std::size_t>(face.plus)) - mid).dot(face.normal_minus) > 0.0);
    }
    double s_prev = -1.0;
    for (const auto& face : f4.boundary) {
        CHECK(face.s0 > s_prev);
        s_prev = face.s0;
        CHECK(face.s0 == doctest::Approx(boundary_arclength(face.a)));
        CHECK((face.b - face.a).dot(Vec2(face.normal.y(), -face.normal.x())) < 0.0);
    }
}

TEST_CASE("boundary partitions")
{
    const TriangleMesh m = build_uniform_square_mesh(2);
    const BoundaryMesh b1 = build_boundary_mesh(m, 1);
    CHECK(b1.num_segments() == 16);
    for (const auto& s : b1.segments)
        CHECK(s.length == 0.25);
    const BoundaryMesh b2 = build_boundary_mesh(m, 2);
    CHECK(b2.num_segments() == 32);
    for (const auto& s : b2.segments)
        CHECK(s.length == 0.125);

    for (int level = 1; level <= 5; ++level)
        for (int rho : {1, 2, 4}) {
            const BoundaryMesh b = build_boundary_mesh(build_uniform_square_mesh(level), rho);
            double sum = 0.0;
            for (const auto& s : b.segments)
                sum += s.length;
            CHECK(sum == doctest::Approx(4.0).epsilon(1e-14));
            CHECK(b.perimeter() == doctest::Approx(4.0).epsilon(1e-14));
        }

    CHECK(b1.locate(0.0) == 0);
    CHECK(b1.locate(0.25) == 1);
    CHECK(b1.locate(3.99) == 15);
    CHECK(b1.incoming(0) == 15);
    CHECK(b1.locate(4.0) == 0); // the perimeter wraps to the origin
    CHECK_THROWS_AS((void)b1.locate(4.1), QueryError);
    CHECK_THROWS_AS((void)b1.locate(-0.1), QueryError);
}

TEST_CASE("local quasi-uniformity")
{
    for (int level = 1; level <= 4; ++level) {
        const TriangleMesh m = build_uniform_square_mesh(level);
        const FaceSet f = extract_faces(m);
        const auto r1 = check_local_quasi_uniformity(m, f, build_boundary_mesh(m, 1), 10.0);
        CHECK(r1.delta_interior == 1.0);
        CHECK(r1.delta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(r1.pass);
        const auto r4 = check_local_quasi_uniformity(m, f, build_boundary_mesh(m, 4), 10.0);
        CHECK(r4.delta_boundary == doctest::Approx(4.0 * r1.delta_boundary).epsilon(1e-12));
        CHECK(r4.pass);
        CHECK_FALSE(check_local_quasi_uniformity(m, f, build_boundary_mesh(m, 4), 2.0).pass);
    }
}

TEST_CASE("point location")
{
    const TriangleMesh m = build_uniform_square_mesh(3);
    for (double x : {0.0, 0.13, 0.5, 0.77, 1.0})
        for (double y : {0.0, 0.31, 0.5, 0.9, 1.0}) {
            const std::size_t k = m.locate({x, y});
            // barycentric coordinates inside [0, 1]
            const Vec2 &a = m.vertex(k, 0), &b = m.vertex(k, 1), &c = m.vertex(k, 2);
            const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
            const Vec2 p(x, y);
            const double l1 = ((p - a).x() * (c - a).y() - (p - a).y() * (c - a).x()) / det;
            const double l2 = ((b - a).x() * (p - a).y() - (b - a).y() * (p - a).x()) / det;
            CHECK(l1 >= -1e-12);
            CHECK(l2 >= -1e-12);
            CHECK(l1 + l2 <= 1.0 + 1e-12);
        }
    CHECK_THROWS_AS((void)m.locate({1.1, 0.5}), QueryError);
    CHECK_THROWS_AS((void)m.locate({0.5, -0.01}), QueryError);
}

TEST_CASE("mesh dump")
{
    std::ostringstream out;
    write_mesh(out, build_uniform_square_mesh(1));
    CHECK(out.str().find("VERTICES") != std::string::npos);
    CHECK(out.str().find("TRIANGLES") != std::string::npos);
}
