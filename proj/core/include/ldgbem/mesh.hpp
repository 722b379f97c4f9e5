#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <vector>

namespace ldgbem {

using Vec2 = Eigen::Vector2d;

/// Conforming triangulation of the unit square, counterclockwise triangles.
struct TriangleMesh {
    int level = 0;
    double h = 0.0; ///< grid spacing 2^-level
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<double> diameters; ///< h_K, longest edge

    [[nodiscard]] std::size_t num_triangles() const { return triangles.size(); }
    [[nodiscard]] double signed_area(std::size_t k) const;
    [[nodiscard]] double inradius(std::size_t k) const;
    [[nodiscard]] Vec2 centroid(std::size_t k) const;
    [[nodiscard]] const Vec2& vertex(std::size_t k, int local) const
    {
        return vertices[static_cast<std::size_t>(triangles[k][static_cast<std::size_t>(local)])];
    }

    /// Index of the triangle containing p (closure), or throws QueryError.
    [[nodiscard]] std::size_t locate(const Vec2& p) const;
};

/// Split each cell of the 2^level x 2^level grid along the bottom-left to top-right diagonal.
[[nodiscard]] TriangleMesh build_uniform_square_mesh(int level);

/// Edge F = K- ∩ K+; K- is the lower triangle index.
struct InteriorFace {
    int minus = -1;
    int plus = -1;
    int local_minus = -1; ///< local edge index in K- (edge opposite vertex i)
    int local_plus = -1;
    Vec2 a, b;            ///< endpoints
    Vec2 normal_minus;    ///< unit normal pointing out of K-
    double length = 0.0;
};

/// Edge F = K ∩ Γ, oriented counterclockwise along Γ.
struct BoundaryFace {
    int owner = -1;
    int local = -1;
    Vec2 a, b;
    Vec2 normal; ///< outward unit normal of Ω
    double length = 0.0;
    double s0 = 0.0; ///< arclength of a, measured ccw from (0,0)
};

/// Interior and boundary faces. Boundary faces are sorted counterclockwise from the origin.
struct FaceSet {
    std::vector<InteriorFace> interior;
    std::vector<BoundaryFace> boundary;
    /// For each triangle and local edge: +i for interior face i, -(j+1) for boundary face j.
    std::vector<std::array<int, 3>> triangle_faces;

    [[nodiscard]] std::size_t size() const { return interior.size() + boundary.size(); }
};

[[nodiscard]] FaceSet extract_faces(const TriangleMesh& mesh);

struct BoundarySegment {
    Vec2 a, b;
    Vec2 tangent; ///< unit, counterclockwise
    Vec2 normal;  ///< unit, pointing out of Ω
    double length = 0.0;
    double s0 = 0.0;
    int face = -1; ///< boundary face of the interior mesh containing this segment

    [[nodiscard]] Vec2 point(double t) const { return a + t * (b - a); }
};

/// Partition G_h of Γ. Node i is the start point of segment i; its incoming segment is i-1.
struct BoundaryMesh {
    std::vector<BoundarySegment> segments;
    int refine_factor = 1;

    [[nodiscard]] std::size_t num_segments() const { return segments.size(); }
    [[nodiscard]] std::size_t num_nodes() const { return segments.size(); }
    [[nodiscard]] std::size_t incoming(std::size_t node) const
    {
        return node == 0 ? segments.size() - 1 : node - 1;
    }
    [[nodiscard]] std::size_t outgoing(std::size_t node) const { return node; }
    [[nodiscard]] const Vec2& node(std::size_t i) const { return segments[i].a; }
    [[nodiscard]] double perimeter() const;
    /// Segment containing arclength s in [0, perimeter); ties go to the segment starting at s.
    [[nodiscard]] std::size_t locate(double s) const;
};

/// Boundary partition nested in the trace of the mesh; refine_factor ∈ {1, 2, 4}.
[[nodiscard]] BoundaryMesh build_boundary_mesh(const TriangleMesh& mesh, int refine_factor);

struct LocalUniformityReport {
    double delta_interior = 1.0; ///< max h_K / h_K' over face-sharing pairs
    double delta_boundary = 1.0; ///< max of h_K/h_T and h_T/h_K over touching pairs
    double delta = 1.0;
    bool pass = false;
};

[[nodiscard]] LocalUniformityReport check_local_quasi_uniformity(const TriangleMesh& mesh,
                                                                 const FaceSet& faces,
                                                                 const BoundaryMesh& bmesh,
                                                                 double delta_max);

/// Plain-text dump with VERTICES and TRIANGLES sections.
void write_mesh(std::ostream& out, const TriangleMesh& mesh);

/// Arclength (ccw from the origin) of a point on Γ.
[[nodiscard]] double boundary_arclength(const Vec2& p);

} // namespace ldgbem
