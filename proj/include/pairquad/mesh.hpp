#pragma once

#include <span>
#include <string>
#include <vector>

namespace pairquad {

using Vec = std::vector<double>;

// Oriented simplicial mesh in R^m, optionally with periodic coordinates.
// Vertex order inside each simplex carries the orientation. When `periods`
// is nonempty (size == ambient), each coordinate with a positive period
// lives on a circle of that period and all geometry goes through
// minimal-image displacements; a zero entry leaves that axis unwrapped.
struct Triangulation {
    int dim = 0;      // simplex dimension n
    int ambient = 0;  // coordinate count m, m >= dim
    std::vector<double> coords;     // vertex_count * ambient, row-major
    std::vector<int> simplices;     // simplex_count * (dim + 1)
    Vec periods;                    // empty, or one period per coordinate

    int vertex_count() const { return ambient ? static_cast<int>(coords.size()) / ambient : 0; }
    int simplex_count() const {
        return static_cast<int>(simplices.size()) / (dim + 1);
    }
    std::span<const double> vertex(int i) const {
        return {coords.data() + static_cast<std::size_t>(i) * ambient,
                static_cast<std::size_t>(ambient)};
    }
    std::span<const int> simplex(int s) const {
        return {simplices.data() + static_cast<std::size_t>(s) * (dim + 1),
                static_cast<std::size_t>(dim + 1)};
    }
    bool periodic() const { return !periods.empty(); }
};

// Throws std::invalid_argument when sizes, indices, or periods are malformed.
void validate_mesh(const Triangulation& T);

// Shortest representative of b - a; on axes with positive period the result
// lies in (-P/2, P/2], ties resolved to +P/2. Other axes pass through.
Vec displacement(std::span<const double> a, std::span<const double> b, const Vec& periods);
Vec displacement(const Triangulation& T, int va, int vb);

// Reduce a point into the fundamental domain [0, P) on periodic axes.
Vec wrap_point(Vec p, const Vec& periods);

// Determinant of the n x n matrix whose columns are the given vectors.
double signed_parallelepiped_volume(const std::vector<Vec>& columns);

// Signed volume of the simplex spanned by (n+1) unwrapped vertices in R^n.
double simplex_signed_volume(const std::vector<Vec>& verts);

// Simplex vertices unwrapped relative to vertex 0 via minimal images.
// For aperiodic meshes this is just a copy of the vertex coordinates.
std::vector<Vec> unwrapped_simplex(const Triangulation& T, int s);

double simplex_diameter(const std::vector<Vec>& verts);
double max_diameter(const Triangulation& T);

struct MeshAudit {
    bool consistent = false;          // all checks below passed
    int interior_faces = 0;           // codim-1 faces shared by two simplices
    int boundary_faces = 0;           // faces owned by exactly one simplex
    int orientation_violations = 0;   // face classes whose induced orientations do not cancel
    int degenerate_simplices = 0;
    bool volume_signs_uniform = true; // only checked when dim == ambient
};

// Combinatorial orientation check: every interior codim-1 face must be
// induced with opposite orientations by its two owners. Faces are grouped
// by sorted vertex tuple and checked by signed multiplicity cancellation,
// which stays correct on small periodic meshes where two geometrically
// distinct faces share the same vertex set.
MeshAudit orientation_audit(const Triangulation& T, double degeneracy_tol = 1e-12);

enum class SubdivisionScheme { edgewise, barycentric };

// Refine every simplex. Edgewise splitting is implemented for dim <= 3
// (midpoint / 4 triangles / 8 tetrahedra); barycentric works in any
// dimension and yields (dim+1)! children per simplex. Orientations of the
// children match the parent.
Triangulation subdivide(const Triangulation& T, SubdivisionScheme scheme);

// Builders.
Triangulation interval_partition(const std::vector<double>& breaks);
Triangulation interval_partition(double a, double b, int cells);
Triangulation unit_square_grid(int cells_per_axis);
Triangulation unit_cube_grid(int cells_per_axis);
// 2-torus, cells_per_axis >= 3 (coarser grids have edges spanning half a
// period, where minimal-image reconstruction is ambiguous).
Triangulation flat_torus_grid(int cells_per_axis, const Vec& periods = {1.0, 1.0});
// Unit sphere surface triangulated from an icosahedron, `levels` rounds of
// 4-way splitting with projection back to the sphere. Counterclockwise seen
// from outside.
Triangulation icosphere(int levels);

// Closed polygon in R^2 as an oriented 1-mesh (vertex i -> i+1 mod N).
Triangulation polygon_loop(const std::vector<Vec>& points);

// Inscribed regular N-gon of the disk of area 1, centered at the origin.
Triangulation regular_polygon(int sides);

}  // namespace pairquad
