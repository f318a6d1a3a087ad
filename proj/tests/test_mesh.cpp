#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pairquad/mesh.hpp"
#include "pairquad/mesh_io.hpp"
#include "pairquad/summation.hpp"

using namespace pairquad;

namespace {

double total_signed_volume(const Triangulation& T) {
    NeumaierSum s;
    for (int i = 0; i < T.simplex_count(); ++i) s.add(simplex_signed_volume(unwrapped_simplex(T, i)));
    return s.value();
}

}  // namespace

TEST_CASE("interval partitions") {
    auto T = interval_partition(0.0, 1.0, 10);
    CHECK(T.dim == 1);
    CHECK(T.vertex_count() == 11);
    CHECK(T.simplex_count() == 10);
    CHECK(total_signed_volume(T) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(max_diameter(T) == doctest::Approx(0.1));

    auto B = interval_partition({0.0, 1.0, 3.0});
    CHECK(B.simplex_count() == 2);
    CHECK(simplex_signed_volume(unwrapped_simplex(B, 1)) == doctest::Approx(2.0));
    CHECK(max_diameter(B) == doctest::Approx(2.0));

    CHECK_THROWS_AS(interval_partition({1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(interval_partition({0.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(interval_partition(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("square grid counts, area, audit") {
    auto T = unit_square_grid(4);
    CHECK(T.vertex_count() == 25);
    CHECK(T.simplex_count() == 32);
    CHECK(total_signed_volume(T) == doctest::Approx(1.0).epsilon(1e-14));

    auto A = orientation_audit(T);
    CHECK(A.consistent);
    CHECK(A.boundary_faces == 16);
    CHECK(A.interior_faces == 40);
    CHECK(A.orientation_violations == 0);
    CHECK(A.degenerate_simplices == 0);
    CHECK(A.volume_signs_uniform);
}

TEST_CASE("cube grid counts, volume, audit") {
    auto T = unit_cube_grid(2);
    CHECK(T.vertex_count() == 27);
    CHECK(T.simplex_count() == 48);
    CHECK(total_signed_volume(T) == doctest::Approx(1.0).epsilon(1e-14));

    auto A = orientation_audit(T);
    CHECK(A.consistent);
    CHECK(A.boundary_faces == 48);   // 6 sides, 2 * 2^2 triangles each
    CHECK(A.interior_faces == 72);   // (48*4 - 48) / 2
    CHECK(A.volume_signs_uniform);
}

TEST_CASE("flat torus: closed, unit area per cell block") {
    auto T = flat_torus_grid(3);
    CHECK(T.vertex_count() == 9);
    CHECK(T.simplex_count() == 18);
    CHECK(T.periodic());
    CHECK(total_signed_volume(T) == doctest::Approx(1.0).epsilon(1e-14));

    auto A = orientation_audit(T);
    CHECK(A.consistent);
    CHECK(A.boundary_faces == 0);
    CHECK(A.interior_faces == 27);  // 18*3/2

    auto S = flat_torus_grid(4, {2.0, 3.0});
    CHECK(S.vertex_count() == 16);
    CHECK(S.simplex_count() == 32);
    CHECK(total_signed_volume(S) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(orientation_audit(S).consistent);
    CHECK(orientation_audit(S).boundary_faces == 0);

    CHECK_THROWS_AS(flat_torus_grid(1), std::invalid_argument);
    // edges of length P/2 make minimal-image unwrapping ambiguous
    CHECK_THROWS_AS(flat_torus_grid(2), std::invalid_argument);
}

TEST_CASE("icosphere: closed oriented surface, outward faces") {
    auto T0 = icosphere(0);
    CHECK(T0.vertex_count() == 12);
    CHECK(T0.simplex_count() == 20);
    auto A0 = orientation_audit(T0);
    CHECK(A0.consistent);
    CHECK(A0.boundary_faces == 0);
    CHECK(A0.interior_faces == 30);

    auto T2 = icosphere(2);
    CHECK(T2.vertex_count() == 162);
    CHECK(T2.simplex_count() == 320);
    auto A2 = orientation_audit(T2);
    CHECK(A2.consistent);
    CHECK(A2.boundary_faces == 0);
    CHECK(A2.interior_faces == 480);

    // vertices on the unit sphere, faces counterclockwise from outside
    for (int v = 0; v < T2.vertex_count(); ++v) {
        auto x = T2.vertex(v);
        CHECK(std::hypot(x[0], x[1], x[2]) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (int s = 0; s < T2.simplex_count(); ++s) {
        auto verts = unwrapped_simplex(T2, s);
        Vec u = {verts[1][0] - verts[0][0], verts[1][1] - verts[0][1], verts[1][2] - verts[0][2]};
        Vec w = {verts[2][0] - verts[0][0], verts[2][1] - verts[0][1], verts[2][2] - verts[0][2]};
        Vec n = {u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
        double dot = 0;
        for (int k = 0; k < 3; ++k) dot += n[k] * (verts[0][k] + verts[1][k] + verts[2][k]) / 3.0;
        CHECK(dot > 0);
    }
}

TEST_CASE("minimal-image displacement and wrapping") {
    Vec periods = {1.0};
    CHECK(displacement(Vec{0.9}, Vec{0.1}, periods)[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(displacement(Vec{0.1}, Vec{0.9}, periods)[0] == doctest::Approx(-0.2).epsilon(1e-15));
    // ties land on +P/2 from either direction
    CHECK(displacement(Vec{0.0}, Vec{0.5}, periods)[0] == doctest::Approx(0.5));
    CHECK(displacement(Vec{0.5}, Vec{0.0}, periods)[0] == doctest::Approx(0.5));
    // aperiodic axes pass through
    CHECK(displacement(Vec{0.9, 3.0}, Vec{0.1, 5.0}, Vec{1.0, 0.0})[0] == doctest::Approx(0.2));
    CHECK(displacement(Vec{0.9, 3.0}, Vec{0.1, 5.0}, Vec{1.0, 0.0})[1] == doctest::Approx(2.0));
    CHECK(displacement(Vec{1.0}, Vec{3.5}, Vec{})[0] == doctest::Approx(2.5));

    CHECK(wrap_point({1.25}, periods)[0] == doctest::Approx(0.25));
    CHECK(wrap_point({-0.25}, periods)[0] == doctest::Approx(0.75));
    CHECK(wrap_point({1.0}, periods)[0] == 0.0);
    CHECK(wrap_point({0.75}, periods)[0] == 0.75);
}

TEST_CASE("determinants and simplex volumes") {
    CHECK(signed_parallelepiped_volume({{1, 0}, {0, 1}}) == doctest::Approx(1.0));
    CHECK(signed_parallelepiped_volume({{0, 1}, {1, 0}}) == doctest::Approx(-1.0));
    CHECK(signed_parallelepiped_volume({{2, 0, 0}, {1, 3, 0}, {0, 0, 4}}) == doctest::Approx(24.0));

    std::vector<Vec> tri = {{0, 0}, {1, 0}, {0, 1}};
    CHECK(simplex_signed_volume(tri) == doctest::Approx(0.5));
    std::vector<Vec> flipped = {{0, 0}, {0, 1}, {1, 0}};
    CHECK(simplex_signed_volume(flipped) == doctest::Approx(-0.5));
}

TEST_CASE("edgewise subdivision preserves volume, orientation, counts") {
    auto I = subdivide(interval_partition({0.0, 1.0, std::numbers::pi}), SubdivisionScheme::edgewise);
    CHECK(I.simplex_count() == 4);
    CHECK(total_signed_volume(I) == doctest::Approx(std::numbers::pi).epsilon(1e-15));

    auto S = subdivide(unit_square_grid(2), SubdivisionScheme::edgewise);
    CHECK(S.simplex_count() == 32);
    CHECK(S.vertex_count() == 25);  // shared edge midpoints deduplicated
    CHECK(total_signed_volume(S) == doctest::Approx(1.0).epsilon(1e-14));
    auto A = orientation_audit(S);
    CHECK(A.consistent);
    CHECK(A.volume_signs_uniform);
    CHECK(max_diameter(S) == doctest::Approx(0.5 * max_diameter(unit_square_grid(2))));

    auto C = subdivide(unit_cube_grid(1), SubdivisionScheme::edgewise);
    CHECK(C.simplex_count() == 48);
    CHECK(total_signed_volume(C) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(orientation_audit(C).consistent);

    // a skew tetrahedron: children tile the parent with the parent's sign
    Triangulation tet;
    tet.dim = tet.ambient = 3;
    tet.coords = {0, 0, 0, 1, 0.2, 0, 0.1, 1, 0.3, 0.2, 0.1, 1.4};
    tet.simplices = {0, 1, 2, 3};
    double parent_vol = simplex_signed_volume(unwrapped_simplex(tet, 0));
    auto kids = subdivide(tet, SubdivisionScheme::edgewise);
    CHECK(kids.simplex_count() == 8);
    NeumaierSum vol;
    for (int s = 0; s < 8; ++s) {
        double v = simplex_signed_volume(unwrapped_simplex(kids, s));
        CHECK(v * parent_vol > 0);
        vol.add(v);
    }
    CHECK(vol.value() == doctest::Approx(parent_vol).epsilon(1e-14));
}

TEST_CASE("barycentric subdivision preserves volume in any dimension") {
    auto S = subdivide(unit_square_grid(1), SubdivisionScheme::barycentric);
    CHECK(S.simplex_count() == 12);  // 2 triangles, 3! children each
    CHECK(total_signed_volume(S) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(orientation_audit(S).consistent);
    CHECK(max_diameter(S) < max_diameter(unit_square_grid(1)));

    auto C = subdivide(unit_cube_grid(1), SubdivisionScheme::barycentric);
    CHECK(C.simplex_count() == 6 * 24);
    CHECK(total_signed_volume(C) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(orientation_audit(C).consistent);
    CHECK(orientation_audit(C).volume_signs_uniform);
}

TEST_CASE("torus subdivision stays closed and keeps the area") {
    auto T = subdivide(flat_torus_grid(3), SubdivisionScheme::edgewise);
    CHECK(T.vertex_count() == 36);  // 9 originals + 27 edge midpoints
    CHECK(T.simplex_count() == 72);
    CHECK(total_signed_volume(T) == doctest::Approx(1.0).epsilon(1e-14));
    auto A = orientation_audit(T);
    CHECK(A.consistent);
    CHECK(A.boundary_faces == 0);

    auto B = subdivide(flat_torus_grid(3, {2.0, 3.0}), SubdivisionScheme::edgewise);
    CHECK(total_signed_volume(B) == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(orientation_audit(B).consistent);
    CHECK(orientation_audit(B).boundary_faces == 0);
}

TEST_CASE("audit flags broken meshes") {
    // one triangle reversed: sign mix plus a non-cancelling interior edge
    Triangulation T;
    T.dim = T.ambient = 2;
    T.coords = {0, 0, 1, 0, 1, 1, 0, 1};
    T.simplices = {0, 1, 2, 0, 3, 2};
    auto A = orientation_audit(T);
    CHECK_FALSE(A.consistent);
    CHECK(A.orientation_violations > 0);
    CHECK_FALSE(A.volume_signs_uniform);

    // collinear triangle counts as degenerate
    Triangulation D;
    D.dim = D.ambient = 2;
    D.coords = {0, 0, 1, 1, 2, 2, 1, 0};
    D.simplices = {0, 1, 2, 0, 1, 3};
    auto AD = orientation_audit(D);
    CHECK(AD.degenerate_simplices == 1);
    CHECK_FALSE(AD.consistent);
}

TEST_CASE("mesh validation rejects malformed input") {
    Triangulation T;
    T.dim = T.ambient = 1;
    T.coords = {0.0, 1.0};
    T.simplices = {0, 2};  // index out of range
    CHECK_THROWS_AS(validate_mesh(T), std::invalid_argument);

    T.simplices = {0, 1};
    T.periods = {1.0, 1.0};  // wrong size
    CHECK_THROWS_AS(validate_mesh(T), std::invalid_argument);

    T.periods = {-1.0};
    CHECK_THROWS_AS(validate_mesh(T), std::invalid_argument);
}

TEST_CASE("json round trip") {
    auto T = flat_torus_grid(3, {2.0, 3.0});
    auto back = mesh_from_json(mesh_to_json(T));
    CHECK(back.dim == T.dim);
    CHECK(back.ambient == T.ambient);
    CHECK(back.coords == T.coords);       // exact: shortest round-trip numerals
    CHECK(back.simplices == T.simplices);
    CHECK(back.periods == T.periods);

    auto S = unit_square_grid(2);
    auto back2 = mesh_from_json(mesh_to_json(S));
    CHECK(back2.periods.empty());
    CHECK(back2.coords == S.coords);

    CHECK_THROWS_AS(mesh_from_json("not json"), std::invalid_argument);
    CHECK_THROWS_AS(mesh_from_json("{\"dim\": 2}"), std::invalid_argument);
    // out-of-range index caught by validation on load
    CHECK_THROWS_AS(mesh_from_json(R"({"dim":1,"ambient_dim":1,"vertices":[[0],[1]],)"
                                   R"("simplices":[[0,5]],"periods":null})"),
                    std::invalid_argument);
}

TEST_CASE("polygon loops") {
    auto P = polygon_loop({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(P.dim == 1);
    CHECK(P.ambient == 2);
    CHECK(P.simplex_count() == 4);
    auto A = orientation_audit(P);
    CHECK(A.consistent);
    CHECK(A.boundary_faces == 0);
    CHECK(A.interior_faces == 4);  // every vertex has one incoming, one outgoing edge

    auto R = regular_polygon(6);
    CHECK(R.vertex_count() == 6);
    CHECK(R.simplex_count() == 6);
    // inscribed in the unit-area disk
    for (int v = 0; v < 6; ++v) {
        auto x = R.vertex(v);
        CHECK(std::hypot(x[0], x[1]) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));
    }
    CHECK_THROWS_AS(polygon_loop({{0, 0}, {1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(regular_polygon(2), std::invalid_argument);
}
