#include "pairquad/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace pairquad {

void validate_mesh(const Triangulation& T) {
    if (T.dim < 0 || T.ambient < T.dim || T.ambient == 0)
        throw std::invalid_argument("triangulation has invalid dimensions");
    if (T.coords.size() % T.ambient != 0)
        throw std::invalid_argument("coordinate array size mismatch");
    if (T.simplices.size() % (T.dim + 1) != 0)
        throw std::invalid_argument("simplex array size mismatch");
    int nv = T.vertex_count();
    for (int idx : T.simplices)
        if (idx < 0 || idx >= nv) throw std::invalid_argument("simplex vertex index out of range");
    if (T.periodic()) {
        if (static_cast<int>(T.periods.size()) != T.ambient)
            throw std::invalid_argument("periods size must match ambient dimension");
        for (double p : T.periods)
            if (!(p >= 0.0) || !std::isfinite(p))
                throw std::invalid_argument("periods must be finite and nonnegative");
    }
}

namespace {

// Determinant by Gaussian elimination with partial pivoting.
double det_rowmajor(std::vector<double> a, int n) {
    double sign = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
            sign = -sign;
        }
        double d = a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            double f = a[r * n + col] / d;
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
        }
    }
    double det = sign;
    for (int i = 0; i < n; ++i) det *= a[i * n + i];
    return det;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Sort a small index tuple, returning the sign of the sorting permutation.
int sort_with_sign(std::vector<int>& v) {
    int sign = 1;
    for (std::size_t i = 1; i < v.size(); ++i)
        for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
            std::swap(v[j - 1], v[j]);
            sign = -sign;
        }
    return sign;
}

double norm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

Vec displacement(std::span<const double> a, std::span<const double> b, const Vec& periods) {
    if (a.size() != b.size()) throw std::invalid_argument("displacement: size mismatch");
    Vec d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double x = b[i] - a[i];
        if (!periods.empty() && periods[i] > 0.0) {
            double p = periods[i];
            // shortest representative in (-P/2, P/2], ties toward +P/2
            x -= p * std::ceil(x / p - 0.5);
        }
        d[i] = x;
    }
    return d;
}

Vec displacement(const Triangulation& T, int va, int vb) {
    return displacement(T.vertex(va), T.vertex(vb), T.periods);
}

Vec wrap_point(Vec p, const Vec& periods) {
    if (periods.empty()) return p;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double period = periods[i];
        if (!(period > 0.0)) continue;
        double w = p[i] - period * std::floor(p[i] / period);
        if (w >= period) w = 0.0;  // rounding can land exactly on the period
        p[i] = w;
    }
    return p;
}

double signed_parallelepiped_volume(const std::vector<Vec>& columns) {
    int n = static_cast<int>(columns.size());
    if (n == 0) throw std::invalid_argument("no columns given");
    for (const auto& c : columns)
        if (static_cast<int>(c.size()) != n)
            throw std::invalid_argument("parallelepiped volume needs square data");
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a[r * n + c] = columns[c][r];
    return det_rowmajor(std::move(a), n);
}

double simplex_signed_volume(const std::vector<Vec>& verts) {
    int n = static_cast<int>(verts.size()) - 1;
    if (n < 1) throw std::invalid_argument("simplex needs at least two vertices");
    std::vector<Vec> edges(n);
    for (int i = 0; i < n; ++i) {
        edges[i].resize(verts[0].size());
        for (std::size_t c = 0; c < verts[0].size(); ++c)
            edges[i][c] = verts[i + 1][c] - verts[0][c];
    }
    return signed_parallelepiped_volume(edges) / factorial(n);
}

std::vector<Vec> unwrapped_simplex(const Triangulation& T, int s) {
    auto idx = T.simplex(s);
    std::vector<Vec> out(idx.size());
    auto v0 = T.vertex(idx[0]);
    out[0].assign(v0.begin(), v0.end());
    for (std::size_t i = 1; i < idx.size(); ++i) {
        Vec d = displacement(T, idx[0], idx[i]);
        out[i].resize(T.ambient);
        for (int c = 0; c < T.ambient; ++c) out[i][c] = out[0][c] + d[c];
    }
    return out;
}

double simplex_diameter(const std::vector<Vec>& verts) {
    double d = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < verts[i].size(); ++c) {
                double t = verts[i][c] - verts[j][c];
                s += t * t;
            }
            d = std::max(d, s);
        }
    return std::sqrt(d);
}

double max_diameter(const Triangulation& T) {
    double d = 0.0;
    for (int s = 0; s < T.simplex_count(); ++s)
        d = std::max(d, simplex_diameter(unwrapped_simplex(T, s)));
    return d;
}

MeshAudit orientation_audit(const Triangulation& T, double degeneracy_tol) {
    validate_mesh(T);
    MeshAudit audit;
    int n = T.dim;

    // Face cancellation.
    if (n >= 1) {
        std::map<std::vector<int>, std::pair<int, int>> faces;  // key -> (signed sum, count)
        std::vector<int> face(n);
        for (int s = 0; s < T.simplex_count(); ++s) {
            auto verts = T.simplex(s);
            for (int omit = 0; omit <= n; ++omit) {
                int k = 0;
                for (int i = 0; i <= n; ++i)
                    if (i != omit) face[k++] = verts[i];
                std::vector<int> key = face;
                int sign = sort_with_sign(key) * ((omit % 2 == 0) ? 1 : -1);
                auto& slot = faces[key];
                slot.first += sign;
                slot.second += 1;
            }
        }
        for (const auto& [key, slot] : faces) {
            auto [signed_sum, count] = slot;
            if (count == 1) {
                ++audit.boundary_faces;
            } else if (count % 2 != 0 || signed_sum != 0) {
                ++audit.orientation_violations;
            } else {
                audit.interior_faces += count / 2;
            }
        }
    }

    // Degeneracy and, in full dimension, volume signs.
    int ref_sign = 0;
    for (int s = 0; s < T.simplex_count(); ++s) {
        auto verts = unwrapped_simplex(T, s);
        std::vector<Vec> edges(n);
        double max_edge = 0.0;
        for (int i = 0; i < n; ++i) {
            edges[i].resize(T.ambient);
            for (int c = 0; c < T.ambient; ++c) edges[i][c] = verts[i + 1][c] - verts[0][c];
            max_edge = std::max(max_edge, norm(edges[i]));
        }
        // Gram determinant: (n! * volume)^2 for the embedded simplex.
        std::vector<double> gram(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gram[i * n + j] =
                    std::inner_product(edges[i].begin(), edges[i].end(), edges[j].begin(), 0.0);
        double g = det_rowmajor(std::move(gram), n);
        double scale = std::pow(max_edge, n);
        if (max_edge == 0.0 || std::sqrt(std::max(g, 0.0)) < degeneracy_tol * scale) {
            ++audit.degenerate_simplices;
            continue;
        }
        if (T.dim == T.ambient) {
            double sv = simplex_signed_volume(verts);
            int sign = (sv > 0.0) - (sv < 0.0);
            if (ref_sign == 0)
                ref_sign = sign;
            else if (sign != ref_sign)
                audit.volume_signs_uniform = false;
        }
    }

    audit.consistent = audit.orientation_violations == 0 && audit.degenerate_simplices == 0 &&
                       (T.dim != T.ambient || audit.volume_signs_uniform);
    return audit;
}

namespace {

// Accumulates subdivision output, deduplicating new vertices. A new vertex
// is keyed by the sorted parent-vertex tuple it interpolates; coordinates
// are compared with a tolerance because neighboring parents compute the
// same point through different minimal-image unwrappings.
class SubdivisionBuilder {
  public:
    SubdivisionBuilder(const Triangulation& parent, int children_per_simplex)
        : parent_(parent), tol_(1e-9) {
        out_.dim = parent.dim;
        out_.ambient = parent.ambient;
        out_.periods = parent.periods;
        out_.coords = parent.coords;  // original vertices keep their indices
        out_.simplices.reserve(parent.simplices.size() * children_per_simplex);
        double scale = 1.0;
        for (double c : parent.coords) scale = std::max(scale, std::abs(c));
        for (double p : parent.periods) scale = std::max(scale, p);
        tol_ *= scale;
    }

    int interpolated(std::vector<int> parents, const Vec& unwrapped) {
        Vec w = wrap_point(unwrapped, parent_.periods);
        std::sort(parents.begin(), parents.end());
        auto& bucket = pool_[parents];
        for (const auto& [coords, idx] : bucket) {
            double dist = 0.0;
            for (int c = 0; c < out_.ambient; ++c) {
                double d = coords[c] - w[c];
                if (!parent_.periods.empty() && parent_.periods[c] > 0.0) {
                    double p = parent_.periods[c];
                    d -= p * std::ceil(d / p - 0.5);
                }
                dist = std::max(dist, std::abs(d));
            }
            if (dist <= tol_) return idx;
        }
        int idx = out_.vertex_count();
        out_.coords.insert(out_.coords.end(), w.begin(), w.end());
        bucket.emplace_back(std::move(w), idx);
        return idx;
    }

    void emit(const std::vector<int>& child) {
        out_.simplices.insert(out_.simplices.end(), child.begin(), child.end());
    }

    Triangulation take() { return std::move(out_); }

  private:
    const Triangulation& parent_;
    double tol_;
    Triangulation out_;
    std::map<std::vector<int>, std::vector<std::pair<Vec, int>>> pool_;
};

Vec midpoint(const Vec& a, const Vec& b) {
    Vec m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
    return m;
}

Triangulation subdivide_edgewise(const Triangulation& T) {
    if (T.dim < 1 || T.dim > 3)
        throw std::invalid_argument("edgewise subdivision implemented for dimensions 1..3");
    int children = T.dim == 1 ? 2 : T.dim == 2 ? 4 : 8;
    SubdivisionBuilder b(T, children);

    for (int s = 0; s < T.simplex_count(); ++s) {
        auto idx = T.simplex(s);
        auto w = unwrapped_simplex(T, s);
        auto mid = [&](int i, int j) {
            return b.interpolated({idx[i], idx[j]}, midpoint(w[i], w[j]));
        };
        if (T.dim == 1) {
            int m01 = mid(0, 1);
            b.emit({idx[0], m01});
            b.emit({m01, idx[1]});
        } else if (T.dim == 2) {
            int m01 = mid(0, 1), m02 = mid(0, 2), m12 = mid(1, 2);
            b.emit({idx[0], m01, m02});
            b.emit({m01, idx[1], m12});
            b.emit({m02, m12, idx[2]});
            b.emit({m01, m12, m02});
        } else {
            int m01 = mid(0, 1), m02 = mid(0, 2), m03 = mid(0, 3);
            int m12 = mid(1, 2), m13 = mid(1, 3), m23 = mid(2, 3);
            b.emit({idx[0], m01, m02, m03});
            b.emit({m01, idx[1], m12, m13});
            b.emit({m02, m12, idx[2], m23});
            b.emit({m03, m13, m23, idx[3]});
            // Octahedron around the m02-m13 diagonal, orientations matching
            // the parent (fixed once in reference coordinates; the relation
            // is affine-invariant).
            b.emit({m02, m13, m03, m01});
            b.emit({m02, m13, m23, m03});
            b.emit({m02, m13, m12, m23});
            b.emit({m02, m13, m01, m12});
        }
    }
    return b.take();
}

Triangulation subdivide_barycentric(const Triangulation& T) {
    int n = T.dim;
    double children = factorial(n + 1);
    SubdivisionBuilder b(T, static_cast<int>(children));

    std::vector<int> perm(n + 1);
    for (int s = 0; s < T.simplex_count(); ++s) {
        auto idx = T.simplex(s);
        auto w = unwrapped_simplex(T, s);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<int> sorted = perm;
            int sign = sort_with_sign(sorted);
            std::vector<int> child(n + 1);
            Vec acc(T.ambient, 0.0);
            std::vector<int> members;
            for (int k = 0; k <= n; ++k) {
                members.push_back(idx[perm[k]]);
                for (int c = 0; c < T.ambient; ++c) acc[c] += w[perm[k]][c];
                if (k == 0) {
                    child[k] = idx[perm[0]];
                } else {
                    Vec bary(T.ambient);
                    for (int c = 0; c < T.ambient; ++c) bary[c] = acc[c] / (k + 1);
                    child[k] = b.interpolated(members, bary);
                }
            }
            if (sign < 0) std::swap(child[n], child[n - 1]);
            b.emit(child);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return b.take();
}

}  // namespace

Triangulation subdivide(const Triangulation& T, SubdivisionScheme scheme) {
    validate_mesh(T);
    return scheme == SubdivisionScheme::edgewise ? subdivide_edgewise(T)
                                                 : subdivide_barycentric(T);
}

Triangulation interval_partition(const std::vector<double>& breaks) {
    if (breaks.size() < 2) throw std::invalid_argument("interval needs at least two breakpoints");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
    Triangulation T;
    T.dim = 1;
    T.ambient = 1;
    T.coords = breaks;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        T.simplices.push_back(static_cast<int>(i));
        T.simplices.push_back(static_cast<int>(i + 1));
    }
    return T;
}

Triangulation interval_partition(double a, double b, int cells) {
    if (!(a < b)) throw std::invalid_argument("interval requires a < b");
    if (cells < 1) throw std::invalid_argument("cell count must be positive");
    std::vector<double> breaks(cells + 1);
    for (int i = 0; i <= cells; ++i) breaks[i] = a + (b - a) * (static_cast<double>(i) / cells);
    breaks.back() = b;
    return interval_partition(breaks);
}

Triangulation unit_square_grid(int cells_per_axis) {
    int k = cells_per_axis;
    if (k < 1) throw std::invalid_argument("cell count must be positive");
    Triangulation T;
    T.dim = 2;
    T.ambient = 2;
    auto vid = [k](int i, int j) { return j * (k + 1) + i; };
    for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= k; ++i) {
            T.coords.push_back(static_cast<double>(i) / k);
            T.coords.push_back(static_cast<double>(j) / k);
        }
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) {
            T.simplices.insert(T.simplices.end(),
                               {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            T.simplices.insert(T.simplices.end(),
                               {vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    return T;
}

Triangulation unit_cube_grid(int cells_per_axis) {
    int k = cells_per_axis;
    if (k < 1) throw std::invalid_argument("cell count must be positive");
    Triangulation T;
    T.dim = 3;
    T.ambient = 3;
    auto vid = [k](int i, int j, int l) { return (l * (k + 1) + j) * (k + 1) + i; };
    for (int l = 0; l <= k; ++l)
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i <= k; ++i) {
                T.coords.push_back(static_cast<double>(i) / k);
                T.coords.push_back(static_cast<double>(j) / k);
                T.coords.push_back(static_cast<double>(l) / k);
            }
    // Kuhn decomposition: one tetrahedron per axis permutation, odd ones
    // reoriented by swapping the last two vertices.
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    const int parity[6] = {1, -1, -1, 1, 1, -1};
    for (int l = 0; l < k; ++l)
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                for (int p = 0; p < 6; ++p) {
                    int c[3] = {i, j, l};
                    int tet[4];
                    tet[0] = vid(c[0], c[1], c[2]);
                    for (int step = 0; step < 3; ++step) {
                        ++c[perms[p][step]];
                        tet[step + 1] = vid(c[0], c[1], c[2]);
                    }
                    if (parity[p] < 0) std::swap(tet[2], tet[3]);
                    T.simplices.insert(T.simplices.end(), {tet[0], tet[1], tet[2], tet[3]});
                }
    return T;
}

Triangulation flat_torus_grid(int cells_per_axis, const Vec& periods) {
    int k = cells_per_axis;
    if (k < 3)
        throw std::invalid_argument(
            "torus grid needs at least 3 cells per axis: below that, edges reach "
            "half a period and minimal-image geometry cannot reconstruct the cells");
    if (periods.size() != 2 || !(periods[0] > 0.0) || !(periods[1] > 0.0))
        throw std::invalid_argument("torus needs two positive periods");
    Triangulation T;
    T.dim = 2;
    T.ambient = 2;
    T.periods = periods;
    auto vid = [k](int i, int j) { return (j % k) * k + (i % k); };
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) {
            T.coords.push_back(periods[0] * i / k);
            T.coords.push_back(periods[1] * j / k);
        }
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) {
            T.simplices.insert(T.simplices.end(),
                               {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            T.simplices.insert(T.simplices.end(),
                               {vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    return T;
}

namespace {

void normalize3(double* v) {
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    v[0] /= n;
    v[1] /= n;
    v[2] /= n;
}

}  // namespace

Triangulation icosphere(int levels) {
    if (levels < 0) throw std::invalid_argument("subdivision level must be nonnegative");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<double> verts = {
        -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t, 0, 0, -1, t, 0, 1, t,
        0, -1, -t, 0, 1, -t, t, 0, -1, t, 0, 1, -t, 0, -1, -t, 0, 1,
    };
    for (std::size_t i = 0; i < verts.size(); i += 3) normalize3(&verts[i]);
    std::vector<int> faces = {
        0, 11, 5, 0, 5, 1, 0, 1, 7, 0, 7, 10, 0, 10, 11,
        1, 5, 9, 5, 11, 4, 11, 10, 2, 10, 7, 6, 7, 1, 8,
        3, 9, 4, 3, 4, 2, 3, 2, 6, 3, 6, 8, 3, 8, 9,
        4, 9, 5, 2, 4, 11, 6, 2, 10, 8, 6, 7, 9, 8, 1,
    };

    for (int lvl = 0; lvl < levels; ++lvl) {
        std::map<std::pair<int, int>, int> edge_mid;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = edge_mid.find(key);
            if (it != edge_mid.end()) return it->second;
            double m[3] = {0.5 * (verts[3 * a] + verts[3 * b]),
                           0.5 * (verts[3 * a + 1] + verts[3 * b + 1]),
                           0.5 * (verts[3 * a + 2] + verts[3 * b + 2])};
            normalize3(m);
            int idx = static_cast<int>(verts.size()) / 3;
            verts.insert(verts.end(), {m[0], m[1], m[2]});
            edge_mid.emplace(key, idx);
            return idx;
        };
        std::vector<int> next;
        next.reserve(faces.size() * 4);
        for (std::size_t f = 0; f < faces.size(); f += 3) {
            int v0 = faces[f], v1 = faces[f + 1], v2 = faces[f + 2];
            int a = mid(v0, v1), b = mid(v1, v2), c = mid(v0, v2);
            next.insert(next.end(), {v0, a, c, a, v1, b, c, b, v2, a, b, c});
        }
        faces = std::move(next);
    }

    // Enforce counterclockwise orientation seen from outside the sphere.
    for (std::size_t f = 0; f < faces.size(); f += 3) {
        const double* p0 = &verts[3 * faces[f]];
        const double* p1 = &verts[3 * faces[f + 1]];
        const double* p2 = &verts[3 * faces[f + 2]];
        double e1[3] = {p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
        double e2[3] = {p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]};
        double nx = e1[1] * e2[2] - e1[2] * e2[1];
        double ny = e1[2] * e2[0] - e1[0] * e2[2];
        double nz = e1[0] * e2[1] - e1[1] * e2[0];
        double cx = p0[0] + p1[0] + p2[0];
        double cy = p0[1] + p1[1] + p2[1];
        double cz = p0[2] + p1[2] + p2[2];
        if (nx * cx + ny * cy + nz * cz < 0.0) std::swap(faces[f + 1], faces[f + 2]);
    }

    Triangulation T;
    T.dim = 2;
    T.ambient = 3;
    T.coords = std::move(verts);
    T.simplices = std::move(faces);
    return T;
}

Triangulation polygon_loop(const std::vector<Vec>& points) {
    if (points.size() < 3) throw std::invalid_argument("polygon needs at least 3 points");
    Triangulation T;
    T.dim = 1;
    T.ambient = 2;
    int n = static_cast<int>(points.size());
    for (const auto& p : points) {
        if (p.size() != 2) throw std::invalid_argument("polygon points must be planar");
        T.coords.insert(T.coords.end(), p.begin(), p.end());
    }
    for (int i = 0; i < n; ++i) {
        T.simplices.push_back(i);
        T.simplices.push_back((i + 1) % n);
    }
    return T;
}

Triangulation regular_polygon(int sides) {
    if (sides < 3) throw std::invalid_argument("polygon needs at least 3 sides");
    const double pi = 3.14159265358979323846;
    double r = 1.0 / std::sqrt(pi);  // disk of unit area
    std::vector<Vec> pts(sides);
    for (int i = 0; i < sides; ++i) {
        double th = 2.0 * pi * i / sides;
        pts[i] = {r * std::cos(th), r * std::sin(th)};
    }
    return polygon_loop(pts);
}

}  // namespace pairquad
