#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "pairquad/mesh.hpp"

namespace pairquad {

using CochainValue = std::complex<double>;

// Group carrier for group cochains. Elements are coordinate vectors of a
// fixed dimension; the structure maps are plain callables so test groups
// (vector groups, twisted products) stay cheap to define.
struct Group {
    int dim = 1;
    Vec identity;
    std::function<Vec(const Vec&, const Vec&)> multiply;
    std::function<Vec(const Vec&)> invert;
};

Group vector_group(int dim);  // (R^dim, +)

// A degree-n chain can be handed to a cochain in two coordinate systems:
// as n composable arrows (g_1, ..., g_n), or as the n arrows (f_1, ..., f_n)
// radiating from a common source vertex, f_i = g_1 ... g_i.
enum class ChainDescription { composable, common_source };

struct GroupCochain {
    int degree = 1;
    Group group;
    ChainDescription description = ChainDescription::composable;
    std::function<CochainValue(std::span<const Vec>)> eval;  // degree elements

    CochainValue operator()(std::span<const Vec> args) const { return eval(args); }
};

// Cochain on the pair groupoid of a coordinate space: a function of
// (degree + 1) points, slot 0 being the common source vertex.
struct PairCochain {
    int degree = 1;
    int point_dim = 1;
    std::function<CochainValue(std::span<const Vec>)> eval;  // degree + 1 points

    CochainValue operator()(std::span<const Vec> pts) const { return eval(pts); }
};

// Permutation of {0, ..., n} as the image list. Degree-n cochains carry an
// action of the permutations of the n+1 chain vertices.
using Permutation = std::vector<int>;

void validate_permutation(const Permutation& p, int size);
int permutation_sign(const Permutation& p);
std::vector<Permutation> all_permutations(int size);

// Vertex-permutation action. For pair cochains:
//   (sigma . W)(x_0, ..., x_n) = W(x_sigma(0), ..., x_sigma(n)).
// For group cochains in the common-source description, with f_0 = e:
//   (sigma . W)(f_1, ..., f_n) = W(f_sigma(0)^-1 f_sigma(1), ...,
//                                  f_sigma(0)^-1 f_sigma(n)).
// Composable cochains are acted on through the change of description, so
// the action is the vertex permutation in every description. Satisfies
// (sigma tau) . W = sigma . (tau . W) with (sigma tau)(i) = sigma(tau(i)).
PairCochain act(const Permutation& sigma, const PairCochain& W);
GroupCochain act(const Permutation& sigma, const GroupCochain& W);

// Signed symmetrization (1/(n+1)!) sum_sigma sgn(sigma) sigma . W over all
// vertex permutations. Its image is antisymmetric, hence normalized.
PairCochain alt(const PairCochain& W);
GroupCochain alt(const GroupCochain& W);

// Same average restricted to the permutations fixing vertex 0.
PairCochain alt_n(const PairCochain& W);
GroupCochain alt_n(const GroupCochain& W);

// Simplicial coboundary, degree n -> n + 1 (vertex omission, alternating
// signs). For group cochains the faces are taken in the common-source
// description; composable cochains are converted back and forth.
PairCochain coboundary(const PairCochain& W);
GroupCochain coboundary(const GroupCochain& W);

// Change of chain description. to_common_source of a composable cochain
// evaluates it on (f_1, f_1^-1 f_2, ..., f_{n-1}^-1 f_n); to_composable on
// (g_1, g_1 g_2, ..., g_1 ... g_n). Inverse of each other. No-op when the
// cochain is already in the requested description.
GroupCochain to_common_source(const GroupCochain& W);
GroupCochain to_composable(const GroupCochain& W);

// Max over sampled tuples and all vertex transpositions of
// |(sigma . W)(t) + W(t)|  (a transposition must negate the value).
double antisymmetry_defect(const PairCochain& W, const std::vector<std::vector<Vec>>& tuples);
double antisymmetry_defect(const GroupCochain& W, const std::vector<std::vector<Vec>>& tuples);

// Max over sampled tuples and slots of |W(t)| after replacing one arrow by
// an identity (for pair cochains: moving one point onto the source vertex).
double normalization_defect(const PairCochain& W, const std::vector<std::vector<Vec>>& tuples);
double normalization_defect(const GroupCochain& W, const std::vector<std::vector<Vec>>& tuples);

// Deterministic low-discrepancy tuples in [lo, hi]^dim, for property checks.
// `tuple_len` vectors per tuple. The same (count, tuple_len, dim, seed)
// always yields the same tuples.
std::vector<std::vector<Vec>> sample_tuples(int count, int tuple_len, int dim, double lo,
                                            double hi, unsigned seed = 0);

}  // namespace pairquad
