#pragma once

#include <string>

#include "pairquad/cochain.hpp"
#include "pairquad/moyal.hpp"

namespace pairquad {

using ScalarField = std::function<double(std::span<const double>)>;

// Density rule f(x_0) * det(displacements)/n!, the top-degree cochain whose
// signed average over vertex permutations is the vertex-averaged rule.
PairCochain volume_density_cochain(int dim, ScalarField f);

// One-form pairing sum_i a_i(x_rule) (x_1 - x_0)_i on R^dim, sampled at the
// source, the target, or averaged over both endpoints.
PairCochain one_form_cochain(int dim, std::vector<ScalarField> coeffs, EndpointRule rule);

// Oriented solid angle of the spherical triangle spanned by three unit
// directions (inputs are normalized first). Fully antisymmetric; zero on
// repeated corners; antipodal corners have no well-defined triangle and
// throw std::domain_error.
PairCochain solid_angle_cochain();

// Group 2-cocycle (a b' - a' b)/2 on (R^2, +). The bilinear form happens to
// look the same in both chain descriptions, so the tag only affects how the
// operations interpret the slots.
GroupCochain heisenberg_cocycle(ChainDescription description = ChainDescription::composable);

// Pair 2-cochain det[x_1 - x_0, x_2 - x_0]/2 on R^2.
PairCochain area_form_cochain();

// Expression-backed cochains. Pair cochain sources bind variables xK_I
// (slot K in 0..degree, coordinate I in 0..dim-1); scalar fields bind x_I.
PairCochain expr_pair_cochain(int degree, int dim, const std::string& source);
ScalarField expr_scalar_field(int dim, const std::string& source);

}  // namespace pairquad
