#pragma once

#include <vector>

#include "pairquad/cochain.hpp"

namespace pairquad {

// Finite-difference differentiation of cochains at a base point (pair case)
// or at the group identity, in the coordinate chart. Steps below 1e-7 are
// rejected: the difference quotients lose to roundoff before that.
struct VanEstOptions {
    double h = 1e-3;
    bool richardson = true;  // one step of h^2 extrapolation
};

struct VEResult {
    CochainValue value;
    double error_estimate;  // |value(h) - value(h/2)|, before extrapolation
    double h;
};

// Differentiates n! * alt_n(W) by a mixed central difference: slot j is
// displaced from the source along axis axes[j-1]. This is the derivative of
// the cochain along the chosen coordinate frame, one slot at a time.
VEResult ve_common_source(const PairCochain& W, const Vec& x, const std::vector<int>& axes,
                          const VanEstOptions& opts = {});
VEResult ve_common_source(const GroupCochain& W, const std::vector<int>& axes,
                          const VanEstOptions& opts = {});

// Independent formulation: signed sum over permutations of nested one-sided
// chains, slot k displaced from the previous chain point (pair case) or
// each composable slot displaced from the identity (group case). Slot k is
// differentiated along axes[sigma(k)-1].
VEResult ve_nerve_alternating(const PairCochain& W, const Vec& x, const std::vector<int>& axes,
                              const VanEstOptions& opts = {});
VEResult ve_nerve_alternating(const GroupCochain& W, const std::vector<int>& axes,
                              const VanEstOptions& opts = {});

// First-order jet of the cochain at x, evaluated on the simplex
// (x, y_1, ..., y_n): sum over ascending coordinate multi-indices of
// (1/n!) * VE(W)(axes) * det of the displacement submatrix.
CochainValue jet_approximation(const PairCochain& W, const Vec& x, const std::vector<Vec>& ys,
                               const VanEstOptions& opts = {});

struct JetReport {
    std::vector<double> scales;
    std::vector<double> residuals;  // |W(x, x + eps u_1, ...) - jet| per scale
    double slope = 0.0;             // least-squares log-log fit
    bool exact_to_precision = false;
};

// Shrinks the frame by each scale factor and fits the decay rate of the
// residual against the jet. Scales must be strictly decreasing and >= 1e-4;
// the frame must be linearly independent. Residuals at or below 1e-13 count
// as exact; rows below 1e-14 are excluded from the fit (roundoff floor).
JetReport jet_residual_slope(const PairCochain& W, const Vec& x, const std::vector<Vec>& frame,
                             const std::vector<double>& scales,
                             const VanEstOptions& opts = {});

}  // namespace pairquad
