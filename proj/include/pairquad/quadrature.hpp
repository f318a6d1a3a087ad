#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pairquad/cochain.hpp"
#include "pairquad/mesh.hpp"

namespace pairquad {

// Pairing of a degree-n pair cochain with an oriented n-mesh: the sum over
// simplices of the cochain on the simplex vertex tuple. Each tuple is
// canonicalized before evaluation: slot 0 is the lexicographically lowest
// vertex (ties by index), the other slots keep their stored order, and the
// sign of that rearrangement multiplies the term. This makes the value
// depend on the mesh geometry and orientation only, not on how simplices
// happen to be stored, and pins where endpoint-biased rules sample.
//
// Terms are accumulated by compensated summation in simplex order, so the
// result is bitwise-reproducible. The parallel version evaluates terms
// concurrently into an indexed buffer and reduces serially in the same
// fixed order: thread count does not change the result.
CochainValue riemann_sum(const PairCochain& W, const Triangulation& T);
CochainValue riemann_sum_serial(const PairCochain& W, const Triangulation& T);

struct RefineOptions {
    SubdivisionScheme scheme = SubdivisionScheme::edgewise;
    int max_levels = 8;      // subdivision rounds after the seed mesh
    double tolerance = 1e-8; // convergence threshold; <= 0 disables early stop
    // When set, errors are measured against this value; otherwise against
    // the previous level's sum.
    std::optional<CochainValue> reference;
};

struct ConvergenceRow {
    int level = 0;
    long long simplices = 0;
    double max_diameter = 0.0;
    CochainValue sum;
    double error = 0.0;           // NaN when undefined (first Cauchy row)
    double order_estimate = 0.0;  // NaN when undefined
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    bool converged = false;
    // Least-squares slope of log error against log max_diameter over the
    // last (up to 8) rows with error above 1e-14; NaN when underdetermined.
    double fitted_order = 0.0;

    // Stable schema:
    // level,simplices,max_diameter,sum_real,sum_imag,error,order_estimate
    // Numbers print as shortest round-trip decimals; undefined fields are
    // empty. Output is bytewise deterministic.
    std::string to_csv() const;
};

ConvergenceReport refine_to_limit(const PairCochain& W, const Triangulation& seed,
                                  const RefineOptions& opts);

// Chain pairing with an explicit closed polygon: sums W over the loop edges
// in traversal order (p_i, p_{i+1 mod N}), with no canonicalization. For
// antisymmetric W this equals riemann_sum over the same loop mesh.
CochainValue loop_sum(const PairCochain& W, const std::vector<Vec>& loop);

}  // namespace pairquad
