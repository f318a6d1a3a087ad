#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "pairquad/cochain.hpp"

namespace pairquad {

// Phase-space points are (q, p): coordinate 0 is position, 1 is momentum.
using PhaseFunction = std::function<std::complex<double>(double q, double p)>;

// Oscillatory-integral star product on the phase plane, evaluated at one
// point by quadrature over [-L, L]^4 with a Gaussian regulator that is
// extrapolated away.
//
// The kernel is exp(i a [(q''-q)(p'-p) - (p''-p)(q'-q)]) with coupling
// a = 2/hbar and prefactor (a/2pi)^2 = (1/(pi hbar))^2, which normalizes
// windowed constants and gives [q, p] = i hbar in the small-window limit.
struct StarParams {
    double hbar = 1.0;
    double half_width = 8.0;  // integration box half-width L
    int grid_points = 128;    // N samples per axis, endpoints included
    std::vector<double> ladder = {1e-2, 5e-3, 2.5e-3};  // regulator strengths
};

struct StarResult {
    std::complex<double> value;
    // Extrapolation residual plus the change under grid halving.
    double error_estimate = 0.0;
};

// Inputs must decay toward the box boundary: if the largest sample
// magnitude on the boundary reaches 99.9% of the global maximum (constants,
// growing functions), the quadrature cannot see the tails and the call is
// rejected with std::domain_error.
StarResult star_product(const PhaseFunction& f, const PhaseFunction& g, double q, double p,
                        const StarParams& params = {});
StarResult star_product_serial(const PhaseFunction& f, const PhaseFunction& g, double q,
                               double p, const StarParams& params = {});

// Independent check route through frequency space: both inputs are Fourier
// transformed on a fixed position grid, multiplied with the twist phase
// exp(-i hbar sigma(eta, zeta)/2), and transformed back at the evaluation
// point. Shares no grids, no regulator, and no code path with
// star_product; agreement is evidence, not tautology.
struct StarOracleParams {
    double field_half_width = 10.0;  // position-space transform box
    int field_grid_points = 128;
    double freq_half_width = 12.0;   // frequency box; must resolve the inputs
    int freq_grid_points = 160;
};

std::complex<double> star_oracle(const PhaseFunction& f, const PhaseFunction& g, double q,
                                 double p, double hbar, const StarOracleParams& params = {});

// Endpoint sampling for the p dq pairing along a polygon edge.
enum class EndpointRule { source, target, average };

// The action one-form as a degree-1 pair cochain on the phase plane:
// value(z0, z1) = p_rule * (q1 - q0).
PairCochain action_one_form(EndpointRule rule);

// Sum of the p dq cochain over a closed polygon in traversal order.
// With the average rule this telescopes to minus the shoelace area exactly.
double loop_action(const std::vector<Vec>& loop, EndpointRule rule = EndpointRule::average);

}  // namespace pairquad
