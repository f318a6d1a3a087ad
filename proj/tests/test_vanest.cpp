#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pairquad/builtins.hpp"
#include "pairquad/vanest.hpp"

using namespace pairquad;

namespace {

PairCochain trapezoid_sin() {
    PairCochain W;
    W.degree = 1;
    W.point_dim = 1;
    W.eval = [](std::span<const Vec> x) -> CochainValue {
        return 0.5 * (std::sin(x[0][0]) + std::sin(x[1][0])) * (x[1][0] - x[0][0]);
    };
    return W;
}

PairCochain left_sin() {
    PairCochain W;
    W.degree = 1;
    W.point_dim = 1;
    W.eval = [](std::span<const Vec> x) -> CochainValue {
        return std::sin(x[0][0]) * (x[1][0] - x[0][0]);
    };
    return W;
}

}  // namespace

TEST_CASE("differentiating one-dimensional antiderivative cochains") {
    for (double x : {-0.8, 0.3, 1.9}) {
        auto r = ve_common_source(trapezoid_sin(), {x}, {0});
        CHECK(std::abs(r.value - std::sin(x)) < 1e-9);
        CHECK(r.error_estimate < 1e-5);
        auto n = ve_nerve_alternating(trapezoid_sin(), {x}, {0});
        CHECK(std::abs(n.value - std::sin(x)) < 1e-9);
        // the source-sampled rule is affine in the far slot: stencil is exact
        auto l = ve_common_source(left_sin(), {x}, {0});
        CHECK(std::abs(l.value - std::sin(x)) < 1e-11);
    }
}

TEST_CASE("endpoint-averaged action form differentiates to p dq") {
    auto W = action_one_form(EndpointRule::average);
    auto rq = ve_common_source(W, {0.4, 0.7}, {0});
    CHECK(std::abs(rq.value - 0.7) < 1e-10);  // coefficient of dq is p
    auto rp = ve_common_source(W, {0.4, 0.7}, {1});
    CHECK(std::abs(rp.value) < 1e-10);        // no dp component
    auto nq = ve_nerve_alternating(W, {0.4, 0.7}, {0});
    CHECK(std::abs(nq.value - 0.7) < 1e-10);
}

TEST_CASE("bilinear group cocycle differentiates to the symplectic form") {
    for (auto desc : {ChainDescription::composable, ChainDescription::common_source}) {
        auto heis = heisenberg_cocycle(desc);
        auto a = ve_common_source(heis, {0, 1});
        CHECK(std::abs(a.value - 1.0) < 1e-9);
        auto b = ve_nerve_alternating(heis, {0, 1});
        CHECK(std::abs(b.value - 1.0) < 1e-9);
        CHECK(std::abs(a.value - b.value) < 1e-6);
        // frame antisymmetry and degenerate frame
        CHECK(std::abs(ve_common_source(heis, {1, 0}).value + 1.0) < 1e-9);
        CHECK(std::abs(ve_common_source(heis, {0, 0}).value) < 1e-9);
    }
}

TEST_CASE("area cochain differentiates to the area form") {
    auto area = area_form_cochain();
    auto r = ve_common_source(area, {0.3, 0.8}, {0, 1});
    CHECK(std::abs(r.value - 1.0) < 1e-9);
    auto n = ve_nerve_alternating(area, {0.3, 0.8}, {0, 1});
    CHECK(std::abs(n.value - 1.0) < 1e-9);
}

TEST_CASE("both routes agree on a generic density cochain") {
    auto f = [](std::span<const double> x) { return 1.0 + x[0] + x[1] * x[1]; };
    auto W = alt(volume_density_cochain(2, f));
    Vec x0 = {0.2, -0.1};

    VanEstOptions plain;
    plain.richardson = false;
    auto v = ve_common_source(W, x0, {0, 1}, plain);
    CHECK(std::abs(v.value.real() - 1.2100003333333) < 1e-9);  // f(x0) + O(h^2)

    auto r = ve_common_source(W, x0, {0, 1});
    CHECK(std::abs(r.value.real() - 1.21) < 1e-8);             // extrapolation removes h^2

    auto n = ve_nerve_alternating(W, x0, {0, 1});
    CHECK(std::abs(r.value - n.value) < 1e-6);

    // differentiation commutes with full antisymmetrization
    auto raw = ve_common_source(volume_density_cochain(2, f), x0, {0, 1});
    CHECK(std::abs(raw.value - r.value) < 1e-6);
}

TEST_CASE("step validation") {
    VanEstOptions bad;
    bad.h = 1e-8;
    CHECK_THROWS_AS(ve_common_source(trapezoid_sin(), {0.3}, {0}, bad), std::invalid_argument);
    CHECK_THROWS_AS(ve_common_source(trapezoid_sin(), {0.3}, {0, 1}, {}), std::invalid_argument);
    CHECK_THROWS_AS(ve_common_source(trapezoid_sin(), {0.3}, {3}, {}), std::invalid_argument);
}

TEST_CASE("first jet reproduces determinant cochains exactly") {
    auto area = area_form_cochain();
    Vec x = {0.4, -0.2};
    std::vector<Vec> ys = {{0.9, 0.1}, {0.3, 0.6}};
    auto jet = jet_approximation(area, x, ys);
    std::vector<Vec> tuple = {x, ys[0], ys[1]};
    CHECK(std::abs(jet - area.eval(tuple)) < 1e-12);

    auto rep = jet_residual_slope(area, x, {{1.0, 0.3}, {-0.2, 1.0}},
                                  {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});
    CHECK(rep.exact_to_precision);
}

TEST_CASE("jet residual decay rates") {
    std::vector<double> scales;
    for (int k = 3; k <= 8; ++k) scales.push_back(std::pow(2.0, -k));

    // density cochain, fully antisymmetrized: cubic-order remainder
    auto f = [](std::span<const double> x) { return 1.0 + x[0] + x[1] * x[1]; };
    auto W = alt(volume_density_cochain(2, f));
    auto rep = jet_residual_slope(W, {0.2, -0.1}, {{1.0, 0.3}, {-0.2, 1.0}}, scales);
    CHECK_FALSE(rep.exact_to_precision);
    CHECK(rep.slope > 2.5);
    CHECK(rep.slope == doctest::Approx(3.0588736).epsilon(0.05));

    // endpoint-averaged rule in one dimension: quadratic remainder
    auto rep1 = jet_residual_slope(trapezoid_sin(), {0.7}, {{1.0}}, scales);
    CHECK(rep1.slope == doctest::Approx(1.9853640).epsilon(0.05));
    CHECK(rep1.slope > 1.5);

    // source-sampled rule is affine in the far slot: jet is exact
    auto repl = jet_residual_slope(left_sin(), {0.7}, {{1.0}}, scales);
    CHECK(repl.exact_to_precision);
}

TEST_CASE("jet input validation") {
    auto area = area_form_cochain();
    // dependent frame
    CHECK_THROWS_AS(
        jet_residual_slope(area, {0, 0}, {{1.0, 0.3}, {2.0, 0.6}}, {0.1, 0.05}),
        std::invalid_argument);
    // scales must decrease strictly and stay above the roundoff floor
    CHECK_THROWS_AS(
        jet_residual_slope(area, {0, 0}, {{1, 0}, {0, 1}}, {0.1, 0.1}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        jet_residual_slope(area, {0, 0}, {{1, 0}, {0, 1}}, {0.1, 1e-5}),
        std::invalid_argument);
    CHECK_THROWS_AS(jet_residual_slope(area, {0, 0}, {{1, 0}, {0, 1}}, {}),
                    std::invalid_argument);
}
