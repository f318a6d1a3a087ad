#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pairquad/mesh.hpp"
#include "pairquad/moyal.hpp"

using namespace pairquad;

namespace {

PhaseFunction gauss_window(double w) {
    double beta = 1.0 / (2.0 * w * w);
    return [beta](double q, double p) -> std::complex<double> {
        return std::exp(-beta * (q * q + p * p));
    };
}

PhaseFunction centered_gaussian(double beta) {
    return [beta](double q, double p) -> std::complex<double> {
        return std::exp(-beta * (q * q + p * p));
    };
}

// closed form for centered Gaussians: the product stays Gaussian
std::complex<double> gaussian_star_exact(double b1, double b2, double q, double p, double hbar) {
    double den = 1.0 + hbar * hbar * b1 * b2;
    return std::exp(-(b1 + b2) * (q * q + p * p) / den) / den;
}

}  // namespace

TEST_CASE("windowed constants multiply to one") {
    auto one = gauss_window(6.0);
    auto r = star_product(one, one, 0.0, 0.0);
    CHECK(std::abs(r.value - 1.0) < 1e-3);
    CHECK(std::abs(r.value.imag()) < 1e-6);
    // window bias has its own closed form 1/(1 + hbar^2 beta^2)
    double beta = 1.0 / 72.0;
    CHECK(std::abs(r.value.real() - 1.0 / (1.0 + beta * beta)) < 1e-3);
    CHECK(r.error_estimate > 0.0);
    CHECK(r.error_estimate < 1e-2);
}

TEST_CASE("centered Gaussians multiply in closed form") {
    struct Case {
        double b1, b2, q, p, hbar;
    };
    for (const auto& c : {Case{1.0, 0.5, 0.0, 0.0, 1.0}, Case{1.0, 0.5, 0.3, -0.2, 1.0},
                          Case{0.4, 0.7, -0.5, 0.1, 0.5}}) {
        StarParams params;
        params.hbar = c.hbar;
        auto r = star_product(centered_gaussian(c.b1), centered_gaussian(c.b2), c.q, c.p, params);
        auto exact = gaussian_star_exact(c.b1, c.b2, c.q, c.p, c.hbar);
        CHECK(std::abs(r.value - exact) < 1e-6);
    }
}

TEST_CASE("frequency-space route agrees with the primary route") {
    PhaseFunction f = [](double q, double p) -> std::complex<double> {
        return std::exp(-0.5 * ((q - 0.2) * (q - 0.2) + (p + 0.1) * (p + 0.1)));
    };
    PhaseFunction g = [](double q, double p) -> std::complex<double> {
        return std::exp(-0.3 * ((q + 0.3) * (q + 0.3) + p * p));
    };
    auto primary = star_product(f, g, 0.25, -0.4);
    auto oracle = star_oracle(f, g, 0.25, -0.4, 1.0);
    CHECK(std::abs(primary.value - oracle) / std::abs(primary.value) < 3e-3);

    auto w = gauss_window(6.0);
    auto ow = star_oracle(w, w, 0.0, 0.0, 1.0);
    CHECK(std::abs(ow - 1.0) < 2e-3);
    CHECK(std::abs(ow.imag()) < 1e-9);
}

TEST_CASE("non-decaying inputs are rejected") {
    PhaseFunction flat = [](double, double) -> std::complex<double> { return 1.0; };
    PhaseFunction grow = [](double q, double p) -> std::complex<double> {
        return std::exp(0.1 * (q * q + p * p));
    };
    auto ok = gauss_window(4.0);
    CHECK_THROWS_AS(star_product(flat, ok, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(star_product(ok, grow, 0.0, 0.0), std::domain_error);
}

TEST_CASE("parameter validation") {
    auto w = gauss_window(4.0);
    StarParams p;
    p.hbar = 0.0;
    CHECK_THROWS_AS(star_product(w, w, 0, 0, p), std::invalid_argument);
    p = {};
    p.grid_points = 4;
    CHECK_THROWS_AS(star_product(w, w, 0, 0, p), std::invalid_argument);
    p = {};
    p.ladder = {};
    CHECK_THROWS_AS(star_product(w, w, 0, 0, p), std::invalid_argument);
    p = {};
    p.ladder = {1e-2, -1e-3};
    CHECK_THROWS_AS(star_product(w, w, 0, 0, p), std::invalid_argument);
    p = {};
    p.half_width = 0.0;
    CHECK_THROWS_AS(star_product(w, w, 0, 0, p), std::invalid_argument);

    // a single regulator step is allowed, just less certain
    p = {};
    p.ladder = {5e-3};
    auto r = star_product(w, w, 0, 0, p);
    CHECK(std::abs(r.value - 1.0) < 5e-2);
}

TEST_CASE("loop action rules and signs") {
    std::vector<Vec> ccw = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(loop_action(ccw, EndpointRule::average) == doctest::Approx(-1.0).epsilon(1e-15));
    std::vector<Vec> cw = {{0, 1}, {1, 1}, {1, 0}, {0, 0}};
    CHECK(loop_action(cw, EndpointRule::average) == doctest::Approx(1.0).epsilon(1e-15));

    std::vector<Vec> tri = {{0, 0}, {1, 0}, {0.3, 0.8}};
    CHECK(loop_action(tri, EndpointRule::average) == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(loop_action(tri, EndpointRule::target) == doctest::Approx(-0.56).epsilon(1e-14));
    CHECK(loop_action(tri, EndpointRule::source) == doctest::Approx(-0.24).epsilon(1e-14));

    CHECK_THROWS_AS(loop_action({{0, 0}, {1, 1}}), std::invalid_argument);
}

TEST_CASE("regular polygon action approaches the disk area") {
    auto P = regular_polygon(64);
    std::vector<Vec> loop;
    for (int v = 0; v < P.vertex_count(); ++v) {
        auto x = P.vertex(v);
        loop.push_back({x[0], x[1]});
    }
    double r2 = 1.0 / std::numbers::pi;
    double area = 0.5 * 64 * r2 * std::sin(2.0 * std::numbers::pi / 64);
    CHECK(loop_action(loop, EndpointRule::average) == doctest::Approx(-area).epsilon(1e-13));
    // endpoint bias cancels around a centrally symmetric loop
    CHECK(std::abs(loop_action(loop, EndpointRule::target) -
                   loop_action(loop, EndpointRule::average)) < 1e-12);
}
