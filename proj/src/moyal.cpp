#include "pairquad/moyal.hpp"

#include <cmath>
#include <stdexcept>

#include "pairquad/quadrature.hpp"
#include "pairquad/summation.hpp"

namespace pairquad {

namespace {

using cplx = std::complex<double>;
using CMat = std::vector<cplx>;  // row-major

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryRatio = 0.999;

// C[n x k] = A[n x m] * B[m x k]
void matmul(const CMat& A, const CMat& B, CMat& C, int n, int m, int k, bool parallel) {
    C.assign(static_cast<std::size_t>(n) * k, cplx(0.0));
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
        cplx* crow = &C[static_cast<std::size_t>(i) * k];
        const cplx* arow = &A[static_cast<std::size_t>(i) * m];
        for (int l = 0; l < m; ++l) {
            cplx a = arow[l];
            const cplx* brow = &B[static_cast<std::size_t>(l) * k];
            for (int j = 0; j < k; ++j) crow[j] += a * brow[j];
        }
    }
}

// C[n x k] = A[n x m] * B^T, B is [k x m]
void matmul_bt(const CMat& A, const CMat& B, CMat& C, int n, int m, int k, bool parallel) {
    C.assign(static_cast<std::size_t>(n) * k, cplx(0.0));
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
        cplx* crow = &C[static_cast<std::size_t>(i) * k];
        const cplx* arow = &A[static_cast<std::size_t>(i) * m];
        for (int j = 0; j < k; ++j) {
            const cplx* brow = &B[static_cast<std::size_t>(j) * m];
            cplx acc = 0.0;
            for (int l = 0; l < m; ++l) acc += arow[l] * brow[l];
            crow[j] = acc;
        }
    }
}

std::vector<double> axis_points(double half_width, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = -half_width + 2.0 * half_width * (static_cast<double>(i) / (n - 1));
    return x;
}

std::vector<double> trapezoid_weights(int n) {
    std::vector<double> w(n, 1.0);
    w.front() = w.back() = 0.5;
    return w;
}

CMat sample_grid(const PhaseFunction& f, const std::vector<double>& x) {
    int n = static_cast<int>(x.size());
    CMat g(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx v = f(x[a], x[b]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::domain_error("input function returned a non-finite value");
            g[static_cast<std::size_t>(a) * n + b] = v;
        }
    return g;
}

void check_decay(const CMat& g, int n, const char* which) {
    double global = 0.0, boundary = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double m = std::abs(g[static_cast<std::size_t>(a) * n + b]);
            global = std::max(global, m);
            if (a == 0 || b == 0 || a == n - 1 || b == n - 1)
                boundary = std::max(boundary, m);
        }
    if (global > 0.0 && boundary >= kBoundaryRatio * global)
        throw std::domain_error(
            std::string(which) +
            " does not decay inside the integration box: boundary samples are as large "
            "as the interior; enlarge half_width or window the input");
}

struct StarWorkspace {
    int n = 0;
    double dx = 0.0;
    std::vector<double> x;
    std::vector<double> wt;
    CMat fgrid, ggrid;  // raw samples
    CMat m1, m2;        // oscillatory kernels, regulator-independent
};

StarWorkspace prepare(const PhaseFunction& f, const PhaseFunction& g, double q0, double p0,
                      const StarParams& sp, int n) {
    StarWorkspace w;
    w.n = n;
    w.x = axis_points(sp.half_width, n);
    w.wt = trapezoid_weights(n);
    w.dx = w.x[1] - w.x[0];
    w.fgrid = sample_grid(f, w.x);
    w.ggrid = sample_grid(g, w.x);
    check_decay(w.fgrid, n, "f");
    check_decay(w.ggrid, n, "g");

    double a = 2.0 / sp.hbar;
    w.m1.resize(static_cast<std::size_t>(n) * n);
    w.m2.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // displaced coordinates relative to the evaluation point; note the
            // two kernels index opposite axes: m1[q'', p'], m2[p'', q']
            double qi = w.x[i] - q0, pj = w.x[j] - p0;
            w.m1[static_cast<std::size_t>(i) * n + j] = std::polar(1.0, a * qi * pj);
            double pi_ = w.x[i] - p0, qj = w.x[j] - q0;
            w.m2[static_cast<std::size_t>(i) * n + j] = std::polar(1.0, -a * pi_ * qj);
        }
    return w;
}

cplx star_once(const StarWorkspace& w, double hbar, double eps, bool parallel) {
    int n = w.n;
    CMat F(w.fgrid.size()), G(w.ggrid.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double reg = std::exp(-eps * (w.x[a] * w.x[a] + w.x[b] * w.x[b]));
            double wgt = w.wt[a] * w.wt[b] * reg;
            std::size_t i = static_cast<std::size_t>(a) * n + b;
            F[i] = w.fgrid[i] * wgt;
            G[i] = w.ggrid[i] * wgt;
        }

    CMat t1, inner;
    matmul_bt(G, w.m1, t1, n, n, n, parallel);  // t1[q', q''] = sum_p' G m1
    matmul(w.m2, t1, inner, n, n, n, parallel); // inner[p'', q'']

    // Fixed-order compensated reduction over (p'', q'').
    ComplexNeumaierSum s;
    for (int pp = 0; pp < n; ++pp)
        for (int qq = 0; qq < n; ++qq)
            s.add(inner[static_cast<std::size_t>(pp) * n + qq] *
                  F[static_cast<std::size_t>(qq) * n + pp]);
    double coupling = 2.0 / hbar;
    double pref = coupling / (2.0 * kPi);
    return s.value() * (pref * pref) * (w.dx * w.dx * w.dx * w.dx);
}

// Polynomial extrapolation of the regulator ladder to eps = 0.
cplx neville_at_zero(const std::vector<double>& xs, const std::vector<cplx>& ys) {
    std::vector<cplx> t = ys;
    int m = static_cast<int>(xs.size());
    for (int k = 1; k < m; ++k)
        for (int i = 0; i + k < m; ++i)
            t[i] = (-xs[i + k] * t[i] + xs[i] * t[i + 1]) / (xs[i] - xs[i + k]);
    return t[0];
}

std::pair<cplx, double> extrapolate_ladder(const StarWorkspace& w, const StarParams& sp,
                                           bool parallel) {
    std::vector<cplx> vals;
    for (double eps : sp.ladder) vals.push_back(star_once(w, sp.hbar, eps, parallel));
    if (vals.size() == 1) return {vals[0], 0.0};
    cplx full = neville_at_zero(sp.ladder, vals);
    std::vector<double> head_x(sp.ladder.begin(), sp.ladder.end() - 1);
    std::vector<cplx> head_y(vals.begin(), vals.end() - 1);
    cplx prev = neville_at_zero(head_x, head_y);
    return {full, std::abs(full - prev)};
}

void check_params(const StarParams& sp) {
    if (!(sp.hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    if (!(sp.half_width > 0.0)) throw std::invalid_argument("half_width must be positive");
    if (sp.grid_points < 8) throw std::invalid_argument("need at least 8 grid points per axis");
    if (sp.ladder.empty()) throw std::invalid_argument("regulator ladder is empty");
    for (std::size_t i = 0; i < sp.ladder.size(); ++i) {
        if (!(sp.ladder[i] > 0.0))
            throw std::invalid_argument("regulator strengths must be positive");
        if (i > 0 && !(sp.ladder[i] < sp.ladder[i - 1]))
            throw std::invalid_argument("regulator ladder must be strictly decreasing");
    }
}

StarResult star_impl(const PhaseFunction& f, const PhaseFunction& g, double q0, double p0,
                     const StarParams& sp, bool parallel) {
    check_params(sp);
    StarWorkspace full = prepare(f, g, q0, p0, sp, sp.grid_points);
    auto [value, ladder_err] = extrapolate_ladder(full, sp, parallel);

    int half_n = std::max(8, sp.grid_points / 2);
    StarWorkspace half = prepare(f, g, q0, p0, sp, half_n);
    auto [coarse, coarse_err] = extrapolate_ladder(half, sp, parallel);
    (void)coarse_err;

    StarResult r;
    r.value = value;
    r.error_estimate = ladder_err + std::abs(value - coarse);
    return r;
}

}  // namespace

StarResult star_product(const PhaseFunction& f, const PhaseFunction& g, double q, double p,
                        const StarParams& params) {
    return star_impl(f, g, q, p, params, true);
}

StarResult star_product_serial(const PhaseFunction& f, const PhaseFunction& g, double q,
                               double p, const StarParams& params) {
    return star_impl(f, g, q, p, params, false);
}

std::complex<double> star_oracle(const PhaseFunction& f, const PhaseFunction& g, double q,
                                 double p, double hbar, const StarOracleParams& params) {
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    int nf = params.field_grid_points, nw = params.freq_grid_points;
    if (nf < 8 || nw < 8) throw std::invalid_argument("oracle grids too small");
    if (!(params.field_half_width > 0.0) || !(params.freq_half_width > 0.0))
        throw std::invalid_argument("oracle windows must be positive");

    auto x = axis_points(params.field_half_width, nf);
    auto wx = trapezoid_weights(nf);
    double dx = x[1] - x[0];
    auto eta = axis_points(params.freq_half_width, nw);
    auto we = trapezoid_weights(nw);
    double de = eta[1] - eta[0];

    // Weighted samples, then discrete transforms Fh = E F E^T dx^2.
    CMat F = sample_grid(f, x), G = sample_grid(g, x);
    for (int a = 0; a < nf; ++a)
        for (int b = 0; b < nf; ++b) {
            std::size_t i = static_cast<std::size_t>(a) * nf + b;
            F[i] *= wx[a] * wx[b];
            G[i] *= wx[a] * wx[b];
        }
    CMat E(static_cast<std::size_t>(nw) * nf);
    for (int k = 0; k < nw; ++k)
        for (int a = 0; a < nf; ++a)
            E[static_cast<std::size_t>(k) * nf + a] = std::polar(1.0, -eta[k] * x[a]);

    CMat tmp, Fh, Gh;
    matmul(E, F, tmp, nw, nf, nf, false);
    matmul_bt(tmp, E, Fh, nw, nf, nw, false);
    matmul(E, G, tmp, nw, nf, nf, false);
    matmul_bt(tmp, E, Gh, nw, nf, nw, false);
    for (auto& v : Fh) v *= dx * dx;
    for (auto& v : Gh) v *= dx * dx;

    // Evaluation-point phases and frequency weights.
    for (int k = 0; k < nw; ++k)
        for (int l = 0; l < nw; ++l) {
            cplx ph = std::polar(1.0, eta[k] * q + eta[l] * p);
            std::size_t i = static_cast<std::size_t>(k) * nw + l;
            Fh[i] *= ph * (we[k] * we[l]);
            Gh[i] *= ph * (we[k] * we[l]);
        }

    // Twist phases: A[k,n] = exp(-i hbar eta_k eta_n / 2), B = conj pattern.
    CMat A(static_cast<std::size_t>(nw) * nw), B(static_cast<std::size_t>(nw) * nw);
    for (int k = 0; k < nw; ++k)
        for (int l = 0; l < nw; ++l) {
            double phase = 0.5 * hbar * eta[k] * eta[l];
            A[static_cast<std::size_t>(k) * nw + l] = std::polar(1.0, -phase);
            B[static_cast<std::size_t>(k) * nw + l] = std::polar(1.0, phase);
        }

    CMat H, J;
    matmul_bt(Gh, A, H, nw, nw, nw, false);  // H[m, k]
    matmul(B, H, J, nw, nw, nw, false);      // J[l, k]
    ComplexNeumaierSum s;
    for (int k = 0; k < nw; ++k)
        for (int l = 0; l < nw; ++l)
            s.add(Fh[static_cast<std::size_t>(k) * nw + l] *
                  J[static_cast<std::size_t>(l) * nw + k]);
    double fourpi = (2.0 * kPi) * (2.0 * kPi);
    return s.value() * (de * de * de * de) / (fourpi * fourpi);
}

PairCochain action_one_form(EndpointRule rule) {
    PairCochain W;
    W.degree = 1;
    W.point_dim = 2;
    W.eval = [rule](std::span<const Vec> z) -> CochainValue {
        double dq = z[1][0] - z[0][0];
        switch (rule) {
            case EndpointRule::source: return z[0][1] * dq;
            case EndpointRule::target: return z[1][1] * dq;
            case EndpointRule::average: return 0.5 * (z[0][1] + z[1][1]) * dq;
        }
        return 0.0;
    };
    return W;
}

double loop_action(const std::vector<Vec>& loop, EndpointRule rule) {
    return loop_sum(action_one_form(rule), loop).real();
}

}  // namespace pairquad
