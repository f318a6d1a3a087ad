#include "pairquad/vanest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pairquad {

namespace {

constexpr double kMinStep = 1e-7;
constexpr double kExactThreshold = 1e-13;
constexpr double kFitFloor = 1e-14;
constexpr double kMinScale = 1e-4;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void check_step(double h) {
    if (!(h >= kMinStep))
        throw std::invalid_argument("finite-difference step below 1e-7 rejected");
}

void check_axes(const std::vector<int>& axes, int degree, int dim) {
    if (static_cast<int>(axes.size()) != degree)
        throw std::invalid_argument("need one axis per cochain slot");
    for (int a : axes)
        if (a < 0 || a >= dim) throw std::invalid_argument("axis index out of range");
}

// Mixed central difference: slot j displaced from the base along axes[j-1].
CochainValue mixed_difference_pair(const PairCochain& A, const Vec& x,
                                   const std::vector<int>& axes, double h) {
    int n = A.degree;
    std::vector<Vec> tup(n + 1, x);
    CochainValue acc = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double sign = 1.0;
        for (int j = 0; j < n; ++j) {
            double s = (mask >> j) & 1 ? 1.0 : -1.0;
            tup[j + 1] = x;
            tup[j + 1][axes[j]] += s * h;
            sign *= s;
        }
        acc += sign * A.eval(tup);
    }
    return acc / std::pow(2.0 * h, n);
}

CochainValue mixed_difference_group(const GroupCochain& A, const std::vector<int>& axes,
                                    double h) {
    int n = A.degree;
    std::vector<Vec> tup(n, A.group.identity);
    CochainValue acc = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double sign = 1.0;
        for (int j = 0; j < n; ++j) {
            double s = (mask >> j) & 1 ? 1.0 : -1.0;
            tup[j] = A.group.identity;
            tup[j][axes[j]] += s * h;
            sign *= s;
        }
        acc += sign * A.eval(tup);
    }
    return acc / std::pow(2.0 * h, n);
}

VEResult assemble(CochainValue vh, CochainValue vh2, double h, bool richardson) {
    VEResult r;
    r.h = h;
    r.error_estimate = std::abs(vh - vh2);
    r.value = richardson ? (4.0 * vh2 - vh) / 3.0 : vh;
    return r;
}

// Nested chain stencil: point k displaced from point k-1. Expanding the
// recursion gives cumulative displacements with a product of signs.
CochainValue chain_stencil_pair(const PairCochain& W, const Vec& x,
                                const std::vector<int>& slot_axes, double h) {
    int n = W.degree;
    std::vector<Vec> tup(n + 1);
    tup[0] = x;
    CochainValue acc = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double sign = 1.0;
        Vec cur = x;
        for (int k = 0; k < n; ++k) {
            double s = (mask >> k) & 1 ? 1.0 : -1.0;
            cur[slot_axes[k]] += s * h;
            tup[k + 1] = cur;
            sign *= s;
        }
        acc += sign * W.eval(tup);
    }
    return acc / std::pow(2.0 * h, n);
}

CochainValue nerve_alternating_value_pair(const PairCochain& W, const Vec& x,
                                          const std::vector<int>& axes, double h) {
    int n = W.degree;
    CochainValue acc = 0.0;
    std::vector<int> slot_axes(n);
    for (const auto& sigma : all_permutations(n)) {
        for (int k = 0; k < n; ++k) slot_axes[k] = axes[sigma[k]];
        acc += static_cast<double>(permutation_sign(sigma)) *
               chain_stencil_pair(W, x, slot_axes, h);
    }
    return acc;
}

CochainValue nerve_alternating_value_group(const GroupCochain& W, const std::vector<int>& axes,
                                           double h) {
    int n = W.degree;
    CochainValue acc = 0.0;
    std::vector<int> slot_axes(n);
    for (const auto& sigma : all_permutations(n)) {
        for (int k = 0; k < n; ++k) slot_axes[k] = axes[sigma[k]];
        acc += static_cast<double>(permutation_sign(sigma)) *
               mixed_difference_group(W, slot_axes, h);
    }
    return acc;
}

}  // namespace

VEResult ve_common_source(const PairCochain& W, const Vec& x, const std::vector<int>& axes,
                          const VanEstOptions& opts) {
    check_step(opts.h);
    check_axes(axes, W.degree, W.point_dim);
    if (static_cast<int>(x.size()) != W.point_dim)
        throw std::invalid_argument("base point has wrong dimension");
    PairCochain A = alt_n(W);
    double nf = factorial(W.degree);
    CochainValue vh = nf * mixed_difference_pair(A, x, axes, opts.h);
    CochainValue vh2 = nf * mixed_difference_pair(A, x, axes, opts.h / 2.0);
    return assemble(vh, vh2, opts.h, opts.richardson);
}

VEResult ve_common_source(const GroupCochain& W, const std::vector<int>& axes,
                          const VanEstOptions& opts) {
    check_step(opts.h);
    check_axes(axes, W.degree, W.group.dim);
    GroupCochain A = alt_n(to_common_source(W));
    double nf = factorial(W.degree);
    CochainValue vh = nf * mixed_difference_group(A, axes, opts.h);
    CochainValue vh2 = nf * mixed_difference_group(A, axes, opts.h / 2.0);
    return assemble(vh, vh2, opts.h, opts.richardson);
}

VEResult ve_nerve_alternating(const PairCochain& W, const Vec& x, const std::vector<int>& axes,
                              const VanEstOptions& opts) {
    check_step(opts.h);
    check_axes(axes, W.degree, W.point_dim);
    if (static_cast<int>(x.size()) != W.point_dim)
        throw std::invalid_argument("base point has wrong dimension");
    CochainValue vh = nerve_alternating_value_pair(W, x, axes, opts.h);
    CochainValue vh2 = nerve_alternating_value_pair(W, x, axes, opts.h / 2.0);
    return assemble(vh, vh2, opts.h, opts.richardson);
}

VEResult ve_nerve_alternating(const GroupCochain& W, const std::vector<int>& axes,
                              const VanEstOptions& opts) {
    check_step(opts.h);
    check_axes(axes, W.degree, W.group.dim);
    GroupCochain C = to_composable(W);
    CochainValue vh = nerve_alternating_value_group(C, axes, opts.h);
    CochainValue vh2 = nerve_alternating_value_group(C, axes, opts.h / 2.0);
    return assemble(vh, vh2, opts.h, opts.richardson);
}

namespace {

std::vector<std::vector<int>> ascending_multi_indices(int m, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        out.push_back(idx);
        int i = n - 1;
        while (i >= 0 && idx[i] == m - n + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

struct JetCoefficients {
    std::vector<std::vector<int>> indices;
    std::vector<CochainValue> values;
    int degree;
};

JetCoefficients jet_coefficients(const PairCochain& W, const Vec& x,
                                 const VanEstOptions& opts) {
    int n = W.degree, m = W.point_dim;
    if (m < n) throw std::invalid_argument("point dimension below cochain degree");
    JetCoefficients jc;
    jc.degree = n;
    jc.indices = ascending_multi_indices(m, n);
    for (const auto& I : jc.indices) jc.values.push_back(ve_common_source(W, x, I, opts).value);
    return jc;
}

CochainValue jet_eval(const JetCoefficients& jc, const std::vector<Vec>& displacements) {
    int n = jc.degree;
    double nf = factorial(n);
    CochainValue acc = 0.0;
    std::vector<Vec> sub(n, Vec(n));
    for (std::size_t t = 0; t < jc.indices.size(); ++t) {
        const auto& I = jc.indices[t];
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row) sub[col][row] = displacements[col][I[row]];
        acc += jc.values[t] * (signed_parallelepiped_volume(sub) / nf);
    }
    return acc;
}

void check_frame(const std::vector<Vec>& frame, int n, int m) {
    if (static_cast<int>(frame.size()) != n)
        throw std::invalid_argument("need one frame vector per cochain slot");
    for (const auto& u : frame)
        if (static_cast<int>(u.size()) != m)
            throw std::invalid_argument("frame vector has wrong dimension");
    std::vector<Vec> gram(n, Vec(n));
    double scale = 1.0;
    for (int i = 0; i < n; ++i) {
        double ni = std::inner_product(frame[i].begin(), frame[i].end(), frame[i].begin(), 0.0);
        scale *= ni;
        for (int j = 0; j < n; ++j)
            gram[i][j] =
                std::inner_product(frame[i].begin(), frame[i].end(), frame[j].begin(), 0.0);
    }
    if (scale == 0.0 || signed_parallelepiped_volume(gram) < 1e-12 * scale)
        throw std::invalid_argument("frame is degenerate");
}

}  // namespace

CochainValue jet_approximation(const PairCochain& W, const Vec& x, const std::vector<Vec>& ys,
                               const VanEstOptions& opts) {
    if (static_cast<int>(ys.size()) != W.degree)
        throw std::invalid_argument("need one target point per cochain slot");
    if (static_cast<int>(x.size()) != W.point_dim)
        throw std::invalid_argument("base point has wrong dimension");
    std::vector<Vec> disp(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) {
        if (static_cast<int>(ys[j].size()) != W.point_dim)
            throw std::invalid_argument("target point has wrong dimension");
        disp[j].resize(x.size());
        for (std::size_t c = 0; c < x.size(); ++c) disp[j][c] = ys[j][c] - x[c];
    }
    return jet_eval(jet_coefficients(W, x, opts), disp);
}

JetReport jet_residual_slope(const PairCochain& W, const Vec& x, const std::vector<Vec>& frame,
                             const std::vector<double>& scales, const VanEstOptions& opts) {
    int n = W.degree, m = W.point_dim;
    if (static_cast<int>(x.size()) != m)
        throw std::invalid_argument("base point has wrong dimension");
    check_frame(frame, n, m);
    if (scales.empty()) throw std::invalid_argument("no scales given");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] >= kMinScale))
            throw std::invalid_argument("scales below 1e-4 rejected");
        if (i > 0 && !(scales[i] < scales[i - 1]))
            throw std::invalid_argument("scales must be strictly decreasing");
    }

    JetCoefficients jc = jet_coefficients(W, x, opts);
    JetReport report;
    report.scales = scales;
    std::vector<Vec> tup(n + 1, x);
    std::vector<Vec> disp(n, Vec(m));
    for (double eps : scales) {
        for (int j = 0; j < n; ++j)
            for (int c = 0; c < m; ++c) {
                disp[j][c] = eps * frame[j][c];
                tup[j + 1][c] = x[c] + disp[j][c];
            }
        report.residuals.push_back(std::abs(W.eval(tup) - jet_eval(jc, disp)));
    }

    report.exact_to_precision =
        std::all_of(report.residuals.begin(), report.residuals.end(),
                    [](double r) { return r <= kExactThreshold; });

    // Log-log least squares over rows above the roundoff floor.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (report.residuals[i] <= kFitFloor) continue;
        double lx = std::log(scales[i]), ly = std::log(report.residuals[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count >= 2 && sxx * count - sx * sx > 0.0)
        report.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    else
        report.slope = std::numeric_limits<double>::quiet_NaN();
    return report;
}

}  // namespace pairquad
