#include "pairquad/quadrature.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pairquad/summation.hpp"

namespace pairquad {

namespace {

constexpr double kFitFloor = 1e-14;
constexpr int kFitWindow = 8;

// Position of the lexicographically smallest vertex (ties by index).
int canonical_slot(const Triangulation& T, std::span<const int> verts) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(verts.size()); ++i) {
        auto a = T.vertex(verts[i]);
        auto b = T.vertex(verts[best]);
        bool smaller = std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
        bool equal = std::equal(a.begin(), a.end(), b.begin());
        if (smaller || (equal && verts[i] < verts[best])) best = i;
    }
    return best;
}

CochainValue canonical_term(const PairCochain& W, const Triangulation& T, int s,
                            std::vector<int>& order, std::vector<Vec>& tuple) {
    auto verts = T.simplex(s);
    int n1 = static_cast<int>(verts.size());
    int head = canonical_slot(T, verts);

    // Move the canonical vertex to slot 0, everything else keeps its stored
    // order; that cycle has sign (-1)^head.
    order.resize(n1);
    order[0] = verts[head];
    int k = 1;
    for (int i = 0; i < n1; ++i)
        if (i != head) order[k++] = verts[i];
    double sign = (head % 2 == 0) ? 1.0 : -1.0;

    tuple.resize(n1);
    auto v0 = T.vertex(order[0]);
    tuple[0].assign(v0.begin(), v0.end());
    for (int i = 1; i < n1; ++i) {
        Vec d = displacement(T, order[0], order[i]);
        tuple[i].resize(T.ambient);
        for (int c = 0; c < T.ambient; ++c) tuple[i][c] = tuple[0][c] + d[c];
    }
    return sign * W.eval(tuple);
}

void check_pairing(const PairCochain& W, const Triangulation& T) {
    validate_mesh(T);
    if (W.degree != T.dim)
        throw std::invalid_argument("cochain degree must match mesh dimension");
    if (W.point_dim != T.ambient)
        throw std::invalid_argument("cochain point dimension must match mesh ambient dimension");
}

}  // namespace

CochainValue riemann_sum(const PairCochain& W, const Triangulation& T) {
    check_pairing(W, T);
    int count = T.simplex_count();
    std::vector<CochainValue> terms(count);
#pragma omp parallel for schedule(static)
    for (int s = 0; s < count; ++s) {
        std::vector<int> order;
        std::vector<Vec> tuple;
        terms[s] = canonical_term(W, T, s, order, tuple);
    }
    ComplexNeumaierSum total;
    for (const auto& t : terms) total.add(t);
    return total.value();
}

CochainValue riemann_sum_serial(const PairCochain& W, const Triangulation& T) {
    check_pairing(W, T);
    ComplexNeumaierSum total;
    std::vector<int> order;
    std::vector<Vec> tuple;
    for (int s = 0; s < T.simplex_count(); ++s)
        total.add(canonical_term(W, T, s, order, tuple));
    return total.value();
}

namespace {

std::string format_field(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string ConvergenceReport::to_csv() const {
    std::string out = "level,simplices,max_diameter,sum_real,sum_imag,error,order_estimate\n";
    for (const auto& r : rows) {
        out += std::to_string(r.level);
        out += ',';
        out += std::to_string(r.simplices);
        out += ',';
        out += format_field(r.max_diameter);
        out += ',';
        out += format_field(r.sum.real());
        out += ',';
        out += format_field(r.sum.imag());
        out += ',';
        out += format_field(r.error);
        out += ',';
        out += format_field(r.order_estimate);
        out += '\n';
    }
    return out;
}

ConvergenceReport refine_to_limit(const PairCochain& W, const Triangulation& seed,
                                  const RefineOptions& opts) {
    if (opts.max_levels < 0) throw std::invalid_argument("negative level count");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ConvergenceReport report;
    Triangulation T = seed;
    for (int level = 0;; ++level) {
        ConvergenceRow row;
        row.level = level;
        row.simplices = T.simplex_count();
        row.max_diameter = max_diameter(T);
        row.sum = riemann_sum(W, T);
        if (opts.reference)
            row.error = std::abs(row.sum - *opts.reference);
        else if (level > 0)
            row.error = std::abs(row.sum - report.rows.back().sum);
        else
            row.error = nan;
        row.order_estimate = nan;
        if (!report.rows.empty()) {
            const auto& prev = report.rows.back();
            if (!std::isnan(prev.error) && !std::isnan(row.error) && prev.error > 0.0 &&
                row.error > 0.0 && prev.max_diameter > row.max_diameter)
                row.order_estimate = std::log(prev.error / row.error) /
                                     std::log(prev.max_diameter / row.max_diameter);
        }
        report.rows.push_back(row);

        bool hit_tolerance =
            opts.tolerance > 0.0 && !std::isnan(row.error) && row.error <= opts.tolerance;
        if (hit_tolerance) {
            report.converged = true;
            break;
        }
        if (level == opts.max_levels) break;
        T = subdivide(T, opts.scheme);
    }

    // Fit the convergence order on the tail of the refinement history.
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : report.rows)
        if (!std::isnan(r.error) && r.error > kFitFloor)
            pts.emplace_back(std::log(r.max_diameter), std::log(r.error));
    if (static_cast<int>(pts.size()) > kFitWindow)
        pts.erase(pts.begin(), pts.end() - kFitWindow);
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double det = pts.size() * sxx - sx * sx;
        report.fitted_order = det > 0.0 ? (pts.size() * sxy - sx * sy) / det : nan;
    } else {
        report.fitted_order = nan;
    }
    return report;
}

CochainValue loop_sum(const PairCochain& W, const std::vector<Vec>& loop) {
    if (W.degree != 1) throw std::invalid_argument("loop pairing needs a degree-1 cochain");
    if (loop.size() < 3) throw std::invalid_argument("loop needs at least 3 points");
    for (const auto& p : loop)
        if (static_cast<int>(p.size()) != W.point_dim)
            throw std::invalid_argument("loop point has wrong dimension");
    ComplexNeumaierSum total;
    std::vector<Vec> edge(2);
    for (std::size_t i = 0; i < loop.size(); ++i) {
        edge[0] = loop[i];
        edge[1] = loop[(i + 1) % loop.size()];
        total.add(W.eval(edge));
    }
    return total.value();
}

}  // namespace pairquad
