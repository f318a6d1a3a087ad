#include "pairquad/builtins.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "pairquad/exprlang.hpp"

namespace pairquad {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

PairCochain volume_density_cochain(int dim, ScalarField f) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    PairCochain W;
    W.degree = dim;
    W.point_dim = dim;
    W.eval = [dim, f = std::move(f), nf = factorial(dim)](std::span<const Vec> pts) {
        std::vector<Vec> cols(dim, Vec(dim));
        for (int j = 0; j < dim; ++j)
            for (int c = 0; c < dim; ++c) cols[j][c] = pts[j + 1][c] - pts[0][c];
        return CochainValue(f(pts[0]) * signed_parallelepiped_volume(cols) / nf);
    };
    return W;
}

PairCochain one_form_cochain(int dim, std::vector<ScalarField> coeffs, EndpointRule rule) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    if (static_cast<int>(coeffs.size()) != dim)
        throw std::invalid_argument("need one coefficient per coordinate");
    PairCochain W;
    W.degree = 1;
    W.point_dim = dim;
    W.eval = [dim, coeffs = std::move(coeffs), rule](std::span<const Vec> pts) {
        double acc = 0.0;
        for (int i = 0; i < dim; ++i) {
            double a;
            switch (rule) {
                case EndpointRule::source: a = coeffs[i](pts[0]); break;
                case EndpointRule::target: a = coeffs[i](pts[1]); break;
                default: a = 0.5 * (coeffs[i](pts[0]) + coeffs[i](pts[1]));
            }
            acc += a * (pts[1][i] - pts[0][i]);
        }
        return CochainValue(acc);
    };
    return W;
}

namespace {

void unit3(const Vec& in, double* u) {
    double n = std::sqrt(in[0] * in[0] + in[1] * in[1] + in[2] * in[2]);
    if (!(n > 0.0)) throw std::domain_error("zero vector has no direction");
    u[0] = in[0] / n;
    u[1] = in[1] / n;
    u[2] = in[2] / n;
}

}  // namespace

PairCochain solid_angle_cochain() {
    PairCochain W;
    W.degree = 2;
    W.point_dim = 3;
    W.eval = [](std::span<const Vec> pts) -> CochainValue {
        double a[3], b[3], c[3];
        unit3(pts[0], a);
        unit3(pts[1], b);
        unit3(pts[2], c);
        double triple = a[0] * (b[1] * c[2] - b[2] * c[1]) -
                        a[1] * (b[0] * c[2] - b[2] * c[0]) +
                        a[2] * (b[0] * c[1] - b[1] * c[0]);
        double ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        double bc = b[0] * c[0] + b[1] * c[1] + b[2] * c[2];
        double ca = c[0] * a[0] + c[1] * a[1] + c[2] * a[2];
        double denom = 1.0 + ab + bc + ca;
        if (std::abs(denom) < 1e-12 && std::abs(triple) < 1e-12)
            throw std::domain_error(
                "solid angle undefined: triangle has antipodal corners");
        return CochainValue(2.0 * std::atan2(triple, denom));
    };
    return W;
}

GroupCochain heisenberg_cocycle(ChainDescription description) {
    GroupCochain W;
    W.degree = 2;
    W.group = vector_group(2);
    W.description = description;
    W.eval = [](std::span<const Vec> g) {
        return CochainValue(0.5 * (g[0][0] * g[1][1] - g[1][0] * g[0][1]));
    };
    return W;
}

PairCochain area_form_cochain() {
    PairCochain W;
    W.degree = 2;
    W.point_dim = 2;
    W.eval = [](std::span<const Vec> pts) {
        double u0 = pts[1][0] - pts[0][0], u1 = pts[1][1] - pts[0][1];
        double v0 = pts[2][0] - pts[0][0], v1 = pts[2][1] - pts[0][1];
        return CochainValue(0.5 * (u0 * v1 - u1 * v0));
    };
    return W;
}

namespace {

// Parses "x<slot>_<coord>"; returns false if the name has another shape.
bool parse_slot_var(const std::string& name, int& slot, int& coord) {
    if (name.size() < 4 || name[0] != 'x') return false;
    std::size_t us = name.find('_');
    if (us == std::string::npos || us == 1 || us + 1 >= name.size()) return false;
    for (std::size_t i = 1; i < name.size(); ++i)
        if (i != us && !std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    slot = std::stoi(name.substr(1, us - 1));
    coord = std::stoi(name.substr(us + 1));
    return true;
}

bool parse_coord_var(const std::string& name, int& coord) {
    if (name.size() < 3 || name.compare(0, 2, "x_") != 0) return false;
    for (std::size_t i = 2; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    coord = std::stoi(name.substr(2));
    return true;
}

}  // namespace

PairCochain expr_pair_cochain(int degree, int dim, const std::string& source) {
    if (degree < 1 || dim < 1) throw std::invalid_argument("bad cochain shape");
    Expr e = parse(source);
    // Pre-resolve every variable to (slot, coord) so malformed names fail now.
    std::vector<std::tuple<std::string, int, int>> binds;
    for (const auto& name : variables(e)) {
        int slot, coord;
        if (!parse_slot_var(name, slot, coord))
            throw std::invalid_argument("cochain expressions bind xK_I variables; got '" +
                                        name + "'");
        if (slot < 0 || slot > degree)
            throw std::invalid_argument("slot out of range in '" + name + "'");
        if (coord < 0 || coord >= dim)
            throw std::invalid_argument("coordinate out of range in '" + name + "'");
        binds.emplace_back(name, slot, coord);
    }
    PairCochain W;
    W.degree = degree;
    W.point_dim = dim;
    W.eval = [e, binds](std::span<const Vec> pts) {
        auto resolver = [&](std::string_view name) -> std::optional<double> {
            for (const auto& [n, slot, coord] : binds)
                if (n == name) return pts[slot][coord];
            return std::nullopt;
        };
        return CochainValue(eval(e, resolver));
    };
    return W;
}

ScalarField expr_scalar_field(int dim, const std::string& source) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    Expr e = parse(source);
    std::vector<std::pair<std::string, int>> binds;
    for (const auto& name : variables(e)) {
        int coord;
        if (!parse_coord_var(name, coord))
            throw std::invalid_argument("point functions bind x_I variables; got '" + name +
                                        "'");
        if (coord < 0 || coord >= dim)
            throw std::invalid_argument("coordinate out of range in '" + name + "'");
        binds.emplace_back(name, coord);
    }
    return [e, binds](std::span<const double> x) {
        auto resolver = [&](std::string_view name) -> std::optional<double> {
            for (const auto& [n, coord] : binds)
                if (n == name) return x[coord];
            return std::nullopt;
        };
        return eval(e, resolver);
    };
}

}  // namespace pairquad
