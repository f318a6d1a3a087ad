#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pairquad/builtins.hpp"
#include "pairquad/cochain.hpp"
#include "pairquad/exprlang.hpp"
#include "pairquad/mesh.hpp"
#include "pairquad/mesh_io.hpp"
#include "pairquad/moyal.hpp"
#include "pairquad/quadrature.hpp"
#include "pairquad/vanest.hpp"

namespace pairquad::cli {
namespace {

// Shortest round-trip decimal; NaN prints empty so outputs stay parseable
// and bytewise stable.
std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

const char* fmt_bool(bool b) { return b ? "true" : "false"; }

void set_threads(int threads) {
    if (threads <= 0) return;
#ifdef _OPENMP
    omp_set_num_threads(threads);
#endif
}

std::vector<std::string> split_list(std::string_view s, char sep) {
    auto trim = [](std::string_view v) {
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
        return v;
    };
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(sep, start);
        if (end == std::string_view::npos) end = s.size();
        out.emplace_back(trim(s.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

double eval_const(const std::string& src) {
    return eval(parse(src), [](std::string_view) -> std::optional<double> { return std::nullopt; });
}

// Comma list of constant expressions ("0,pi,8", "2^-3,2^-4").
std::vector<double> number_list(const std::string& s, char sep = ',') {
    std::vector<double> out;
    for (const auto& piece : split_list(s, sep)) out.push_back(eval_const(piece));
    return out;
}

int as_int(double v, const char* what) {
    double r = std::round(v);
    if (!(std::abs(v - r) <= 1e-9) || std::abs(v) > 2e9)
        throw std::invalid_argument(std::string(what) + " must be an integer");
    return static_cast<int>(r);
}

Vec parse_vec(const std::string& s, int dim, const char* what) {
    auto vals = number_list(s);
    if (static_cast<int>(vals.size()) != dim)
        throw std::invalid_argument(std::string(what) + " needs " + std::to_string(dim) +
                                    " components, got " + std::to_string(vals.size()));
    return vals;
}

Triangulation build_mesh(const MeshSpec& m) {
    if (m.builder == "file") {
        if (m.file.empty()) throw std::invalid_argument("mesh=file needs --mesh-file");
        return load_mesh(m.file);
    }
    auto ps = number_list(m.params);
    auto arg = [&](std::size_t i, double dflt) { return i < ps.size() ? ps[i] : dflt; };
    if (m.builder == "interval")
        return interval_partition(arg(0, 0.0), arg(1, 1.0), as_int(arg(2, 8), "cells"));
    if (m.builder == "square") return unit_square_grid(as_int(arg(0, 4), "cells"));
    if (m.builder == "cube") return unit_cube_grid(as_int(arg(0, 2), "cells"));
    if (m.builder == "torus")
        return flat_torus_grid(as_int(arg(0, 3), "cells"), Vec{arg(1, 1.0), arg(2, 1.0)});
    if (m.builder == "icosphere") return icosphere(as_int(arg(0, 1), "levels"));
    if (m.builder == "regular") return regular_polygon(as_int(arg(0, 6), "sides"));
    throw std::invalid_argument("unknown mesh builder \"" + m.builder +
                                "\" (interval, square, cube, torus, icosphere, regular, file)");
}

EndpointRule parse_rule(const std::string& s) {
    if (s == "source") return EndpointRule::source;
    if (s == "target") return EndpointRule::target;
    if (s == "average") return EndpointRule::average;
    throw std::invalid_argument("rule must be source, target, or average");
}

SubdivisionScheme parse_scheme(const std::string& s) {
    if (s == "edgewise") return SubdivisionScheme::edgewise;
    if (s == "barycentric") return SubdivisionScheme::barycentric;
    throw std::invalid_argument("scheme must be edgewise or barycentric");
}

// Builds the requested cochain on R^dim. Builtins fix their own degree;
// expr cochains take it from the spec or from the fallback (the mesh
// dimension when integrating).
PairCochain build_cochain(const CochainSpec& c, int dim, int fallback_degree) {
    auto done = [&](PairCochain W) { return c.use_alt ? alt(W) : W; };
    auto need_dim = [&](int d) {
        if (dim != d)
            throw std::invalid_argument("cochain " + c.name + " lives on R^" + std::to_string(d) +
                                        ", got dim " + std::to_string(dim));
    };
    if (c.name == "volume")
        return done(volume_density_cochain(dim, expr_scalar_field(dim, c.field)));
    if (c.name == "det")
        return done(volume_density_cochain(dim, [](std::span<const double>) { return 1.0; }));
    if (c.name == "oneform") {
        auto pieces = split_list(c.coeffs, ';');
        if (static_cast<int>(pieces.size()) != dim)
            throw std::invalid_argument("oneform needs " + std::to_string(dim) +
                                        " coefficient expressions separated by ';'");
        std::vector<ScalarField> fs;
        for (const auto& p : pieces) fs.push_back(expr_scalar_field(dim, p));
        return done(one_form_cochain(dim, std::move(fs), parse_rule(c.rule)));
    }
    if (c.name == "area") {
        need_dim(2);
        return done(area_form_cochain());
    }
    if (c.name == "solidangle") {
        need_dim(3);
        return done(solid_angle_cochain());
    }
    if (c.name == "heis") {
        // The group 2-cocycle carried to the pair groupoid of the plane
        // through the common-source chart at each base point.
        need_dim(2);
        GroupCochain sigma = heisenberg_cocycle(ChainDescription::common_source);
        PairCochain W;
        W.degree = 2;
        W.point_dim = 2;
        W.eval = [sigma](std::span<const Vec> pts) {
            std::array<Vec, 2> fs;
            for (int k = 0; k < 2; ++k) {
                fs[k] = Vec(2);
                for (int i = 0; i < 2; ++i) fs[k][i] = pts[k + 1][i] - pts[0][i];
            }
            return sigma(std::span<const Vec>(fs.data(), 2));
        };
        return done(W);
    }
    if (c.name == "expr") {
        int degree = c.degree > 0 ? c.degree : fallback_degree;
        if (degree <= 0) throw std::invalid_argument("expr cochains need --degree");
        if (c.expr.empty()) throw std::invalid_argument("cochain expr needs --expr");
        return done(expr_pair_cochain(degree, dim, c.expr));
    }
    throw std::invalid_argument("unknown cochain \"" + c.name +
                                "\" (volume, det, oneform, area, solidangle, heis, expr)");
}

void print_mesh_keys(const MeshSpec& m) {
    std::cout << "mesh=" << m.builder << "\n"
              << "mesh-params=" << m.params << "\n"
              << "mesh-file=" << m.file << "\n";
}

void print_cochain_keys(const CochainSpec& c, bool with_degree) {
    std::cout << "cochain=" << c.name << "\n"
              << "field=" << c.field << "\n"
              << "coeffs=" << c.coeffs << "\n"
              << "rule=" << c.rule << "\n"
              << "expr=" << c.expr << "\n";
    if (with_degree) std::cout << "degree=" << c.degree << "\n";
    std::cout << "alt=" << fmt_bool(c.use_alt) << "\n";
}

}  // namespace

int cmd_integrate(const IntegrateConfig& cfg) {
    if (cfg.dry_run) {
        print_mesh_keys(cfg.mesh);
        print_cochain_keys(cfg.cochain, false);
        std::cout << "scheme=" << cfg.scheme << "\n"
                  << "max-levels=" << cfg.max_levels << "\n"
                  << "tolerance=" << fmt(cfg.tolerance) << "\n"
                  << "reference=" << cfg.reference << "\n"
                  << "csv=" << cfg.csv_path << "\n"
                  << "threads=" << cfg.threads << "\n";
        return 0;
    }
    set_threads(cfg.threads);
    Triangulation T = build_mesh(cfg.mesh);
    validate_mesh(T);
    PairCochain W = build_cochain(cfg.cochain, T.ambient, T.dim);
    if (W.degree != T.dim)
        throw std::invalid_argument("cochain degree " + std::to_string(W.degree) +
                                    " does not match mesh dimension " + std::to_string(T.dim));
    RefineOptions opts;
    opts.scheme = parse_scheme(cfg.scheme);
    opts.max_levels = cfg.max_levels;
    opts.tolerance = cfg.tolerance;
    if (!cfg.reference.empty()) opts.reference = CochainValue(eval_const(cfg.reference), 0.0);

    ConvergenceReport rep = refine_to_limit(W, T, opts);
    std::string csv = rep.to_csv();
    if (!cfg.csv_path.empty()) {
        std::ofstream out(cfg.csv_path, std::ios::binary);
        out << csv;
        if (!out.flush()) throw std::runtime_error("cannot write " + cfg.csv_path);
    }
    const ConvergenceRow& last = rep.rows.back();
    std::cout << "rows=" << rep.rows.size() << "\n"
              << "sum_real=" << fmt(last.sum.real()) << "\n"
              << "sum_imag=" << fmt(last.sum.imag()) << "\n"
              << "final_error=" << fmt(last.error) << "\n"
              << "fitted_order=" << fmt(rep.fitted_order) << "\n"
              << "converged=" << fmt_bool(rep.converged) << "\n";
    if (cfg.csv_path.empty())
        std::cout << csv;
    else
        std::cout << "csv=" << cfg.csv_path << "\n";
    return rep.converged ? 0 : 2;
}

int cmd_vanest(const VanestConfig& cfg) {
    if (cfg.dry_run) {
        print_cochain_keys(cfg.cochain, true);
        std::cout << "dim=" << cfg.dim << "\n"
                  << "samples=" << cfg.samples << "\n"
                  << "lo=" << fmt(cfg.lo) << "\n"
                  << "hi=" << fmt(cfg.hi) << "\n"
                  << "seed=" << cfg.seed << "\n"
                  << "axes=" << cfg.axes << "\n"
                  << "route=" << cfg.route << "\n"
                  << "target=" << cfg.target << "\n"
                  << "tol=" << fmt(cfg.tol) << "\n"
                  << "step=" << fmt(cfg.step) << "\n"
                  << "no-richardson=" << fmt_bool(cfg.no_richardson) << "\n";
        return 0;
    }
    if (cfg.samples <= 0) throw std::invalid_argument("sample grid is empty: samples must be positive");
    if (cfg.dim <= 0) throw std::invalid_argument("dim must be positive");
    bool use_cs = cfg.route == "cs" || cfg.route == "both";
    bool use_nerve = cfg.route == "nerve" || cfg.route == "both";
    if (!use_cs && !use_nerve) throw std::invalid_argument("route must be cs, nerve, or both");

    PairCochain W = build_cochain(cfg.cochain, cfg.dim, 0);
    std::vector<int> axes;
    if (cfg.axes.empty()) {
        for (int i = 0; i < W.degree; ++i) axes.push_back(i);
    } else {
        for (double v : number_list(cfg.axes)) axes.push_back(as_int(v, "axes"));
    }
    VanEstOptions opts;
    opts.h = cfg.step;
    opts.richardson = !cfg.no_richardson;
    ScalarField target;
    if (!cfg.target.empty()) target = expr_scalar_field(cfg.dim, cfg.target);

    auto tuples = sample_tuples(cfg.samples, 1, cfg.dim, cfg.lo, cfg.hi, cfg.seed);

    std::string header;
    for (int i = 0; i < cfg.dim; ++i) header += "x_" + std::to_string(i) + ",";
    if (use_cs) header += "cs_real,cs_imag,cs_error";
    if (use_cs && use_nerve) header += ",";
    if (use_nerve) header += "nerve_real,nerve_imag,nerve_error";
    if (use_cs && use_nerve) header += ",route_deviation";
    if (target) header += ",target,deviation";
    std::cout << header << "\n";

    double max_err = 0.0, max_route_dev = 0.0, max_target_dev = 0.0;
    for (const auto& t : tuples) {
        const Vec& x = t[0];
        std::string row;
        for (int i = 0; i < cfg.dim; ++i) row += fmt(x[i]) + ",";
        VEResult a, b;
        if (use_cs) a = ve_common_source(W, x, axes, opts);
        if (use_nerve) b = ve_nerve_alternating(W, x, axes, opts);
        if (use_cs) {
            row += fmt(a.value.real()) + "," + fmt(a.value.imag()) + "," + fmt(a.error_estimate);
            max_err = std::max(max_err, a.error_estimate);
        }
        if (use_cs && use_nerve) row += ",";
        if (use_nerve) {
            row += fmt(b.value.real()) + "," + fmt(b.value.imag()) + "," + fmt(b.error_estimate);
            max_err = std::max(max_err, b.error_estimate);
        }
        if (use_cs && use_nerve) {
            double dev = std::abs(a.value - b.value);
            max_route_dev = std::max(max_route_dev, dev);
            row += "," + fmt(dev);
        }
        if (target) {
            CochainValue primary = use_cs ? a.value : b.value;
            double tv = target(x);
            double dev = std::abs(primary - CochainValue(tv, 0.0));
            max_target_dev = std::max(max_target_dev, dev);
            row += "," + fmt(tv) + "," + fmt(dev);
        }
        std::cout << row << "\n";
    }
    std::cout << "max_error_estimate=" << fmt(max_err) << "\n";
    if (use_cs && use_nerve) std::cout << "max_route_deviation=" << fmt(max_route_dev) << "\n";
    if (target) std::cout << "max_target_deviation=" << fmt(max_target_dev) << "\n";
    if (cfg.tol >= 0.0) {
        double gauge = target ? max_target_dev : (use_cs && use_nerve ? max_route_dev : max_err);
        std::cout << "within_tol=" << fmt_bool(gauge <= cfg.tol) << "\n";
        if (gauge > cfg.tol) return 2;
    }
    return 0;
}

int cmd_jetcheck(const JetcheckConfig& cfg) {
    if (cfg.dry_run) {
        print_cochain_keys(cfg.cochain, true);
        std::cout << "dim=" << cfg.dim << "\n"
                  << "at=" << cfg.at << "\n"
                  << "frame=" << cfg.frame << "\n"
                  << "scales=" << cfg.scales << "\n"
                  << "threshold=" << fmt(cfg.threshold) << "\n"
                  << "step=" << fmt(cfg.step) << "\n"
                  << "no-richardson=" << fmt_bool(cfg.no_richardson) << "\n";
        return 0;
    }
    if (cfg.dim <= 0) throw std::invalid_argument("dim must be positive");
    PairCochain W = build_cochain(cfg.cochain, cfg.dim, 0);
    int n = W.degree;
    double threshold = cfg.threshold == 0.0 ? n + 0.5 : cfg.threshold;
    if (threshold <= n)
        throw std::invalid_argument("threshold must exceed the cochain degree " + std::to_string(n));

    Vec x = cfg.at.empty() ? Vec(cfg.dim, 0.0) : parse_vec(cfg.at, cfg.dim, "at");
    std::vector<Vec> frame;
    if (cfg.frame.empty()) {
        if (n > cfg.dim)
            throw std::invalid_argument("no default frame: degree exceeds dim, pass --frame");
        for (int k = 0; k < n; ++k) {
            Vec e(cfg.dim, 0.0);
            e[k] = 1.0;
            frame.push_back(e);
        }
    } else {
        for (const auto& piece : split_list(cfg.frame, ';'))
            frame.push_back(parse_vec(piece, cfg.dim, "frame vector"));
        if (static_cast<int>(frame.size()) != n)
            throw std::invalid_argument("frame needs " + std::to_string(n) + " vectors");
    }
    std::vector<double> scales;
    if (cfg.scales.empty()) {
        for (int k = 3; k <= 8; ++k) scales.push_back(std::ldexp(1.0, -k));
    } else {
        scales = number_list(cfg.scales);
    }
    VanEstOptions opts;
    opts.h = cfg.step;
    opts.richardson = !cfg.no_richardson;

    JetReport rep = jet_residual_slope(W, x, frame, scales, opts);
    std::cout << "scale,residual\n";
    for (std::size_t i = 0; i < rep.scales.size(); ++i)
        std::cout << fmt(rep.scales[i]) << "," << fmt(rep.residuals[i]) << "\n";
    bool pass = rep.exact_to_precision || rep.slope > threshold;
    std::cout << "slope=" << fmt(rep.slope) << "\n"
              << "exact_to_precision=" << fmt_bool(rep.exact_to_precision) << "\n"
              << "threshold=" << fmt(threshold) << "\n"
              << "pass=" << fmt_bool(pass) << "\n";
    return pass ? 0 : 2;
}

namespace {

PhaseFunction phase_from_expr(const std::string& src) {
    Expr e = parse(src);
    return [e](double q, double p) -> std::complex<double> {
        auto vars = [&](std::string_view name) -> std::optional<double> {
            if (name == "q") return q;
            if (name == "p") return p;
            return std::nullopt;
        };
        return {eval(e, vars), 0.0};
    };
}

}  // namespace

int cmd_star(const StarConfig& cfg) {
    if (cfg.dry_run) {
        std::cout << "f=" << cfg.f << "\n"
                  << "g=" << cfg.g << "\n"
                  << "at=" << cfg.at << "\n"
                  << "hbar=" << fmt(cfg.hbar) << "\n"
                  << "half-width=" << fmt(cfg.half_width) << "\n"
                  << "grid-points=" << cfg.grid_points << "\n"
                  << "ladder=" << cfg.ladder << "\n"
                  << "oracle=" << fmt_bool(cfg.oracle) << "\n"
                  << "threads=" << cfg.threads << "\n";
        return 0;
    }
    set_threads(cfg.threads);
    Vec at = parse_vec(cfg.at, 2, "at");
    PhaseFunction f = phase_from_expr(cfg.f);
    PhaseFunction g = phase_from_expr(cfg.g);
    StarParams params;
    params.hbar = cfg.hbar;
    params.half_width = cfg.half_width;
    params.grid_points = cfg.grid_points;
    params.ladder = number_list(cfg.ladder);

    StarResult r = star_product(f, g, at[0], at[1], params);
    std::cout << "value_real=" << fmt(r.value.real()) << "\n"
              << "value_imag=" << fmt(r.value.imag()) << "\n"
              << "error_estimate=" << fmt(r.error_estimate) << "\n";
    if (cfg.oracle) {
        std::complex<double> o = star_oracle(f, g, at[0], at[1], cfg.hbar);
        double rel = std::abs(r.value - o) / std::max(std::abs(o), 1e-300);
        std::cout << "oracle_real=" << fmt(o.real()) << "\n"
                  << "oracle_imag=" << fmt(o.imag()) << "\n"
                  << "relative_deviation=" << fmt(rel) << "\n";
    }
    return 0;
}

namespace {

std::vector<Vec> read_loop_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Vec> pts;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        auto pieces = split_list(line, ',');
        if (pieces.empty() || pieces[0].starts_with('#')) continue;
        if (first && pieces.size() == 2 && pieces[0] == "q" && pieces[1] == "p") {
            first = false;
            continue;
        }
        first = false;
        if (pieces.size() != 2)
            throw std::invalid_argument(path + ": each row must be q,p");
        pts.push_back(Vec{eval_const(pieces[0]), eval_const(pieces[1])});
    }
    return pts;
}

}  // namespace

int cmd_loop(const LoopConfig& cfg) {
    if (cfg.dry_run) {
        std::cout << "points=" << cfg.points_file << "\n"
                  << "regular=" << cfg.regular << "\n"
                  << "rule=" << cfg.rule << "\n";
        return 0;
    }
    std::vector<Vec> pts;
    if (cfg.regular > 0) {
        Triangulation P = regular_polygon(cfg.regular);
        for (int i = 0; i < P.vertex_count(); ++i) {
            auto v = P.vertex(i);
            pts.push_back(Vec(v.begin(), v.end()));
        }
    } else if (!cfg.points_file.empty()) {
        pts = read_loop_csv(cfg.points_file);
    } else {
        throw std::invalid_argument("loop needs --points FILE or --regular N");
    }
    double action = loop_action(pts, parse_rule(cfg.rule));
    std::cout << "vertices=" << pts.size() << "\n"
              << "rule=" << cfg.rule << "\n"
              << "action=" << fmt(action) << "\n";
    return 0;
}

int cmd_mesh(const MeshCmdConfig& cfg) {
    if (cfg.dry_run) {
        print_mesh_keys(cfg.mesh);
        std::cout << "scheme=" << cfg.scheme << "\n"
                  << "levels=" << cfg.levels << "\n"
                  << "out=" << cfg.out << "\n";
        return 0;
    }
    Triangulation T = build_mesh(cfg.mesh);
    validate_mesh(T);
    SubdivisionScheme scheme = parse_scheme(cfg.scheme);
    for (int k = 0; k < cfg.levels; ++k) T = subdivide(T, scheme);
    MeshAudit a = orientation_audit(T);
    std::cout << "dim=" << T.dim << "\n"
              << "ambient=" << T.ambient << "\n"
              << "vertices=" << T.vertex_count() << "\n"
              << "simplices=" << T.simplex_count() << "\n"
              << "max_diameter=" << fmt(max_diameter(T)) << "\n"
              << "interior_faces=" << a.interior_faces << "\n"
              << "boundary_faces=" << a.boundary_faces << "\n"
              << "orientation_violations=" << a.orientation_violations << "\n"
              << "degenerate_simplices=" << a.degenerate_simplices << "\n"
              << "volume_signs_uniform=" << fmt_bool(a.volume_signs_uniform) << "\n"
              << "consistent=" << fmt_bool(a.consistent) << "\n";
    if (!cfg.out.empty()) {
        save_mesh(T, cfg.out);
        std::cout << "saved=" << cfg.out << "\n";
    }
    return a.consistent ? 0 : 2;
}

}  // namespace pairquad::cli
