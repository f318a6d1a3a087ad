#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include <CLI11.hpp>

#include "commands.hpp"
#include "pairquad/exprlang.hpp"

namespace {

using namespace pairquad::cli;

std::string_view trim(std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
}

// Flat key=value config, keys named after the subcommand's long options.
// Values already given on the command line win; unknown and duplicate keys
// are rejected. '#' starts a comment line.
void apply_config(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = trim(line);
        if (v.empty() || v.front() == '#') continue;
        auto at = [&] { return path + ":" + std::to_string(lineno) + ": "; };
        std::size_t eq = v.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument(at() + "expected key=value");
        std::string key(trim(v.substr(0, eq)));
        std::string val(trim(v.substr(eq + 1)));
        if (key.empty()) throw std::invalid_argument(at() + "empty key");
        if (!seen.insert(key).second)
            throw std::invalid_argument(at() + "duplicate key \"" + key + "\"");
        CLI::Option* op = key == "config" ? nullptr : sub->get_option_no_throw("--" + key);
        if (!op)
            throw std::invalid_argument(at() + "unknown key \"" + key + "\" for subcommand " +
                                        sub->get_name());
        if (op->count() > 0) continue;
        op->add_result(val);
        op->run_callback();
    }
}

void add_mesh_options(CLI::App* sub, MeshSpec& m) {
    sub->add_option("--mesh", m.builder,
                    "Mesh builder: interval, square, cube, torus, icosphere, regular, file")
        ->capture_default_str();
    sub->add_option("--mesh-params", m.params,
                    "Comma list of builder parameters; entries may be expressions (\"0,pi,8\")");
    sub->add_option("--mesh-file", m.file, "JSON mesh path, used with --mesh file");
}

void add_cochain_options(CLI::App* sub, CochainSpec& c, bool with_degree) {
    sub->add_option("--cochain", c.name, "volume, det, oneform, area, solidangle, heis, expr")
        ->capture_default_str();
    sub->add_option("--field", c.field, "Scalar factor for the volume cochain, in x_0..x_{dim-1}")
        ->capture_default_str();
    sub->add_option("--coeffs", c.coeffs,
                    "One-form coefficients, one expression per coordinate, separated by ';'");
    sub->add_option("--rule", c.rule, "Endpoint rule for oneform: source, target, average")
        ->capture_default_str();
    sub->add_option("--expr", c.expr,
                    "Pair cochain expression in slot coordinates xK_I (slot K, coordinate I)");
    if (with_degree)
        sub->add_option("--degree", c.degree, "Cochain degree for expr (builtins fix their own)");
    sub->add_flag("--alt", c.use_alt, "Antisymmetrize the cochain before use");
}

void add_common(CLI::App* sub, bool& dry_run, std::string& config_path) {
    sub->add_flag("--dry-run", dry_run, "Print the resolved config and exit 0");
    sub->add_option("--config", config_path,
                    "Flat key=value file; command-line flags override it");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Riemann sums from groupoid cochains: mesh refinement, finite-difference\n"
        "differentiation of cochains, jet checks, and phase-space star products."};
    app.require_subcommand(1);
    app.allow_config_extras(false);
    app.set_version_flag("--version", "1.0.0");

    IntegrateConfig ic;
    VanestConfig vc;
    JetcheckConfig jc;
    StarConfig sc;
    LoopConfig lc;
    MeshCmdConfig mc;
    std::string config_path;

    CLI::App* integrate =
        app.add_subcommand("integrate", "Pair a cochain with a mesh and refine to the limit");
    add_mesh_options(integrate, ic.mesh);
    add_cochain_options(integrate, ic.cochain, false);
    integrate->add_option("--scheme", ic.scheme, "Subdivision: edgewise or barycentric")
        ->capture_default_str();
    integrate->add_option("--max-levels", ic.max_levels, "Subdivision rounds after the seed mesh")
        ->capture_default_str();
    integrate->add_option("--tolerance", ic.tolerance, "Convergence threshold; <= 0 disables")
        ->capture_default_str();
    integrate->add_option("--reference", ic.reference,
                          "Reference value expression, e.g. \"4*pi\"; empty = Cauchy errors");
    integrate->add_option("--csv", ic.csv_path, "Write the convergence table to this file");
    integrate->add_option("--threads", ic.threads, "OpenMP thread count, 0 = default")
        ->capture_default_str();
    add_common(integrate, ic.dry_run, config_path);

    CLI::App* vanest = app.add_subcommand(
        "vanest", "Differentiate a cochain at sample points along coordinate axes");
    add_cochain_options(vanest, vc.cochain, true);
    vanest->add_option("--dim", vc.dim, "Point dimension")->capture_default_str();
    vanest->add_option("--samples", vc.samples, "Sample point count")->capture_default_str();
    vanest->add_option("--lo", vc.lo, "Sample box lower bound")->capture_default_str();
    vanest->add_option("--hi", vc.hi, "Sample box upper bound")->capture_default_str();
    vanest->add_option("--seed", vc.seed, "Sample sequence seed")->capture_default_str();
    vanest->add_option("--axes", vc.axes, "Comma list of coordinate axes; empty = 0,1,...");
    vanest->add_option("--route", vc.route, "cs, nerve, or both")->capture_default_str();
    vanest->add_option("--target", vc.target,
                       "Target expression in x_0..x_{dim-1}; reports max deviation");
    vanest->add_option("--tol", vc.tol,
                       "Exit 2 if the reported deviation exceeds this; < 0 = report only")
        ->capture_default_str();
    vanest->add_option("--step", vc.step, "Finite-difference step")->capture_default_str();
    vanest->add_flag("--no-richardson", vc.no_richardson, "Skip step-halving extrapolation");
    add_common(vanest, vc.dry_run, config_path);

    CLI::App* jetcheck = app.add_subcommand(
        "jetcheck", "Fit the decay rate of the cochain's residual against its first-order jet");
    add_cochain_options(jetcheck, jc.cochain, true);
    jetcheck->add_option("--dim", jc.dim, "Point dimension")->capture_default_str();
    jetcheck->add_option("--at", jc.at, "Base point, comma list; empty = origin");
    jetcheck->add_option("--frame", jc.frame,
                         "Semicolon list of frame vectors; empty = coordinate axes");
    jetcheck->add_option("--scales", jc.scales,
                         "Comma list of decreasing scale factors; empty = 2^-3..2^-8");
    jetcheck->add_option("--threshold", jc.threshold,
                         "Pass slope; 0 = degree + 0.5; must exceed the degree");
    jetcheck->add_option("--step", jc.step, "Finite-difference step")->capture_default_str();
    jetcheck->add_flag("--no-richardson", jc.no_richardson, "Skip step-halving extrapolation");
    add_common(jetcheck, jc.dry_run, config_path);

    CLI::App* star =
        app.add_subcommand("star", "Evaluate the phase-space star product of two functions");
    star->add_option("--f", sc.f, "Left factor, expression in q and p")->capture_default_str();
    star->add_option("--g", sc.g, "Right factor, expression in q and p")->capture_default_str();
    star->add_option("--at", sc.at, "Evaluation point q,p")->capture_default_str();
    star->add_option("--hbar", sc.hbar, "Deformation parameter")->capture_default_str();
    star->add_option("--half-width", sc.half_width, "Integration box half-width")
        ->capture_default_str();
    star->add_option("--grid-points", sc.grid_points, "Samples per axis")->capture_default_str();
    star->add_option("--ladder", sc.ladder, "Comma list of regulator strengths")
        ->capture_default_str();
    star->add_flag("--oracle", sc.oracle,
                   "Also run the frequency-space route and report the relative deviation");
    star->add_option("--threads", sc.threads, "OpenMP thread count, 0 = default")
        ->capture_default_str();
    add_common(star, sc.dry_run, config_path);

    CLI::App* loop =
        app.add_subcommand("loop", "Sum the action one-form over a closed polygon");
    loop->add_option("--points", lc.points_file, "CSV of q,p rows traversed in order");
    loop->add_option("--regular", lc.regular,
                     "Use the regular N-gon inscribed in the unit-area disk instead")
        ->capture_default_str();
    loop->add_option("--rule", lc.rule, "Endpoint rule: source, target, average")
        ->capture_default_str();
    add_common(loop, lc.dry_run, config_path);

    CLI::App* mesh = app.add_subcommand("mesh", "Build, audit, and optionally save a mesh");
    add_mesh_options(mesh, mc.mesh);
    mesh->add_option("--scheme", mc.scheme, "Subdivision: edgewise or barycentric")
        ->capture_default_str();
    mesh->add_option("--levels", mc.levels, "Subdivision rounds before the audit")
        ->capture_default_str();
    mesh->add_option("--out", mc.out, "Save the mesh as JSON to this path");
    add_common(mesh, mc.dry_run, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (!config_path.empty()) {
            for (CLI::App* sub : {integrate, vanest, jetcheck, star, loop, mesh})
                if (sub->parsed()) apply_config(sub, config_path);
        }
        if (integrate->parsed()) return cmd_integrate(ic);
        if (vanest->parsed()) return cmd_vanest(vc);
        if (jetcheck->parsed()) return cmd_jetcheck(jc);
        if (star->parsed()) return cmd_star(sc);
        if (loop->parsed()) return cmd_loop(lc);
        if (mesh->parsed()) return cmd_mesh(mc);
    } catch (const pairquad::ParseError& e) {
        std::cerr << "error: " << e.what() << " (offset " << e.offset() << ")\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
