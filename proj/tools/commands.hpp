#pragma once

#include <string>

namespace pairquad::cli {

// Mesh source: a named builder with a comma list of numeric parameters
// (expressions are allowed, so "0,pi,8" works), or a JSON mesh file.
struct MeshSpec {
    std::string builder = "square";
    std::string params;
    std::string file;
};

// Cochain source: a builtin name plus whichever auxiliary inputs that
// builtin needs, or a raw expression over slot coordinates xK_I.
struct CochainSpec {
    std::string name = "volume";
    std::string field = "1";   // scalar factor for volume
    std::string coeffs;        // semicolon list of one-form coefficients
    std::string rule = "average";
    std::string expr;
    int degree = 0;            // 0 = infer (mesh dim or builtin degree)
    bool use_alt = false;
};

struct IntegrateConfig {
    MeshSpec mesh;
    CochainSpec cochain;
    std::string scheme = "edgewise";
    int max_levels = 8;
    double tolerance = 1e-8;
    std::string reference;  // expression; empty = Cauchy errors
    std::string csv_path;   // empty = CSV to stdout
    int threads = 0;        // 0 = library default
    bool dry_run = false;
};

struct VanestConfig {
    CochainSpec cochain;
    int dim = 2;
    int samples = 25;
    double lo = -1.0;
    double hi = 1.0;
    unsigned seed = 0;
    std::string axes;        // comma list; empty = 0,1,...,degree-1
    std::string route = "cs";  // cs | nerve | both
    std::string target;      // expression in x_I; empty = no comparison
    double tol = -1.0;       // max target deviation; < 0 = report only
    double step = 1e-3;
    bool no_richardson = false;
    bool dry_run = false;
};

struct JetcheckConfig {
    CochainSpec cochain;
    int dim = 2;
    std::string at;      // comma list; empty = origin
    std::string frame;   // semicolon list of vectors; empty = coordinate axes
    std::string scales;  // comma list; empty = 2^-3 ... 2^-8
    double threshold = 0.0;  // 0 = degree + 0.5; must exceed the degree
    double step = 1e-3;
    bool no_richardson = false;
    bool dry_run = false;
};

struct StarConfig {
    std::string f = "1";
    std::string g = "1";
    std::string at = "0,0";
    double hbar = 1.0;
    double half_width = 8.0;
    int grid_points = 128;
    std::string ladder = "1e-2,5e-3,2.5e-3";
    bool oracle = false;
    int threads = 0;
    bool dry_run = false;
};

struct LoopConfig {
    std::string points_file;
    int regular = 0;  // regular N-gon of unit area instead of a file
    std::string rule = "average";
    bool dry_run = false;
};

struct MeshCmdConfig {
    MeshSpec mesh;
    std::string scheme = "edgewise";
    int levels = 0;   // subdivision rounds before the audit
    std::string out;  // JSON output path; empty = no file
    bool dry_run = false;
};

// Exit codes: 0 ok, 1 error, 2 ran but failed its check (not converged,
// slope below threshold, deviation above tolerance, audit violations).
int cmd_integrate(const IntegrateConfig& cfg);
int cmd_vanest(const VanestConfig& cfg);
int cmd_jetcheck(const JetcheckConfig& cfg);
int cmd_star(const StarConfig& cfg);
int cmd_loop(const LoopConfig& cfg);
int cmd_mesh(const MeshCmdConfig& cfg);

}  // namespace pairquad::cli
