// Timing harness for the parallel kernels against their serial reference
// implementations. Both routes must agree bitwise: the parallel Riemann sum
// stages per-simplex terms and reduces them in index order, so thread count
// never changes the result.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "pairquad/builtins.hpp"
#include "pairquad/mesh.hpp"
#include "pairquad/moyal.hpp"
#include "pairquad/quadrature.hpp"

using namespace pairquad;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double best_of(int reps, F&& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = Clock::now();
        body();
        auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace

int main(int argc, char** argv) {
    int cells = 512;
    int reps = 5;
    int star_grid = 256;
    CLI::App app{"kernel timing: parallel vs serial reference"};
    app.add_option("--cells", cells, "square grid cells per axis for the Riemann sum");
    app.add_option("--reps", reps, "repetitions per measurement (best is reported)");
    app.add_option("--star-grid", star_grid, "lattice points per axis for the star product");
    CLI11_PARSE(app, argc, argv);

    std::printf("threads available: %d\n\n", max_threads());

    {
        PairCochain W = volume_density_cochain(2, [](std::span<const double> x) {
            return std::exp(x[0] + x[1]);
        });
        Triangulation T = unit_square_grid(cells);
        std::size_t n = T.simplices.size();
        CochainValue sp{}, ss{};
        double tp = best_of(reps, [&] { sp = riemann_sum(W, T); });
        double ts = best_of(reps, [&] { ss = riemann_sum_serial(W, T); });
        std::printf("riemann_sum   %zu triangles, best of %d\n", n, reps);
        std::printf("  parallel  %8.3f ms  %7.2f Mtri/s  sum=%.17g\n", tp * 1e3, n / tp / 1e6, sp.real());
        std::printf("  serial    %8.3f ms  %7.2f Mtri/s  sum=%.17g\n", ts * 1e3, n / ts / 1e6, ss.real());
        std::printf("  speedup %.2fx, bitwise equal: %s\n\n", ts / tp,
                    sp == ss ? "yes" : "NO (BUG)");
    }

    {
        auto f = [](double q, double p) {
            return std::complex<double>(std::exp(-(q * q + p * p) / 72.0), 0.0);
        };
        StarParams params;
        params.grid_points = star_grid;
        StarResult rp{}, rs{};
        double tp = best_of(reps, [&] { rp = star_product(f, f, 0.0, 0.0, params); });
        double ts = best_of(reps, [&] { rs = star_product_serial(f, f, 0.0, 0.0, params); });
        std::printf("star_product  %d^2 lattice, %zu ladder rungs, best of %d\n", star_grid,
                    params.ladder.size(), reps);
        std::printf("  parallel  %8.3f ms  value=%.17g%+.17gi\n", tp * 1e3, rp.value.real(),
                    rp.value.imag());
        std::printf("  serial    %8.3f ms  value=%.17g%+.17gi\n", ts * 1e3, rs.value.real(),
                    rs.value.imag());
        std::printf("  speedup %.2fx, bitwise equal: %s\n", ts / tp,
                    rp.value == rs.value ? "yes" : "NO (BUG)");
    }
    return 0;
}
