#include "pairquad/cochain.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pairquad {

Group vector_group(int dim) {
    if (dim < 1) throw std::invalid_argument("group dimension must be positive");
    Group g;
    g.dim = dim;
    g.identity = Vec(dim, 0.0);
    g.multiply = [](const Vec& a, const Vec& b) {
        Vec r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
        return r;
    };
    g.invert = [](const Vec& a) {
        Vec r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
        return r;
    };
    return g;
}

void validate_permutation(const Permutation& p, int size) {
    if (static_cast<int>(p.size()) != size)
        throw std::invalid_argument("permutation has wrong size");
    std::vector<bool> seen(size, false);
    for (int v : p) {
        if (v < 0 || v >= size || seen[v])
            throw std::invalid_argument("not a permutation");
        seen[v] = true;
    }
}

int permutation_sign(const Permutation& p) {
    int sign = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) sign = -sign;
    return sign;
}

std::vector<Permutation> all_permutations(int size) {
    Permutation p(size);
    std::iota(p.begin(), p.end(), 0);
    std::vector<Permutation> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

PairCochain act(const Permutation& sigma, const PairCochain& W) {
    validate_permutation(sigma, W.degree + 1);
    PairCochain R = W;
    R.eval = [sigma, base = W.eval](std::span<const Vec> pts) {
        std::vector<Vec> permuted(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) permuted[i] = pts[sigma[i]];
        return base(permuted);
    };
    return R;
}

namespace {

GroupCochain act_common_source(const Permutation& sigma, const GroupCochain& W) {
    GroupCochain R = W;
    R.eval = [sigma, base = W.eval, grp = W.group](std::span<const Vec> args) {
        // f_0 = e; slot i receives f_sigma(0)^-1 f_sigma(i).
        auto arrow = [&](int v) -> const Vec& {
            return v == 0 ? grp.identity : args[v - 1];
        };
        Vec head_inv = grp.invert(arrow(sigma[0]));
        std::vector<Vec> mapped(args.size());
        for (std::size_t i = 1; i < args.size() + 1; ++i)
            mapped[i - 1] = grp.multiply(head_inv, arrow(sigma[i]));
        return base(mapped);
    };
    return R;
}

template <typename Cochain, typename MakeTerm>
Cochain signed_average(const Cochain& W, const std::vector<Permutation>& perms,
                       MakeTerm make_term) {
    std::vector<std::pair<double, Cochain>> terms;
    terms.reserve(perms.size());
    for (const auto& p : perms)
        terms.emplace_back(permutation_sign(p), make_term(p));
    double norm = 1.0 / static_cast<double>(perms.size());
    Cochain R = W;
    R.eval = [terms = std::move(terms), norm](std::span<const Vec> args) {
        CochainValue acc = 0.0;
        for (const auto& [sign, term] : terms) acc += sign * term.eval(args);
        return acc * norm;
    };
    return R;
}

std::vector<Permutation> permutations_fixing_zero(int size) {
    std::vector<Permutation> out;
    for (auto& p : all_permutations(size - 1)) {
        Permutation q(size);
        q[0] = 0;
        for (int i = 0; i + 1 < size; ++i) q[i + 1] = p[i] + 1;
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace

GroupCochain act(const Permutation& sigma, const GroupCochain& W) {
    validate_permutation(sigma, W.degree + 1);
    if (W.description == ChainDescription::common_source)
        return act_common_source(sigma, W);
    return to_composable(act_common_source(sigma, to_common_source(W)));
}

PairCochain alt(const PairCochain& W) {
    return signed_average(W, all_permutations(W.degree + 1),
                          [&](const Permutation& p) { return act(p, W); });
}

GroupCochain alt(const GroupCochain& W) {
    return signed_average(W, all_permutations(W.degree + 1),
                          [&](const Permutation& p) { return act(p, W); });
}

PairCochain alt_n(const PairCochain& W) {
    return signed_average(W, permutations_fixing_zero(W.degree + 1),
                          [&](const Permutation& p) { return act(p, W); });
}

GroupCochain alt_n(const GroupCochain& W) {
    return signed_average(W, permutations_fixing_zero(W.degree + 1),
                          [&](const Permutation& p) { return act(p, W); });
}

PairCochain coboundary(const PairCochain& W) {
    PairCochain R = W;
    R.degree = W.degree + 1;
    R.eval = [base = W.eval](std::span<const Vec> pts) {
        std::vector<Vec> face(pts.size() - 1);
        CochainValue acc = 0.0;
        double sign = 1.0;
        for (std::size_t omit = 0; omit < pts.size(); ++omit) {
            std::size_t k = 0;
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (i != omit) face[k++] = pts[i];
            acc += sign * base(face);
            sign = -sign;
        }
        return acc;
    };
    return R;
}

GroupCochain coboundary(const GroupCochain& W) {
    if (W.description == ChainDescription::composable)
        return to_composable(coboundary(to_common_source(W)));
    GroupCochain R = W;
    R.degree = W.degree + 1;
    R.eval = [base = W.eval, grp = W.group](std::span<const Vec> args) {
        // args are the n+1 arrows from the source; faces omit one vertex.
        // Omitting vertex 0 rebases the remaining arrows at vertex 1.
        std::vector<Vec> face(args.size() - 1);
        CochainValue acc = 0.0;
        Vec head_inv = grp.invert(args[0]);
        for (std::size_t i = 1; i < args.size(); ++i)
            face[i - 1] = grp.multiply(head_inv, args[i]);
        acc += base(face);
        double sign = -1.0;
        for (std::size_t omit = 1; omit < args.size() + 1; ++omit) {
            std::size_t k = 0;
            for (std::size_t i = 1; i < args.size() + 1; ++i)
                if (i != omit) face[k++] = args[i - 1];
            acc += sign * base(face);
            sign = -sign;
        }
        return acc;
    };
    return R;
}

GroupCochain to_common_source(const GroupCochain& W) {
    if (W.description == ChainDescription::common_source) return W;
    GroupCochain R = W;
    R.description = ChainDescription::common_source;
    R.eval = [base = W.eval, grp = W.group](std::span<const Vec> f) {
        // (f_1, ..., f_n) -> (f_1, f_1^-1 f_2, ..., f_{n-1}^-1 f_n)
        std::vector<Vec> g(f.size());
        for (std::size_t i = 0; i < f.size(); ++i)
            g[i] = i == 0 ? f[0] : grp.multiply(grp.invert(f[i - 1]), f[i]);
        return base(g);
    };
    return R;
}

GroupCochain to_composable(const GroupCochain& W) {
    if (W.description == ChainDescription::composable) return W;
    GroupCochain R = W;
    R.description = ChainDescription::composable;
    R.eval = [base = W.eval, grp = W.group](std::span<const Vec> g) {
        // (g_1, ..., g_n) -> (g_1, g_1 g_2, ..., g_1 ... g_n)
        std::vector<Vec> f(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            f[i] = i == 0 ? g[0] : grp.multiply(f[i - 1], g[i]);
        return base(f);
    };
    return R;
}

namespace {

template <typename Cochain>
double antisymmetry_defect_impl(const Cochain& W, const std::vector<std::vector<Vec>>& tuples) {
    int n1 = W.degree + 1;
    double worst = 0.0;
    for (int a = 0; a < n1; ++a)
        for (int b = a + 1; b < n1; ++b) {
            Permutation swap(n1);
            std::iota(swap.begin(), swap.end(), 0);
            std::swap(swap[a], swap[b]);
            Cochain swapped = act(swap, W);
            for (const auto& t : tuples)
                worst = std::max(worst, std::abs(swapped.eval(t) + W.eval(t)));
        }
    return worst;
}

}  // namespace

double antisymmetry_defect(const PairCochain& W, const std::vector<std::vector<Vec>>& tuples) {
    return antisymmetry_defect_impl(W, tuples);
}

double antisymmetry_defect(const GroupCochain& W, const std::vector<std::vector<Vec>>& tuples) {
    return antisymmetry_defect_impl(W, tuples);
}

double normalization_defect(const PairCochain& W, const std::vector<std::vector<Vec>>& tuples) {
    double worst = 0.0;
    for (const auto& t : tuples) {
        std::vector<Vec> degen = t;
        for (std::size_t slot = 1; slot < t.size(); ++slot) {
            degen[slot] = t[0];  // identity arrow: point equals the source
            worst = std::max(worst, std::abs(W.eval(degen)));
            degen[slot] = t[slot];
        }
    }
    return worst;
}

double normalization_defect(const GroupCochain& W, const std::vector<std::vector<Vec>>& tuples) {
    double worst = 0.0;
    for (const auto& t : tuples) {
        std::vector<Vec> degen = t;
        for (std::size_t slot = 0; slot < t.size(); ++slot) {
            degen[slot] = W.group.identity;
            worst = std::max(worst, std::abs(W.eval(degen)));
            degen[slot] = t[slot];
        }
    }
    return worst;
}

namespace {

double halton(unsigned long long index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

}  // namespace

std::vector<std::vector<Vec>> sample_tuples(int count, int tuple_len, int dim, double lo,
                                            double hi, unsigned seed) {
    if (count < 0 || tuple_len < 1 || dim < 1)
        throw std::invalid_argument("bad sample shape");
    int dims_total = tuple_len * dim;
    if (dims_total > static_cast<int>(std::size(kPrimes)))
        throw std::invalid_argument("tuple dimensionality too large for the sampler");
    std::vector<std::vector<Vec>> out(count);
    for (int k = 0; k < count; ++k) {
        unsigned long long index = 1 + static_cast<unsigned long long>(k) +
                                   static_cast<unsigned long long>(seed) * 7919ULL;
        auto& tup = out[k];
        tup.assign(tuple_len, Vec(dim));
        for (int s = 0; s < tuple_len; ++s)
            for (int c = 0; c < dim; ++c)
                tup[s][c] = lo + (hi - lo) * halton(index, kPrimes[s * dim + c]);
    }
    return out;
}

}  // namespace pairquad
