#include "lcc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lcc/parallel.hpp"
#include "lcc/rng.hpp"

namespace lcc {

namespace {

// v -> sum_e X_e X_e^T v (or X_e^T X_e v); symmetric positive semidefinite.
class GramSum : public LinearOperator {
public:
    GramSum(const std::vector<SparseMatrix>& xs, bool outer) : xs_(xs), outer_(outer) {}
    std::uint64_t rows() const override { return outer_ ? xs_.front().rows() : xs_.front().cols(); }
    std::uint64_t cols() const override { return rows(); }
    void apply(std::span<const double> x, std::span<double> y) const override {
        std::fill(y.begin(), y.end(), 0.0);
        const std::uint64_t inner = outer_ ? xs_.front().cols() : xs_.front().rows();
        std::vector<double> tmp(inner), out(y.size());
        for (const auto& m : xs_) {
            if (outer_) {
                m.apply_transpose(x, tmp);
                m.apply(tmp, out);
            } else {
                m.apply(x, tmp);
                m.apply_transpose(tmp, out);
            }
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += out[i];
        }
    }
    void apply_transpose(std::span<const double> x, std::span<double> y) const override { apply(x, y); }

private:
    const std::vector<SparseMatrix>& xs_;
    bool outer_;
};

// Largest eigenvalue of a symmetric PSD operator; one product per step.
double top_eigenvalue(const LinearOperator& g, double tol, std::uint64_t seed, std::size_t max_iter = 20000) {
    const std::size_t n = static_cast<std::size_t>(g.rows());
    if (n == 0) return 0.0;
    Rng rng(derive_seed(seed, "top_eigenvalue"));
    std::vector<double> v(n), w(n);
    for (auto& x : v) x = rng.uniform() - 0.5;
    double lambda = 0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        double nv = 0;
        for (double x : v) nv += x * x;
        nv = std::sqrt(nv);
        if (nv == 0) return 0.0;
        for (auto& x : v) x /= nv;
        g.apply(v, w);
        lambda = 0;
        for (std::size_t i = 0; i < n; ++i) lambda += v[i] * w[i];
        if (lambda <= 0) return 0.0;
        double rs = 0;
        for (std::size_t i = 0; i < n; ++i) rs += (w[i] - lambda * v[i]) * (w[i] - lambda * v[i]);
        if (std::sqrt(rs) <= tol * lambda) break;
        v.swap(w);
    }
    return lambda;
}

void check_shapes(const std::vector<SparseMatrix>& xs) {
    for (const auto& m : xs)
        if (m.rows() != xs.front().rows() || m.cols() != xs.front().cols())
            throw std::invalid_argument("matrix ensemble: shapes differ");
}

}  // namespace

PowerResult spectral_norm(const LinearOperator& a, double tol, std::size_t max_iter, std::uint64_t seed) {
    return power_iteration(a, tol, max_iter, seed);
}

double khintchine_bound(double sigma2, double d1, double d2) {
    if (sigma2 <= 0) return 0.0;
    return std::sqrt(2.0 * sigma2 * std::log(d1 + d2));
}

double matrix_variance(const std::vector<SparseMatrix>& xs, double tol, std::uint64_t seed) {
    if (xs.empty()) return 0.0;
    check_shapes(xs);
    double a = top_eigenvalue(GramSum(xs, true), tol, seed);
    double b = top_eigenvalue(GramSum(xs, false), tol, seed);
    return std::max(a, b);
}

SparseMatrix signed_sum(const std::vector<SparseMatrix>& xs, const std::vector<double>& w) {
    if (xs.empty()) return {};
    check_shapes(xs);
    if (w.size() != xs.size()) throw std::invalid_argument("signed_sum: weight count mismatch");
    std::vector<Triplet> all;
    for (std::size_t e = 0; e < xs.size(); ++e)
        for (auto t : xs[e].triplets()) all.push_back({t.row, t.col, w[e] * t.value});
    return SparseMatrix(xs.front().rows(), xs.front().cols(), std::move(all));
}

RademacherResult empirical_rademacher(const std::vector<SparseMatrix>& xs, std::size_t trials, std::uint64_t seed,
                                      double tol) {
    RademacherResult res;
    res.trials = trials;
    if (xs.empty()) {
        res.holds = true;
        return res;
    }
    res.sigma2 = matrix_variance(xs, tol, seed);
    res.bound = khintchine_bound(res.sigma2, static_cast<double>(xs.front().rows()),
                                 static_cast<double>(xs.front().cols()));
    std::vector<double> norms(trials);
    for_blocks(trials, default_threads(), [&](std::size_t tr) {
        Rng rng(derive_seed(seed, "rademacher", tr));
        std::vector<double> w(xs.size());
        for (auto& x : w) x = rng.sign();
        norms[tr] = power_iteration(signed_sum(xs, w), tol, 20000, derive_seed(seed, "rademacher_pi", tr)).sigma;
    });
    for (double v : norms) {
        res.mean += v;
        res.max = std::max(res.max, v);
    }
    if (trials) res.mean /= static_cast<double>(trials);
    // Relative slack for the iterative norm estimates.
    res.holds = res.mean <= res.bound * (1 + 1e-9) + 1e-12;
    return res;
}

LdcExtraction extract_2ldc(const std::vector<BipartiteGraph>& graphs, double Delta, const BigInt& N) {
    LdcExtraction res;
    res.N = N;
    res.matchings.resize(graphs.size());
    res.edges.resize(graphs.size());
    for_blocks(graphs.size(), default_threads(), [&](std::size_t e) {
        res.matchings[e] = max_bipartite_matching(graphs[e]);
    });
    for (std::size_t e = 0; e < graphs.size(); ++e) {
        const std::size_t deg = max_degree(graphs[e]);
        if (static_cast<double>(deg) > Delta)
            throw std::runtime_error("extract_2ldc: graph " + std::to_string(e) + " has degree " +
                                     std::to_string(deg) + " above the pruning threshold");
        res.max_degree = std::max(res.max_degree, deg);
        res.edges[e] = graphs[e].edges.size();
        const double m = static_cast<double>(res.matchings[e].size());
        // Integer form of |G''| >= |E| / Δ when Δ >= 1.
        if (res.edges[e] > 0 && m * Delta < static_cast<double>(res.edges[e]) * (1 - 1e-12)) res.size_ok = false;
        res.matched += m;
    }
    const double two_n = 2.0 * static_cast<double>(N);
    const double kp = static_cast<double>(graphs.size());
    res.delta_prime = kp > 0 && two_n > 0 ? res.matched / kp / two_n : 0.0;
    if (N > 0 && 2 * N <= (BigInt(1) << 24)) {
        const std::uint64_t n = static_cast<std::uint64_t>(N);
        std::vector<std::vector<Edge2>> ms(graphs.size());
        for (std::size_t e = 0; e < graphs.size(); ++e)
            for (auto [s, t] : res.matchings[e].edges)
                ms[e].emplace_back(static_cast<Vertex>(s), static_cast<Vertex>(n + t));
        res.gkst = gkst_check(ms, static_cast<std::size_t>(2 * n), res.delta_prime);
    } else {
        res.gkst_direct = true;
        res.gkst.lhs = res.delta_prime * kp;
        res.gkst.rhs = two_n > 1 ? 2.0 * std::log2(two_n) : 0.0;
        res.gkst.holds = res.gkst.lhs <= res.gkst.rhs;
        res.gkst.avg_fraction = res.delta_prime;
    }
    return res;
}

LiftCheck check_lifted_codewords(const KikuchiOperator& op, const std::vector<BipartiteMatching>& matchings,
                                 const SolutionSpace& sol) {
    if (matchings.size() != op.num_edges())
        throw std::invalid_argument("check_lifted_codewords: one matching per edge expected");
    LiftCheck res;
    const auto& heads = op.psi().heads();
    const auto& m = op.paired().matching;
    for (const auto& word : sol.basis) {
        std::vector<int> x(word.size());
        for (std::size_t v = 0; v < word.size(); ++v) x[v] = (word[v] & 1u) ? -1 : 1;
        for (std::size_t e = 0; e < matchings.size(); ++e) {
            const int want = x[heads[m[e].first]] * x[heads[m[e].second]];
            for (auto [s, t] : matchings[e].edges) {
                ++res.checked;
                if (op.lifted_sign(s, x) * op.lifted_sign(t, x) != want) ++res.violations;
            }
        }
    }
    return res;
}

}  // namespace lcc
