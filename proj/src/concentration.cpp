#include "lcc/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "lcc/parallel.hpp"

namespace lcc {

namespace {

constexpr double kZ99 = 2.5758293035489004;
constexpr std::uint64_t kTrialBlock = 4096;

void draw(Rng& rng, double p, std::vector<std::vector<char>>& y) {
    for (auto& g : y)
        for (auto& v : g) v = rng.bernoulli(p);
}

// Sorted by group; rejects repeated groups and out-of-range entries.
PartialSet normalize(const PartitePolynomial& P, PartialSet z) {
    std::sort(z.begin(), z.end());
    for (std::size_t a = 0; a < z.size(); ++a) {
        if (z[a].first >= P.r || z[a].second >= P.n)
            throw std::invalid_argument("partials: Z entry out of range");
        if (a > 0 && z[a].first == z[a - 1].first)
            throw std::invalid_argument("partials: Z has two indices in group " + std::to_string(z[a].first));
    }
    return z;
}

bool contains(const PartitePolynomial::Monomial& m, const PartialSet& z) {
    for (auto [g, j] : z)
        if (m.index[g] != j) return false;
    return true;
}

std::size_t degree(const PartitePolynomial::Monomial& m) {
    return static_cast<std::size_t>(std::count_if(m.index.begin(), m.index.end(), [](Vertex v) { return v != kStar; }));
}

// Runs fn(rng, acc) over trial blocks; acc holds per-block (sum, sum of squares, hits).
template <class Fn>
McEstimate run_blocks(std::uint64_t trials, std::uint64_t seed, const char* label, Fn&& fn) {
    const std::size_t nb = static_cast<std::size_t>((trials + kTrialBlock - 1) / kTrialBlock);
    std::vector<double> sum(nb, 0), sq(nb, 0);
    std::vector<std::uint64_t> hits(nb, 0);
    for_blocks(nb, default_threads(), [&](std::size_t b) {
        Rng rng(derive_seed(seed, label, b));
        const std::uint64_t cnt = std::min<std::uint64_t>(kTrialBlock, trials - b * kTrialBlock);
        for (std::uint64_t it = 0; it < cnt; ++it) {
            auto [v, hit] = fn(rng);
            sum[b] += v;
            sq[b] += v * v;
            hits[b] += hit;
        }
    });
    McEstimate e;
    e.trials = trials;
    double s = 0, s2 = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        s += sum[b];
        s2 += sq[b];
        e.hits += hits[b];
    }
    if (trials == 0) return e;
    const double t = static_cast<double>(trials);
    e.mean = s / t;
    const double var = std::max(0.0, s2 / t - e.mean * e.mean);
    e.stderr_ = std::sqrt(var / t);
    return e;
}

}  // namespace

void PartitePolynomial::validate() const {
    for (const auto& m : monomials) {
        if (m.index.size() != r) throw std::invalid_argument("PartitePolynomial: monomial needs one entry per group");
        if (!(m.coef >= 0)) throw std::invalid_argument("PartitePolynomial: negative coefficient");
        for (Vertex v : m.index)
            if (v != kStar && v >= n) throw std::invalid_argument("PartitePolynomial: index out of range");
    }
}

double PartitePolynomial::eval(const std::vector<std::vector<char>>& y) const {
    double s = 0;
    for (const auto& m : monomials) {
        bool on = true;
        for (std::size_t g = 0; g < r && on; ++g)
            if (m.index[g] != kStar && !y[g][m.index[g]]) on = false;
        if (on) s += m.coef;
    }
    return s;
}

PartitePolynomial random_partite(std::size_t r, std::size_t n, std::size_t monomials, double fill,
                                 std::uint64_t seed) {
    PartitePolynomial P;
    P.r = r;
    P.n = n;
    Rng rng(derive_seed(seed, "random_partite"));
    for (std::size_t a = 0; a < monomials; ++a) {
        PartitePolynomial::Monomial m;
        m.coef = 1;
        m.index.assign(r, kStar);
        for (std::size_t g = 0; g < r; ++g)
            if (rng.bernoulli(fill)) m.index[g] = static_cast<Vertex>(rng.below(n));
        P.monomials.push_back(std::move(m));
    }
    return P;
}

double partite_alpha(double beta, double gamma) {
    if (gamma <= 0) return 0.0;
    return std::exp(-0.5 * beta * beta / (2 * gamma + gamma * beta / 3));
}

TailBound partite_tail_bound(double mu, double gamma, double beta, std::size_t r, std::size_t n) {
    TailBound tb;
    tb.threshold = std::pow(1 + beta, static_cast<double>(r)) * mu;
    tb.log_alpha = gamma > 0 ? -0.5 * beta * beta / (2 * gamma + gamma * beta / 3)
                             : -std::numeric_limits<double>::infinity();
    if (r == 0) {
        tb.log_bound = -std::numeric_limits<double>::infinity();
        tb.bound = 0;
        return tb;
    }
    tb.log_bound = std::log(static_cast<double>(r)) + static_cast<double>(r) * std::log(static_cast<double>(n) + 1) +
                   tb.log_alpha;
    tb.bound = tb.log_bound >= 0 ? 1.0 : std::exp(tb.log_bound);
    return tb;
}

Rational exact_partials(const PartitePolynomial& P, const Rational& p, const PartialSet& z0) {
    const PartialSet z = normalize(P, z0);
    Rational total = 0;
    for (const auto& m : P.monomials) {
        if (!contains(m, z)) continue;
        Rational term(m.coef);  // exact binary value of the double
        for (std::size_t e = degree(m) - z.size(); e > 0; --e) term *= p;
        total += term;
    }
    return total;
}

double partials(const PartitePolynomial& P, double p, const PartialSet& z0) {
    const PartialSet z = normalize(P, z0);
    double total = 0;
    for (const auto& m : P.monomials)
        if (contains(m, z)) total += m.coef * std::pow(p, static_cast<double>(degree(m) - z.size()));
    return total;
}

namespace {

// μ_Z for every Z that is a subset of some monomial.
std::map<PartialSet, double> all_partials(const PartitePolynomial& P, double p) {
    std::map<PartialSet, double> mu;
    for (const auto& m : P.monomials) {
        std::vector<std::pair<std::size_t, Vertex>> vars;
        for (std::size_t g = 0; g < P.r; ++g)
            if (m.index[g] != kStar) vars.emplace_back(g, m.index[g]);
        const std::size_t deg = vars.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << deg); ++mask) {
            PartialSet z;
            for (std::size_t a = 0; a < deg; ++a)
                if (mask >> a & 1) z.push_back(vars[a]);
            mu[z] += m.coef * std::pow(p, static_cast<double>(deg - z.size()));
        }
    }
    return mu;
}

}  // namespace

HypothesisCheck check_hypothesis(const PartitePolynomial& P, double p, double mu, double gamma) {
    P.validate();
    HypothesisCheck h;
    for (const auto& [z, v] : all_partials(P, p)) {
        ++h.checked;
        const double cap = mu * std::pow(gamma, static_cast<double>(z.size()));
        const double ratio = cap > 0 ? v / cap : (v > 0 ? std::numeric_limits<double>::infinity() : 0.0);
        h.max_ratio = std::max(h.max_ratio, ratio);
    }
    h.holds = h.max_ratio <= 1 + 1e-12;
    return h;
}

double calibrate_mu(const PartitePolynomial& P, double p, double gamma) {
    P.validate();
    double mu = 0;
    for (const auto& [z, v] : all_partials(P, p)) mu = std::max(mu, v / std::pow(gamma, static_cast<double>(z.size())));
    return mu;
}

McEstimate mc_tail(const PartitePolynomial& P, double p, double threshold, std::uint64_t trials, std::uint64_t seed) {
    P.validate();
    McEstimate e = run_blocks(trials, seed, "mc_tail", [&](Rng& rng) {
        thread_local std::vector<std::vector<char>> y;
        y.assign(P.r, std::vector<char>(P.n, 0));
        draw(rng, p, y);
        const bool hit = P.eval(y) >= threshold;
        return std::pair<double, bool>(hit ? 1.0 : 0.0, hit);
    });
    std::tie(e.ci_low, e.ci_high) = wilson99(e.hits, e.trials);
    return e;
}

McEstimate mc_partial(const PartitePolynomial& P, double p, const PartialSet& z0, std::uint64_t trials,
                      std::uint64_t seed) {
    P.validate();
    const PartialSet z = normalize(P, z0);
    std::vector<const PartitePolynomial::Monomial*> sub;
    for (const auto& m : P.monomials)
        if (contains(m, z)) sub.push_back(&m);
    McEstimate e = run_blocks(trials, seed, "mc_partial", [&](Rng& rng) {
        thread_local std::vector<std::vector<char>> y;
        y.assign(P.r, std::vector<char>(P.n, 0));
        draw(rng, p, y);
        for (auto [g, j] : z) y[g][j] = 1;
        double v = 0;
        for (const auto* m : sub) {
            bool on = true;
            for (std::size_t g = 0; g < P.r && on; ++g)
                if (m->index[g] != kStar && !y[g][m->index[g]]) on = false;
            if (on) v += m->coef;
        }
        return std::pair<double, bool>(v, false);
    });
    e.ci_low = e.mean - kZ99 * e.stderr_;
    e.ci_high = e.mean + kZ99 * e.stderr_;
    return e;
}

std::pair<double, double> wilson99(std::uint64_t k, std::uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    const double z = kZ99;
    const double nn = static_cast<double>(n), ph = static_cast<double>(k) / nn;
    const double den = 1 + z * z / nn;
    const double center = (ph + z * z / (2 * nn)) / den;
    const double half = z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn)) / den;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double bernstein(double t, double sigma2, double M) {
    const double den = sigma2 + M * t / 3;
    if (den <= 0) return t > 0 ? 0.0 : 1.0;
    return std::exp(-0.5 * t * t / den);
}

double chernoff(double delta, double mu) { return std::exp(-delta * delta * mu / (2 + delta)); }

}  // namespace lcc
