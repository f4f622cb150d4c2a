#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lcc/rng.hpp"
#include "lcc/types.hpp"

namespace lcc {

// r groups of n Bernoulli variables y^{(g)}_j; each monomial takes at most one
// variable per group (kStar = none) and has a nonnegative coefficient.
struct PartitePolynomial {
    std::size_t r = 0, n = 0;
    struct Monomial {
        double coef = 0;
        std::vector<Vertex> index;  // r entries
    };
    std::vector<Monomial> monomials;

    // Throws std::invalid_argument on a malformed monomial.
    void validate() const;
    // y[g][j] in {0, 1}.
    double eval(const std::vector<std::vector<char>>& y) const;
};

// Uniform random monomials with coefficient 1; each group is present with
// probability `fill`.
PartitePolynomial random_partite(std::size_t r, std::size_t n, std::size_t monomials, double fill,
                                 std::uint64_t seed);

// α = exp(-½ β² / (2γ + ⅓ γ β)).
double partite_alpha(double beta, double gamma);

struct TailBound {
    double log_alpha = 0;
    double log_bound = 0;   // ln(r (n+1)^r α); -inf when r = 0
    double bound = 0;       // min(1, exp(log_bound))
    double threshold = 0;   // (1 + β)^r μ
};
TailBound partite_tail_bound(double mu, double gamma, double beta, std::size_t r, std::size_t n);

// A set of (group, index) variables.
using PartialSet = std::vector<std::pair<std::size_t, Vertex>>;

// μ_Z = sum over monomials containing Z of coef p^{|monomial| - |Z|}.
// Throws when Z has two indices in one group.
Rational exact_partials(const PartitePolynomial& P, const Rational& p, const PartialSet& z);
double partials(const PartitePolynomial& P, double p, const PartialSet& z);

struct HypothesisCheck {
    std::uint64_t checked = 0;   // distinct nonzero Z examined
    double max_ratio = 0;        // max μ_Z / (μ γ^{|Z|})
    bool holds = false;          // max_ratio <= 1
};
// Every Z with μ_Z > 0 is a subset of some monomial, so those are enumerated.
HypothesisCheck check_hypothesis(const PartitePolynomial& P, double p, double mu, double gamma);
// Smallest μ for which the hypothesis holds at this γ.
double calibrate_mu(const PartitePolynomial& P, double p, double gamma);

struct McEstimate {
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double mean = 0;     // tail frequency, or the sample mean for mc_partial
    double stderr_ = 0;  // binomial / sample standard error
    double ci_low = 0, ci_high = 0;
};
// Pr[P(y) >= threshold] under p-biased y.
McEstimate mc_tail(const PartitePolynomial& P, double p, double threshold, std::uint64_t trials, std::uint64_t seed);
// Monte Carlo estimate of μ_Z.
McEstimate mc_partial(const PartitePolynomial& P, double p, const PartialSet& z, std::uint64_t trials,
                      std::uint64_t seed);

// 99% Wilson score interval for k successes in n trials.
std::pair<double, double> wilson99(std::uint64_t k, std::uint64_t n);

// exp(-½ t² / (σ² + ⅓ M t)).
double bernstein(double t, double sigma2, double M);
// exp(-δ² μ / (2 + δ)).
double chernoff(double delta, double mu);

}  // namespace lcc
