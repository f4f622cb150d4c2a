#pragma once

#include <cstdint>
#include <vector>

#include "lcc/instances.hpp"
#include "lcc/kikuchi.hpp"
#include "lcc/linop.hpp"
#include "lcc/matching.hpp"

namespace lcc {

struct SpectralReport {
    double sigma = 0;
    double residual = 0;
    std::size_t iterations = 0;
    bool converged = false;
    BigInt N = 0;
    double n_sigma = 0;       // N * sigma
    double khintchine = 0;    // sqrt(2 sigma2 ln(d1 + d2)) for the sign ensemble
    double empirical = 0;     // mean ||sum b_e X_e|| over the trials
};

// Largest singular value by power iteration on A^T A.
PowerResult spectral_norm(const LinearOperator& a, double tol = 1e-6, std::size_t max_iter = 20000,
                          std::uint64_t seed = 1);

// sqrt(2 sigma2 ln(d1 + d2)), natural log.
double khintchine_bound(double sigma2, double d1, double d2);

// max(||sum X X^T||, ||sum X^T X||); all matrices share one shape.
double matrix_variance(const std::vector<SparseMatrix>& xs, double tol = 1e-9, std::uint64_t seed = 1);

// sum_e w_e X_e as one sparse matrix.
SparseMatrix signed_sum(const std::vector<SparseMatrix>& xs, const std::vector<double>& w);

struct RademacherResult {
    std::size_t trials = 0;
    double mean = 0;     // mean of ||sum b_e X_e||_2 over seeded sign draws
    double max = 0;
    double sigma2 = 0;
    double bound = 0;    // khintchine_bound(sigma2, rows, cols)
    bool holds = false;  // mean <= bound
};
RademacherResult empirical_rademacher(const std::vector<SparseMatrix>& xs, std::size_t trials, std::uint64_t seed,
                                      double tol = 1e-9);

struct LdcExtraction {
    std::vector<BipartiteMatching> matchings;   // G'' per graph
    std::vector<std::uint64_t> edges;           // |E(G')| per graph, with multiplicity
    std::size_t max_degree = 0;
    bool size_ok = true;                        // |G''| >= |E(G')| / Δ everywhere
    BigInt N = 0;                               // each side of G' has N vertices
    double matched = 0;                         // sum |G''|
    double delta_prime = 0;                     // (1/k') sum |G''| / (2N)
    GkstResult gkst;                            // on 2N vertices with δ'
    bool gkst_direct = false;                   // 2N too large to enumerate, evaluated from the sizes
};

// Graphs are the pruned A_{i,j}, rows on the left and columns on the right.
// Throws std::runtime_error when some degree exceeds Δ.
LdcExtraction extract_2ldc(const std::vector<BipartiteGraph>& graphs, double Delta, const BigInt& N);

struct LiftCheck {
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
};
// For every basis codeword x and matched (S, T) of edge e = (i, j):
// x'_S x'_T = x_{head i} x_{head j}. matchings[e] belongs to edge e of op.
LiftCheck check_lifted_codewords(const KikuchiOperator& op, const std::vector<BipartiteMatching>& matchings,
                                 const SolutionSpace& sol);

}  // namespace lcc
