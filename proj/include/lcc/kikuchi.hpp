#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "lcc/formulas.hpp"
#include "lcc/linop.hpp"
#include "lcc/subsets.hpp"

namespace lcc {

// Level-ell Kikuchi matrix of a paired instance f_M^(t).
//
// Rows and columns are (2r+2-t)-tuples of ell-subsets in the slot order
// S_0..S_{r-t}, S'_0..S'_{r-t}, R_1..R_t. For a constraint pair (C, C') the
// entry (S, T) is set when S_h ⊕ T_h = C_h, S'_h ⊕ T'_h = C'_h and
// R_h = {u} ∪ U, W_h = {v} ∪ U with C_{r-t+h} = {u, Q_h}, C'_{r-t+h} = {v, Q_h}.
//
// The operator is A = sum_e w_e A_e over the matching edges e = (i, j), with
// weights w_e (default 1; b_i b_j after with_signs). Rows and columns in the
// pruned set are treated as zero.
class KikuchiOperator : public LinearOperator {
public:
    KikuchiOperator(std::shared_ptr<const PairedInstance> pi, std::size_t ell, const Budgets& budgets = {});

    std::uint64_t rows() const override { return codec_.size(); }
    std::uint64_t cols() const override { return codec_.size(); }
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_transpose(std::span<const double> x, std::span<double> y) const override;

    const PairedInstance& paired() const { return *pi_; }
    const XorInstance& psi() const { return *pi_->psi; }
    std::size_t n() const { return codec_.n(); }
    std::size_t ell() const { return codec_.ell(); }
    std::size_t r() const { return r_; }
    std::size_t t() const { return t_; }
    std::size_t slots() const { return codec_.slots(); }
    const TupleCodec& codec() const { return codec_; }
    std::uint64_t size() const { return codec_.size(); }
    std::size_t num_edges() const { return pi_->matching.size(); }
    std::size_t num_pairs() const { return pi_->pairs.size(); }
    const std::vector<double>& edge_weights() const { return weights_; }

    // Closed-form entries per constraint pair: 2^{2r+2-2t} C(n-2, ell-1)^{2r+2-t}.
    BigInt D() const;
    // Exact entries of one pair; differs from D() only for pairs where u = v
    // in some R-slot (then that slot contributes C(n-1, ell-1)).
    BigInt pair_entry_count(std::size_t pair) const;
    bool degenerate(std::size_t pair) const;
    std::size_t degenerate_pairs() const;

    // Calls fn(row, col) for each nonzero of a single pair (ignores pruning).
    template <class Fn>
    void for_each_entry(std::size_t pair, Fn&& fn) const;

    // Edge index owning a pair.
    std::size_t edge_of_pair(std::size_t pair) const;

    KikuchiOperator with_signs(const std::vector<int>& b) const;
    KikuchiOperator with_edge_weights(std::vector<double> w) const;
    // Only edge e, with weight 1 (A_{i,j}).
    KikuchiOperator single_edge(std::size_t e) const;
    KikuchiOperator with_pruned(std::shared_ptr<const std::vector<char>> bad) const;
    const std::vector<char>* pruned() const { return bad_.get(); }

    // Weighted, pruned matrix. Guarded by max_materialize_dim and max_nnz.
    SparseMatrix materialize(const Budgets& budgets = {}) const;

    // Swaps the S-block and the S'-block of a row index.
    std::uint64_t block_swap(std::uint64_t rank) const;
    // x'_S = prod_h x_{S_h} x_{S'_h} prod_h x_{R_h}, by unranking.
    int lifted_sign(std::uint64_t rank, const std::vector<int>& x) const;

    // Chains behind a pair, and per-slot (S, T) vertex sets for inspection.
    struct SlotSpec {
        bool r_slot = false;
        Vertex a = 0, b = 0;  // C_h = {a, b} for S-slots; (u, v) for R-slots
    };
    std::vector<SlotSpec> slot_specs(std::size_t pair) const;

private:
    void slot_lists(std::size_t pair, std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>>& out) const;
    void accumulate(std::span<const double> x, std::span<double> y, bool transpose) const;

    std::shared_ptr<const PairedInstance> pi_;
    std::size_t r_ = 0, t_ = 0;
    TupleCodec codec_;
    Budgets budgets_;
    std::vector<double> weights_;
    std::vector<std::size_t> pair_edge_;
    std::shared_ptr<const std::vector<char>> bad_;
};

template <class Fn>
void KikuchiOperator::for_each_entry(std::size_t pair, Fn&& fn) const {
    std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> lists;
    slot_lists(pair, lists);
    const std::size_t s = lists.size();
    for (const auto& l : lists)
        if (l.empty()) return;
    std::vector<std::size_t> idx(s, 0);
    while (true) {
        std::uint64_t row = 0, col = 0;
        for (std::size_t h = 0; h < s; ++h) {
            row += lists[h][idx[h]].first;
            col += lists[h][idx[h]].second;
        }
        fn(row, col);
        std::size_t h = s;
        while (h > 0) {
            if (++idx[h - 1] < lists[h - 1].size()) break;
            idx[h - 1] = 0;
            --h;
        }
        if (h == 0) return;
    }
}

struct QuadFormCheck {
    std::int64_t lhs = 0;         // x'^T A x'
    BigInt rhs = 0;               // D f_M(x)
    BigInt rhs_exact = 0;         // sum over pairs of (entries of the pair) * its signed monomial
    bool equal = false;           // lhs == rhs
    bool equal_exact = false;     // lhs == rhs_exact
    std::size_t degenerate_pairs = 0;
};

// Both sides computed exactly from scratch: the left side enumerates every
// nonzero and unranks its row and column.
QuadFormCheck quadratic_form_check(const KikuchiOperator& op, const std::vector<int>& x,
                                   const std::vector<int>& b);

struct InftyToOne {
    double sigma = 0;                // largest singular value
    double upper = 0;                // sqrt(rows * cols) * sigma
    std::optional<double> exact;     // max_{x,y in ±1} x^T A y when computable
    bool converged = false;
};

// Exact when every connected component of the bipartite support has a side
// with at most exact_cap vertices (diagonal and matching-like matrices are
// the common case); always returns the spectral upper bound.
InftyToOne infty_to_1(const SparseMatrix& a, std::size_t exact_cap = 20, double tol = 1e-10,
                      std::uint64_t seed = 1);
// Exhaustive two-sided maximum; requires min(rows, cols) <= 24.
double infty_to_1_exhaustive(const SparseMatrix& a);

// Basic even-q Kikuchi matrix A = sum_i b_i sum_{C in H_i} A_C at level ell.
struct EvenQReport {
    std::size_t n = 0, q = 0, ell = 0;
    BigInt N = 0;
    BigInt D = 0;                 // C(n-q, ell-q/2) C(q, q/2)
    SparseMatrix matrix;
    std::size_t hyperedges = 0;   // sum_i |H_i|
    double avg_degree = 0;        // hyperedges * D / N
    double sigma = 0;             // ||A||_2
    double lhs = 0;               // Φ_b(x) at the supplied x
    double rhs = 0;               // N ||A||_2 / D
    bool holds = false;
};
EvenQReport build_basic_even_q(std::size_t n, std::size_t q,
                               const std::vector<std::vector<std::vector<Vertex>>>& hyperedges,
                               const std::vector<int>& b, const std::vector<int>& x, std::size_t ell,
                               const Budgets& budgets = {});

}  // namespace lcc
