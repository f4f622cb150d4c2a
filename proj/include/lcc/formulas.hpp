#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "lcc/partition.hpp"
#include "lcc/rng.hpp"

namespace lcc {

// A family of XOR constraints b_{head} * y_{piece} * prod_{v in support} x_v
// built from (r+1)-chains. Φ has no piece labels; Ψ^(t) carries the piece of
// each chain's r-suffix and drops that piece's pattern from the support.
// Only F2 families are supported.
class XorInstance {
public:
    std::size_t n() const { return n_; }
    std::size_t r() const { return r_; }
    std::size_t k() const { return heads_.size(); }
    // t of a Ψ^(t) instance, or nullopt for Φ.
    std::optional<std::size_t> t() const { return t_; }
    const std::vector<Vertex>& heads() const { return heads_; }
    std::size_t size() const { return head_of_.size(); }

    std::span<const Vertex> support(std::size_t c) const {
        return {vars_.data() + offsets_[c], offsets_[c + 1] - offsets_[c]};
    }
    std::uint32_t head_index(std::size_t c) const { return head_of_[c]; }
    // Piece index into pieces(), or -1 for Φ.
    std::int32_t piece(std::size_t c) const { return piece_of_.empty() ? -1 : piece_of_[c]; }
    // The (r+1)-chain behind constraint c.
    std::span<const Vertex> chain(std::size_t c) const { return chains_->chain(chain_of_[c]); }
    std::uint32_t chain_id(std::size_t c) const { return chain_of_[c]; }
    const ChainSet& chains() const { return *chains_; }
    // Patterns of every piece of the source partition (indexed like its pieces).
    const std::vector<Pattern>& pieces() const { return patterns_; }

private:
    friend XorInstance build_phi(const MatchingFamily&, std::size_t, const std::vector<Vertex>&,
                                 const Budgets&);
    friend XorInstance build_psi(const XorInstance&, const ChainSet&, const Partition&, std::size_t);

    std::size_t n_ = 0, r_ = 0;
    std::optional<std::size_t> t_;
    std::vector<Vertex> heads_;
    std::shared_ptr<const ChainSet> chains_;
    std::vector<std::uint32_t> chain_of_;
    std::vector<std::uint32_t> head_of_;
    std::vector<std::int32_t> piece_of_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> vars_;
    std::vector<Pattern> patterns_;
};

// Φ_b over (r+1)-chains whose head is in `heads`; head_index refers to the
// position in `heads`.
XorInstance build_phi(const MatchingFamily& fam, std::size_t r, const std::vector<Vertex>& heads,
                      const Budgets& budgets = {});
// Heads 0..k-1.
XorInstance build_phi(const MatchingFamily& fam, std::size_t r, std::size_t k,
                      const Budgets& budgets = {});

// Ψ^(t): the constraints of phi whose r-suffix lies in a piece with |Q| = t+1.
// cs is the r-chain set the partition refers to.
XorInstance build_psi(const XorInstance& phi, const ChainSet& cs, const Partition& part,
                      std::size_t t);

// x_Q for every piece pattern.
std::vector<int> derived_y(const XorInstance& inst, const std::vector<int>& x);

// Signed count (satisfied minus violated). y empty means y = x_Q.
std::int64_t eval_value(const XorInstance& inst, const std::vector<int>& b,
                        const std::vector<int>& x, const std::vector<int>& y = {});

struct BruteForceResult {
    std::int64_t value = 0;
    std::vector<int> argmax;  // ±1 maximizer with the smallest bit index (bit v set <=> x_v = -1)
};
inline constexpr std::size_t kBruteForceMaxN = 22;
// Exact max over x in {±1}^n with y = x_Q.
BruteForceResult brute_force_val(const XorInstance& inst, const std::vector<int>& b);

// Max of f(x) = sum_masks c_mask (-1)^{popcount(mask & x)} over x, where x
// bit v set means x_v = -1. n <= kBruteForceMaxN.
BruteForceResult max_walsh(std::size_t n, const std::vector<std::pair<std::uint64_t, std::int64_t>>& terms);

// Directed matching on head indices [k].
using HeadMatching = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
HeadMatching default_matching(std::size_t k);
HeadMatching random_matching(std::size_t k, Rng& rng);

struct PairedInstance {
    std::shared_ptr<const XorInstance> psi;
    HeadMatching matching;
    // Constraint pairs (a from head i, b from head j, same piece), grouped by
    // matching edge: edge e owns pairs[edge_offsets[e] .. edge_offsets[e+1]).
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<std::size_t> edge_offsets{0};
    std::size_t num_pieces_t = 0;  // |P_t|
    BigInt magnitude_bound;        // (3m)^{r-t} d^t, bound on |Ψ_{i,Q,p}| for |Q| = t+1
    BigInt diagonal_bound;         // k (|P_t| (3m)^{r-t} d^t)^2
};

// Number of terms of every Ψ_{i,Q,p}, keyed by (head index, piece index).
std::vector<std::vector<std::uint64_t>> psi_term_counts(const XorInstance& psi);

PairedInstance cross_terms(std::shared_ptr<const XorInstance> psi, const HeadMatching& m, std::uint64_t d,
                           std::size_t m_max, const Budgets& budgets = {});

// f_M(x) = sum_{(i,j)} b_i b_j sum_pairs x^{supp a} x^{supp b}.
std::int64_t eval_paired(const PairedInstance& pi, const std::vector<int>& b,
                         const std::vector<int>& x);
BruteForceResult brute_force_paired(const PairedInstance& pi, const std::vector<int>& b);

std::vector<int> random_signs(std::size_t k, Rng& rng);

}  // namespace lcc
