#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lcc/instances.hpp"
#include "lcc/types.hpp"

namespace lcc {

// Pattern Q in ([n] ∪ {*})^(t+1); kStar marks a free position. Position h
// (0-based) for h < t refers to C_{h+1}; position t refers to the tail w_t.
using Pattern = std::vector<Vertex>;

// One link (C, w) of a chain: C ∪ {w} ∈ H_{nu(prev)}.
struct Link {
    Vertex c0, c1, w;
    auto operator<=>(const Link&) const = default;
};

// Links available after vertex v, sorted by (c0, c1, w).
std::vector<std::vector<Link>> successor_links(const MatchingFamily& fam);

// All t-chains of a family, stored flat as [u, C_1, w_1, ..., C_t, w_t]
// (each C_h as two sorted vertices), in lexicographic order of that
// encoding. Immutable after construction; the containment index is built on
// first use and is safe to query from several threads.
class ChainSet {
public:
    ChainSet() = default;
    ChainSet(std::size_t n, std::size_t t, std::vector<Vertex> data);

    std::size_t n() const { return n_; }
    std::size_t t() const { return t_; }
    std::size_t width() const { return 1 + 3 * t_; }
    std::size_t size() const { return width() ? data_.size() / width() : 0; }
    const std::vector<Vertex>& data() const { return data_; }

    std::span<const Vertex> chain(std::size_t i) const {
        return {data_.data() + i * width(), width()};
    }
    Vertex head(std::size_t i) const { return data_[i * width()]; }
    Vertex tail(std::size_t i) const { return data_[i * width() + width() - 1]; }
    // Chains with head u occupy [first, second).
    std::pair<std::size_t, std::size_t> head_range(Vertex u) const {
        return {head_offsets_[u], head_offsets_[u + 1]};
    }

    std::optional<std::size_t> find(std::span<const Vertex> chain) const;
    std::vector<std::size_t> enumerate_containing(const Pattern& q) const;

private:
    void build_index() const;

    std::size_t n_ = 0, t_ = 0;
    std::vector<Vertex> data_;
    std::vector<std::size_t> head_offsets_;
    // idx[h * n + v]: chains with v in C_{h+1} (h < t) or tail v (h = t).
    // Shared between copies, which hold identical data.
    struct IndexCache {
        std::once_flag once;
        std::vector<std::vector<std::uint32_t>> idx;
    };
    std::shared_ptr<IndexCache> cache_ = std::make_shared<IndexCache>();
};

struct ChainCount {
    BigInt total;
    std::vector<BigInt> per_head;
};
ChainCount count_chains(const MatchingFamily& fam, std::size_t t);

ChainSet build_chains(const MatchingFamily& fam, std::size_t t, const Budgets& budgets = {});
// Chains restricted to the given heads (same encoding and order).
ChainSet build_chains_from(const MatchingFamily& fam, std::size_t t,
                           const std::vector<Vertex>& heads, const Budgets& budgets = {});
// Prepends every possible first link to the chains of cs.
ChainSet extend(const MatchingFamily& fam, const ChainSet& cs, const Budgets& budgets = {});

bool is_chain(const MatchingFamily& fam, std::span<const Vertex> chain);
bool contains(std::span<const Vertex> chain, const Pattern& q);

// Signed coefficient vector (mod p) of the parity check implied by a chain,
// as sorted (vertex, coefficient) pairs with nonzero coefficients.
std::vector<std::pair<Vertex, std::uint32_t>> chain_parity(const MatchingFamily& fam,
                                                           std::span<const Vertex> chain);

void write_chains(std::ostream& os, const ChainSet& cs);
std::string pattern_string(const Pattern& q);

}  // namespace lcc
