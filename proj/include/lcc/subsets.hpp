#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lcc/types.hpp"

namespace lcc {

// C(n, k) as an exact integer.
BigInt binom_big(std::uint64_t n, std::uint64_t k);
// C(n, k); throws std::overflow_error if it does not fit in 64 bits.
std::uint64_t binom(std::uint64_t n, std::uint64_t k);

// Colexicographic rank of a sorted subset: sum_i C(s_i, i+1).
std::uint64_t colex_rank(std::span<const Vertex> subset);
// Inverse of colex_rank for subsets of size k (out is resized to k).
void colex_unrank(std::uint64_t rank, std::size_t k, std::vector<Vertex>& out);

// Tuples of `slots` subsets of [n], each of size ell, ranked in mixed radix
// with base C(n, ell); slot 0 is the most significant digit.
class TupleCodec {
public:
    TupleCodec() = default;
    // Throws BudgetError("kikuchi", N, 2^63) when N does not fit.
    TupleCodec(std::size_t n, std::size_t ell, std::size_t slots);

    std::size_t n() const { return n_; }
    std::size_t ell() const { return ell_; }
    std::size_t slots() const { return slots_; }
    std::uint64_t base() const { return base_; }
    std::uint64_t size() const { return size_; }
    std::uint64_t weight(std::size_t slot) const { return weights_[slot]; }

    // sets holds slots*ell sorted vertices, slot by slot.
    std::uint64_t rank(std::span<const Vertex> sets) const;
    void unrank(std::uint64_t rank, std::vector<Vertex>& sets) const;

private:
    std::size_t n_ = 0, ell_ = 0, slots_ = 0;
    std::uint64_t base_ = 0, size_ = 0;
    std::vector<std::uint64_t> weights_;
};

// N = C(n, ell)^slots exactly.
BigInt tuple_space_size(std::size_t n, std::size_t ell, std::size_t slots);

// Calls fn(subset) for every k-subset of `pool` (pool sorted), in colex order
// of positions.
template <class Fn>
void for_each_subset(const std::vector<Vertex>& pool, std::size_t k, Fn&& fn) {
    if (k > pool.size()) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<Vertex> cur(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) cur[i] = pool[idx[i]];
        fn(static_cast<const std::vector<Vertex>&>(cur));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == pool.size() - k + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace lcc
