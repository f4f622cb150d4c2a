#include "lcc/subsets.hpp"

#include <limits>
#include <stdexcept>

namespace lcc {

BigInt binom_big(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("binom: overflow");
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t colex_rank(std::span<const Vertex> s) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < s.size(); ++i) r += binom(s[i], i + 1);
    return r;
}

void colex_unrank(std::uint64_t rank, std::size_t k, std::vector<Vertex>& out) {
    out.resize(k);
    for (std::size_t i = k; i > 0; --i) {
        // Largest v with C(v, i) <= rank.
        std::uint64_t v = i - 1;
        while (binom(v + 1, i) <= rank) ++v;
        out[i - 1] = static_cast<Vertex>(v);
        rank -= binom(v, i);
    }
}

BigInt tuple_space_size(std::size_t n, std::size_t ell, std::size_t slots) {
    return boost::multiprecision::pow(binom_big(n, ell), static_cast<unsigned>(slots));
}

TupleCodec::TupleCodec(std::size_t n, std::size_t ell, std::size_t slots) : n_(n), ell_(ell), slots_(slots) {
    if (ell == 0 || ell > n) throw std::invalid_argument("TupleCodec: need 1 <= ell <= n");
    BigInt total = tuple_space_size(n, ell, slots);
    const BigInt limit = BigInt(1) << 63;
    if (total > limit) throw BudgetError("kikuchi", total, limit);
    base_ = binom(n, ell);
    size_ = static_cast<std::uint64_t>(total);
    weights_.assign(slots, 1);
    for (std::size_t s = slots; s-- > 1;) weights_[s - 1] = weights_[s] * base_;
}

std::uint64_t TupleCodec::rank(std::span<const Vertex> sets) const {
    if (sets.size() != slots_ * ell_) throw std::invalid_argument("TupleCodec::rank: wrong length");
    std::uint64_t r = 0;
    for (std::size_t s = 0; s < slots_; ++s) r += colex_rank(sets.subspan(s * ell_, ell_)) * weights_[s];
    return r;
}

void TupleCodec::unrank(std::uint64_t rank, std::vector<Vertex>& sets) const {
    if (rank >= size_) throw std::out_of_range("TupleCodec::unrank: rank out of range");
    sets.resize(slots_ * ell_);
    std::vector<Vertex> one;
    for (std::size_t s = 0; s < slots_; ++s) {
        colex_unrank(rank / weights_[s], ell_, one);
        rank %= weights_[s];
        std::copy(one.begin(), one.end(), sets.begin() + s * ell_);
    }
}

}  // namespace lcc
