#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace lcc {

std::uint64_t splitmix64(std::uint64_t x);

// Stable sub-seed for a named stream; independent of thread count and of
// the order in which other streams are consumed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index = 0);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    // Uniform double in [0, 1) with 53 random bits.
    double uniform();

    bool bernoulli(double p) { return uniform() < p; }

    int sign() { return (next() >> 63) ? -1 : 1; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Sorted uniformly random k-subset of {0, ..., n-1} (Floyd).
    std::vector<std::uint32_t> subset(std::uint32_t n, std::uint32_t k);

private:
    std::mt19937_64 eng_;
};

}  // namespace lcc
