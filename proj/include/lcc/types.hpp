#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lcc {

using Vertex = std::uint32_t;
inline constexpr Vertex kStar = std::numeric_limits<Vertex>::max();

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr const char* kVersion = "0.3.1";

// Resource caps. Every stage that could blow up checks its exact requirement
// against one of these before allocating.
struct Budgets {
    std::uint64_t max_chains = 20'000'000;
    std::uint64_t max_pieces = 5'000'000;
    std::uint64_t max_constraints = 20'000'000;
    std::uint64_t max_pairs = 50'000'000;
    std::uint64_t max_vector_dim = std::uint64_t{1} << 24;
    std::uint64_t max_materialize_dim = std::uint64_t{1} << 21;
    std::uint64_t max_nnz = 100'000'000;
};

class BudgetError : public std::runtime_error {
public:
    BudgetError(std::string stage, const BigInt& requested, const BigInt& limit)
        : std::runtime_error("budget exceeded in " + stage + ": requested " +
                             requested.str() + ", limit " + limit.str()),
          stage_(std::move(stage)), requested_(requested), limit_(limit) {}

    const std::string& stage() const { return stage_; }
    const BigInt& requested() const { return requested_; }
    const BigInt& limit() const { return limit_; }

private:
    std::string stage_;
    BigInt requested_;
    BigInt limit_;
};

inline void check_budget(const std::string& stage, const BigInt& requested,
                         std::uint64_t limit) {
    if (requested > limit) throw BudgetError(stage, requested, BigInt(limit));
}

}  // namespace lcc
