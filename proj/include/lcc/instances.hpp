#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcc/types.hpp"

namespace lcc {

using Triple = std::array<Vertex, 3>;

// H_1..H_n of a code in normal form. Each triple is stored sorted and each
// H_u is kept in lexicographic order. The negation map nu is the identity for
// F2 families and u -> -u for lifted ones.
class MatchingFamily {
public:
    MatchingFamily() = default;
    MatchingFamily(std::size_t n, std::vector<std::vector<Triple>> matchings,
                   std::vector<Vertex> negation = {}, unsigned field_char = 2);

    std::size_t n() const { return n_; }
    unsigned field_char() const { return field_char_; }
    const std::vector<Triple>& edges(Vertex u) const { return matchings_[u]; }
    const std::vector<std::vector<Triple>>& matchings() const { return matchings_; }
    Vertex negate(Vertex u) const { return negation_.empty() ? u : negation_[u]; }
    const std::vector<Vertex>& negation() const { return negation_; }
    bool identity_negation() const { return negation_.empty(); }

    std::size_t edge_count() const;
    std::size_t min_matching_size() const;
    std::size_t max_matching_size() const;
    bool uniform() const { return min_matching_size() == max_matching_size(); }
    double delta_eff() const;

    // Keeps the first m edges of every H_u (canonical order).
    MatchingFamily truncated(std::size_t m) const;

    bool operator==(const MatchingFamily& o) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::vector<Triple>> matchings_;
    std::vector<Vertex> negation_;  // empty means identity
    unsigned field_char_ = 2;
};

struct SolutionSpace {
    std::size_t n = 0;
    unsigned field_char = 2;
    std::size_t dimension = 0;
    // Systematic basis: basis[i] is 1 on information_set[i] and 0 on the
    // other information-set coordinates.
    std::vector<std::vector<std::uint32_t>> basis;
    std::vector<Vertex> information_set;
};

// Codeword with x_{information_set[i]} = message[i] (mod p).
std::vector<std::uint32_t> encode(const SolutionSpace& sol,
                                  const std::vector<std::uint32_t>& message);

// F2 codeword for a sign vector indexed like `heads` (a subset of the
// information set), returned in +-1 form. Information coordinates outside
// heads are set to +1.
std::vector<int> encode_signs(const SolutionSpace& sol, const std::vector<Vertex>& heads,
                              const std::vector<int>& b);

MatchingFamily gen_random_matchings(std::size_t n, std::size_t m, std::uint64_t seed);

struct FlatLcc {
    MatchingFamily family;
    SolutionSpace solutions;  // affine functions on F2^mdim
};
FlatLcc gen_flat_lcc(unsigned mdim);

// Random family whose solution space contains a planted k-dimensional code.
// Column g_v in F2^k is drawn per vertex; each H_u takes m disjoint triples
// with g_a + g_b + g_c = g_u. Throws if some H_u cannot be filled.
struct PlantedLcc {
    MatchingFamily family;
    std::vector<std::uint32_t> columns;  // g_v as bit masks
};
PlantedLcc gen_planted(std::size_t n, std::size_t m, unsigned k, std::uint64_t seed);

// Adversarial family for the regular partition: `heavy` vertices all carry
// an edge containing the pair {0, 1}, on top of random filler edges.
MatchingFamily gen_heavy_pair(std::size_t n, std::size_t m, std::size_t heavy,
                              std::uint64_t seed);

SolutionSpace solution_space(const MatchingFamily& fam);

struct HeavyPair {
    std::size_t d_max = 0;
    std::optional<std::pair<Vertex, Vertex>> witness;
};
HeavyPair heavy_pair_degree(const MatchingFamily& fam);

// A 3-query constraint x_u = a1 x_v1 + a2 x_v2 + a3 x_v3 over F_q.
struct FieldConstraint {
    Vertex u;
    std::array<std::pair<Vertex, std::uint32_t>, 3> terms;
};
struct FieldCode {
    std::size_t n = 0;
    unsigned q = 3;
    std::vector<FieldConstraint> constraints;
};

// Lifted vertex (u, alpha) with alpha in 1..q-1 has index u*(q-1) + alpha-1.
inline Vertex lifted_vertex(Vertex u, std::uint32_t alpha, unsigned q) {
    return static_cast<Vertex>(u * (q - 1) + (alpha - 1));
}
MatchingFamily lift_unit_coefficients(const FieldCode& code);
std::vector<std::uint32_t> lift_codeword(const std::vector<std::uint32_t>& x, unsigned q);

bool is_prime(unsigned q);

using Edge2 = std::pair<Vertex, Vertex>;
struct GkstResult {
    bool holds = false;
    double lhs = 0;  // delta * k
    double rhs = 0;  // 2 log2 n
    double avg_fraction = 0;  // (1/k) sum |G_i| / n
};
GkstResult gkst_check(const std::vector<std::vector<Edge2>>& matchings, std::size_t n,
                      double delta);

struct Violation {
    std::string kind;  // arity, disjointness, constraint, negation
    Vertex u = 0;
    std::string detail;
};
struct ValidationReport {
    std::vector<Violation> violations;
    std::size_t arity = 0, disjointness = 0, constraint = 0, negation = 0;
    bool ok() const { return violations.empty(); }
};
ValidationReport validate_normal_form(const MatchingFamily& fam,
                                      const SolutionSpace* sol = nullptr);

}  // namespace lcc
