#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcc/chains.hpp"

namespace lcc {

enum class Provenance { Initialize, Extend, GreedyFix };
const char* provenance_name(Provenance p);

// Number of fixed entries of a pattern.
std::size_t pattern_size(const Pattern& q);
// Fixed entries form a suffix ending at the tail.
bool is_contiguous(const Pattern& q);

struct Piece {
    Pattern q;
    std::uint32_t p = 1;
    Provenance provenance = Provenance::Initialize;
    std::size_t level = 0;  // chain length at which the piece was created
    std::vector<std::uint32_t> chains;  // ids into the r-chain set, ascending
};

class Partition {
public:
    Partition() = default;
    Partition(std::size_t r, std::uint64_t d, std::size_t num_chains, std::vector<Piece> pieces);

    std::size_t r() const { return r_; }
    std::uint64_t d() const { return d_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    // Piece index of every chain, or UINT32_MAX if uncovered.
    const std::vector<std::uint32_t>& piece_of() const { return piece_of_; }
    // P_t: pieces with |Q| = t + 1.
    std::vector<std::size_t> pieces_of_size(std::size_t t) const;
    bool disjoint() const { return disjoint_; }

private:
    std::size_t r_ = 0;
    std::uint64_t d_ = 1;
    std::vector<Piece> pieces_;
    std::vector<std::uint32_t> piece_of_;
    bool disjoint_ = true;
};

// Greedy d-bounded contiguous partition of the r-chains in cs.
Partition decompose(const MatchingFamily& fam, const ChainSet& cs, std::uint64_t d,
                    const Budgets& budgets = {});
// One piece (*, ..., *, w) per tail w.
Partition trivial_partition(const ChainSet& cs);
// Image of a partition under the negation map (identity over F2).
Partition negate_partition(const MatchingFamily& fam, const ChainSet& cs, const Partition& part);

struct PartitionCheckOptions {
    std::size_t exhaustive_cap = 4;  // |Q'| up to this is enumerated exactly
    std::size_t samples = 2000;      // per piece, beyond the cap
    std::uint64_t seed = 1;
};

struct PartitionCheck {
    bool cover = true;          // (1) disjoint cover with containment
    bool contiguity = true;     // (2)
    bool singleton_p = true;    // (3) |Q| = 1 only with p = 1
    bool suffix_bound = true;   // (4) suffix counts <= d^{|Q'|-1}
    bool size_bound = true;     // (5) |P_t| d^t <= |H^(t)| and <= n (3m)^t
    bool observation = true;    // piece size bounds
    bool greedy_exact = true;   // Greedy-Fix pieces hold exactly d^{|Q|-1} chains
    std::size_t max_suffix_count = 0;
    double max_suffix_ratio = 0;  // count / d^{|Q'|-1}
    std::vector<std::size_t> pieces_per_size;  // |P_t| for t = 0..r
    std::vector<std::string> failures;
    bool ok() const {
        return cover && contiguity && singleton_p && suffix_bound && size_bound && observation &&
               greedy_exact;
    }
};

PartitionCheck verify_partition(const MatchingFamily& fam, const ChainSet& cs,
                                const Partition& part, const PartitionCheckOptions& opt = {});

nlohmann::ordered_json partition_to_json(const ChainSet& cs, const Partition& part);
std::string piece_key(const Piece& pc);

}  // namespace lcc
