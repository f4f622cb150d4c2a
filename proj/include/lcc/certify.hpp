#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcc/instances.hpp"
#include "lcc/types.hpp"

namespace lcc {

struct CertifyConfig {
    std::size_t r = 1;
    std::size_t ell = 2;
    std::uint64_t d = 4;
    std::optional<std::size_t> t;   // default: the t with the most Ψ^(t) constraints
    std::size_t trials = 32;        // sign draws for the Rademacher experiment
    std::uint64_t seed = 1;
    double tol = 1e-6;              // power iteration
    double rademacher_tol = 1e-4;   // per-draw norms of the sign experiment
    std::uint64_t check_cap = 5'000'000;  // entry count up to which exact side checks run
    Budgets budgets;
};

struct ChainItem {
    std::string name;
    double lhs = 0, rhs = 0;  // reads lhs <= rhs
    bool holds = false;
};

struct Certificate {
    nlohmann::ordered_json params;
    nlohmann::ordered_json stage_metrics;
    std::vector<ChainItem> inequality_chain;
    double k_bound = 0;
    std::size_t k_true = 0;
    bool sound = false;
    std::uint64_t seed = 0;

    nlohmann::ordered_json to_json() const;
};

// Full pipeline on an F2 family: chains, decomposition, Ψ^(t), a seeded
// head matching and sign vector, Kikuchi operator, pruning, and the 2-LDC
// reduction, which yields k_bound. Budget errors carry the stage label.
Certificate certify(const MatchingFamily& fam, const CertifyConfig& cfg = {});

nlohmann::ordered_json config_to_json(const CertifyConfig& cfg);

}  // namespace lcc
