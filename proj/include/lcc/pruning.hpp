#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lcc/concentration.hpp"
#include "lcc/kikuchi.hpp"

namespace lcc {

// Parameters of the row-pruning threshold. m stands for delta*n (the
// matching size), so 3m = 3 delta n.
struct ThresholdParams {
    std::size_t n = 0, r = 0, t = 0, ell = 0;
    double d = 1;
    double m = 1;
};

// Δ = 9 * 2^{2r+2-2t} (ell/n)^{2r+2-t} d^t (3m)^{2r+1-t}, evaluated in log space.
double log_delta_threshold(const ThresholdParams& p);
double delta_threshold(const ThresholdParams& p);
// μ = Δ / 3.
double mu_value(const ThresholdParams& p);
// Exact versions; d and m must be integers.
Rational delta_threshold_exact(std::size_t n, std::size_t r, std::size_t t, std::size_t ell, std::uint64_t d,
                               std::uint64_t m);
Rational mu_value_exact(std::size_t n, std::size_t r, std::size_t t, std::size_t ell, std::uint64_t d,
                        std::uint64_t m);

// β = 1/(4r) and p = (1 + β) ell / n; r >= 1.
double pruning_beta(std::size_t r);
double biased_p(std::size_t n, std::size_t r, std::size_t ell);
// (2r+2) exp(-ell / (64 r^2)).
double coupling_slack(std::size_t r, std::size_t ell);

struct FeasibilityParams {
    double n = 0;
    std::size_t r = 1;
    double ell = 1;
    double d = 1;
    double delta = 0;   // δ_eff = m / n
    double gamma = 0;
    double Gamma = 1;
    double c = 1;       // constant of item (1)
};

struct FeasibilityItem {
    std::string name;
    double lhs = 0, rhs = 0;  // the item reads lhs <= rhs (item 5: lhs == rhs)
    double margin = 0;        // ln(rhs / lhs); item 5: -|ln(lhs / rhs)|
    bool holds = false;
};

struct FeasibilityReport {
    std::array<FeasibilityItem, 5> items;
    bool all = false;
};
FeasibilityReport feasibility(const FeasibilityParams& p);

// Degree polynomial Deg_{i,j} for an ordered head pair of a Ψ^(t) instance.
//
// A tuple U = (u_0..u_{r-t}, u_{r-t+1}..u_r, v_0..v_{r-t}) has u_h in C_h for
// the S-positions of the head-i chain, u = C_h \ Q_h for its R-positions and
// v_h in C'_h for the S-positions of the head-j chain. Tuple position `pos`
// lives in row slot row_slot(pos).
class DegreeContext {
public:
    DegreeContext(const XorInstance& psi, std::uint32_t i, std::uint32_t j);

    std::size_t n() const { return n_; }
    std::size_t r() const { return r_; }
    std::size_t t() const { return t_; }
    std::size_t positions() const { return 2 * r_ + 2 - t_; }
    std::size_t u_positions() const { return r_ + 1; }
    std::size_t row_slot(std::size_t pos) const;
    std::uint32_t head_i() const { return i_; }
    std::uint32_t head_j() const { return j_; }

    // One chain's candidates per position; b == kStar marks a single candidate.
    using Options = std::vector<std::array<Vertex, 2>>;
    struct PieceSides {
        std::uint32_t piece = 0;
        std::vector<Options> left;   // head i chains, r+1 positions
        std::vector<Options> right;  // head j chains, r+1-t positions
    };
    const std::vector<PieceSides>& pieces() const { return pieces_; }

    std::uint64_t chain_pairs() const;
    // |T_{i,j}| = 2^{2r+2-2t} * chain_pairs().
    BigInt num_tuples() const;
    // The multiset T_{i,j}, one tuple per entry (for oracles).
    std::vector<std::vector<Vertex>> tuples() const;

    // member[slot][v] is nonzero when v is in the slot's set.
    std::uint64_t deg(const std::vector<std::vector<char>>& member) const;
    std::uint64_t deg_row(const TupleCodec& codec, std::uint64_t rank) const;

    // Number of (U, C, C') with Z ⊆ U; Z has positions() entries, kStar = free.
    std::uint64_t deg_Z(const std::vector<Vertex>& z) const;

private:
    std::size_t n_ = 0, r_ = 0, t_ = 0;
    std::uint32_t i_ = 0, j_ = 0;
    std::vector<PieceSides> pieces_;
};

// μ_Z = p^{positions - |Z|} deg(Z).
double mu_Z(const DegreeContext& ctx, const std::vector<Vertex>& z, double p);

struct PartialsCheck {
    bool exhaustive = false;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    double max_ratio = 0;                    // max μ_Z / (μ γ^{|Z|})
    std::vector<double> max_ratio_by_size;   // indexed by |Z|
    std::vector<Vertex> worst;               // a Z attaining max_ratio
};
// Exhaustive over ([n] ∪ {*})^{positions} when positions <= 6 and n <= 30
// (or when force_exhaustive); otherwise `samples` uniform Z per size |Z|.
PartialsCheck check_partials(const DegreeContext& ctx, double mu, double gamma, double p, std::uint64_t samples = 0,
                          std::uint64_t seed = 1, const Budgets& budgets = {});

// Contexts for every matching edge of the operator in both orientations:
// element 2e is (i, j), element 2e+1 is (j, i).
std::vector<DegreeContext> degree_contexts(const KikuchiOperator& op);

struct BadRowOptions {
    bool exhaustive = true;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
};

struct BadRows {
    bool exhaustive = false;
    std::uint64_t rows = 0;       // N
    std::uint64_t examined = 0;
    std::uint64_t bad = 0;        // among examined rows
    double fraction = 0;
    double ci_low = 0, ci_high = 0;  // 99% Wilson interval (exact fraction when exhaustive)
    std::vector<char> mask;       // exhaustive only
    std::vector<std::uint64_t> ranks() const;
};

// A row S is bad when Deg_{i,j}(S) > Δ or Deg_{j,i}(P S) > Δ for some
// matching edge (i, j); P is the block swap. The set is closed under P.
BadRows find_bad_rows(const KikuchiOperator& op, double Delta, const BadRowOptions& opt = {},
                      const Budgets& budgets = {});

// The bad-row predicate evaluated on the given ranks only (for operators
// too large for a full mask; rows outside the support of A never matter).
std::vector<char> bad_among(const KikuchiOperator& op, double Delta, const std::vector<std::uint64_t>& ranks);

struct PruneResult {
    KikuchiOperator op;
    std::uint64_t bad_rows = 0;
    std::uint64_t removed = 0;        // entries of the A_{i,j} touching a bad row or column
    BigInt crude_bound = 0;           // 2 |B| (2 ell)^{2r+2-t}
    bool within_crude = false;
    std::uint64_t max_row_degree = 0; // over the pruned A_{i,j}
    std::uint64_t max_col_degree = 0;
};
PruneResult prune(const KikuchiOperator& op, const std::vector<char>& bad, const Budgets& budgets = {});

struct CouplingResult {
    std::uint64_t trials = 0;
    double tail_exact = 0, tail_biased = 0;  // Pr[Deg >= Δ] under D and D'
    double exact_ci_low = 0, biased_ci_high = 0;
    double slack = 0;
    bool holds = false;   // exact_ci_low <= biased_ci_high + slack
};
CouplingResult coupling_experiment(const DegreeContext& ctx, std::size_t ell, double Delta, std::uint64_t trials,
                                   std::uint64_t seed);

}  // namespace lcc
