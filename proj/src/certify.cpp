#include "lcc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "lcc/chains.hpp"
#include "lcc/formulas.hpp"
#include "lcc/kikuchi.hpp"
#include "lcc/partition.hpp"
#include "lcc/pruning.hpp"
#include "lcc/rng.hpp"
#include "lcc/spectral.hpp"

namespace lcc {

namespace {

using ojson = nlohmann::ordered_json;

// Exact integers as numbers while they fit, as decimal strings beyond.
ojson big_json(const BigInt& v) {
    if (v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max())) return static_cast<std::uint64_t>(v);
    return v.str();
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }

ChainItem exact_item(std::string name, const BigInt& lhs, const BigInt& rhs) {
    return {std::move(name), to_double(lhs), to_double(rhs), lhs <= rhs};
}

ChainItem approx_item(std::string name, double lhs, double rhs) {
    return {std::move(name), lhs, rhs, lhs <= rhs * (1 + 1e-9) + 1e-12};
}

struct EdgeEntries {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;  // with multiplicity
};

}  // namespace

ojson config_to_json(const CertifyConfig& cfg) {
    ojson j;
    j["r"] = cfg.r;
    j["ell"] = cfg.ell;
    j["d"] = cfg.d;
    j["t"] = cfg.t ? ojson(*cfg.t) : ojson(nullptr);
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["tol"] = cfg.tol;
    j["rademacher_tol"] = cfg.rademacher_tol;
    j["check_cap"] = cfg.check_cap;
    const Budgets& b = cfg.budgets;
    j["budgets"] = {{"max_chains", b.max_chains},         {"max_pieces", b.max_pieces},
                    {"max_constraints", b.max_constraints}, {"max_pairs", b.max_pairs},
                    {"max_vector_dim", b.max_vector_dim}, {"max_materialize_dim", b.max_materialize_dim},
                    {"max_nnz", b.max_nnz}};
    return j;
}

ojson Certificate::to_json() const {
    ojson j;
    j["params"] = params;
    j["stage_metrics"] = stage_metrics;
    ojson chain = ojson::array();
    for (const auto& c : inequality_chain)
        chain.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
    j["inequality_chain"] = chain;
    j["k_bound"] = k_bound;
    j["k_true"] = k_true;
    j["sound"] = sound;
    j["seed"] = seed;
    return j;
}

Certificate certify(const MatchingFamily& fam, const CertifyConfig& cfg) {
    if (fam.field_char() != 2) throw std::invalid_argument("certify: only F2 families are supported");
    if (cfg.r < 1) throw std::invalid_argument("certify: r must be at least 1");
    if (cfg.ell < 1) throw std::invalid_argument("certify: ell must be at least 1");
    if (cfg.d < 1) throw std::invalid_argument("certify: d must be at least 1");

    Certificate cert;
    cert.seed = cfg.seed;
    const std::size_t n = fam.n();
    cert.params = config_to_json(cfg);
    cert.params["n"] = n;
    cert.params["field_char"] = fam.field_char();
    cert.params["edges"] = fam.edge_count();

    const SolutionSpace sol = solution_space(fam);
    cert.k_true = sol.dimension;
    ojson& sm = cert.stage_metrics;
    sm["solution_space"] = {{"dimension", sol.dimension}};

    auto finish = [&](double bound, const std::string& route) {
        cert.k_bound = std::min(bound, static_cast<double>(n));
        sm["k_bound_route"] = route;
        cert.inequality_chain.push_back(
            approx_item("k_true <= k_bound", static_cast<double>(cert.k_true), cert.k_bound));
        cert.sound = static_cast<double>(cert.k_true) <= cert.k_bound;
        return cert;
    };

    const std::size_t k = sol.dimension;
    if (n == 0 || fam.edge_count() == 0 || k < 2) return finish(static_cast<double>(n), "trivial");
    if (2 * cfg.ell > n) throw std::invalid_argument("certify: need 2 ell <= n");

    const std::size_t r = cfg.r;
    const std::uint64_t m_max = fam.max_matching_size();
    const std::uint64_t m_min = fam.min_matching_size();

    // Chains and decomposition.
    const ChainSet cs = build_chains(fam, r, cfg.budgets);
    const Partition part = decompose(fam, cs, cfg.d, cfg.budgets);
    const PartitionCheck pcheck = verify_partition(fam, cs, part);
    sm["chains"] = {{"r_chains", cs.size()}};
    sm["partition"] = {{"pieces", part.pieces().size()},
                       {"pieces_per_size", pcheck.pieces_per_size},
                       {"verified", pcheck.ok()}};

    const std::vector<Vertex>& heads = sol.information_set;
    const XorInstance phi = build_phi(fam, r, heads, cfg.budgets);
    sm["phi"] = {{"constraints", phi.size()}, {"k", k}};

    // Value lemma at a codeword: every constraint of Φ is satisfied.
    Rng rng(derive_seed(cfg.seed, "certify_signs"));
    const std::vector<int> b = random_signs(k, rng);
    const std::vector<int> x = encode_signs(sol, heads, b);
    {
        BigInt lower = BigInt(k) * boost::multiprecision::pow(BigInt(3 * m_min), static_cast<unsigned>(r + 1));
        cert.inequality_chain.push_back(exact_item("k (3 m_min)^{r+1} <= |Phi|", lower, BigInt(phi.size())));
        const std::int64_t val = eval_value(phi, b, x);
        cert.inequality_chain.push_back(
            {"|Phi| <= val_b(Phi) at a codeword", static_cast<double>(phi.size()), static_cast<double>(val),
             val == static_cast<std::int64_t>(phi.size())});
    }

    std::vector<std::shared_ptr<XorInstance>> psis;
    ojson psi_sizes = ojson::array();
    std::size_t best = 0;
    for (std::size_t t = 0; t <= r; ++t) {
        psis.push_back(std::make_shared<XorInstance>(build_psi(phi, cs, part, t)));
        psi_sizes.push_back(psis.back()->size());
        if (psis[t]->size() > psis[best]->size()) best = t;
    }
    const std::size_t t = cfg.t.value_or(best);
    if (t > r) throw std::invalid_argument("certify: t must be at most r");
    sm["psi"] = {{"constraints_per_t", psi_sizes}, {"t", t}};
    const auto psi = psis[t];
    cert.inequality_chain.push_back(
        exact_item("|Phi| <= (r+1) |Psi^(t)|", BigInt(phi.size()), BigInt(r + 1) * BigInt(psi->size())));

    // Cauchy-Schwarz at the codeword, where b_i Ψ_{i,Q,p} y_Q is the term count.
    const HeadMatching hm = random_matching(k, rng);
    const auto pi = std::make_shared<PairedInstance>(cross_terms(psi, hm, cfg.d, m_max, cfg.budgets));
    {
        const auto counts = psi_term_counts(*psi);
        BigInt s2 = 0, cross = 0;
        const std::size_t npieces = psi->pieces().size();
        for (std::size_t q = 0; q < npieces; ++q) {
            BigInt col = 0, sq = 0;
            for (std::size_t i = 0; i < counts.size(); ++i) {
                const std::uint64_t c = q < counts[i].size() ? counts[i][q] : 0;
                col += c;
                sq += BigInt(c) * c;
            }
            s2 += sq;
            cross += col * col - sq;
        }
        const BigInt pt = BigInt(pi->num_pieces_t);
        const BigInt val2 = BigInt(psi->size()) * BigInt(psi->size());
        cert.inequality_chain.push_back(exact_item("val(Psi)^2 <= |P_t| (diag + cross)", val2, pt * (s2 + cross)));
        cert.inequality_chain.push_back(
            exact_item("diag <= k |P_t| ((3m)^{r-t} d^t)^2", s2,
                       BigInt(k) * pt * pi->magnitude_bound * pi->magnitude_bound));
        // E_M f_M = Pr[(i,j) in M] * cross; cross <= 2k E_M f_M.
        const Rational em = (k % 2 == 0) ? Rational(cross, 2 * (k - 1)) : Rational(cross, 2 * k);
        const Rational rhs = Rational(pi->diagonal_bound) + Rational(pt * 2 * k) * em;
        cert.inequality_chain.push_back({"val(Psi)^2 <= k (|P_t| mag)^2 + 2k |P_t| E_M f_M", to_double(val2),
                                         rhs.convert_to<double>(), Rational(val2) <= rhs});
        sm["paired"] = {{"edges", pi->matching.size()},
                        {"pairs", pi->pairs.size()},
                        {"pieces_t", pi->num_pieces_t},
                        {"expected_f_M", em.convert_to<double>()}};
    }
    if (pi->pairs.empty()) return finish(static_cast<double>(n), "no constraint pairs");

    KikuchiOperator op(pi, cfg.ell, cfg.budgets);
    const std::size_t slots = op.slots();
    const BigInt N = tuple_space_size(n, cfg.ell, slots);
    const double Nd = to_double(N);
    BigInt total = 0;
    for (std::size_t p = 0; p < op.num_pairs(); ++p) total += op.pair_entry_count(p);
    check_budget("certify", total, cfg.budgets.max_nnz);
    sm["kikuchi"] = {{"N", big_json(N)},
                     {"D", big_json(op.D())},
                     {"slots", slots},
                     {"entries", big_json(total)},
                     {"degenerate_pairs", op.degenerate_pairs()}};

    // Exact quadratic-form identity with independent random x and b.
    if (total <= cfg.check_cap) {
        Rng qr(derive_seed(cfg.seed, "certify_quadform"));
        const auto qx = random_signs(n, qr);
        const auto qb = random_signs(k, qr);
        const QuadFormCheck qc = quadratic_form_check(op, qx, qb);
        cert.inequality_chain.push_back({"x'^T A x' = sum_pairs entries * monomial", static_cast<double>(qc.lhs),
                                         to_double(qc.rhs_exact), qc.equal_exact});
    }

    // Entries per edge, and the support of A.
    std::vector<EdgeEntries> per_edge(op.num_edges());
    std::vector<std::uint64_t> support;
    support.reserve(2 * static_cast<std::size_t>(total));
    for (std::size_t p = 0; p < op.num_pairs(); ++p) {
        auto& list = per_edge[op.edge_of_pair(p)].entries;
        op.for_each_entry(p, [&](std::uint64_t row, std::uint64_t col) {
            list.emplace_back(row, col);
            support.push_back(row);
            support.push_back(col);
        });
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    check_budget("certify", BigInt(support.size()), cfg.budgets.max_vector_dim);
    auto idx = [&](std::uint64_t rank) {
        return static_cast<std::uint64_t>(std::lower_bound(support.begin(), support.end(), rank) - support.begin());
    };

    // Pruning on the support.
    ThresholdParams tp{n, r, t, cfg.ell, static_cast<double>(cfg.d), static_cast<double>(m_max)};
    const double Delta = delta_threshold(tp);
    const std::vector<char> bad = bad_among(op, Delta, support);
    std::uint64_t nbad = 0;
    for (char c : bad) nbad += c != 0;
    const BigInt crude = 2 * BigInt(nbad) * boost::multiprecision::pow(BigInt(2 * cfg.ell), static_cast<unsigned>(slots));
    std::vector<BipartiteGraph> graphs(op.num_edges());
    std::uint64_t removed = 0, max_removed = 0;
    for (std::size_t e = 0; e < op.num_edges(); ++e) {
        std::uint64_t rem = 0;
        for (auto [row, col] : per_edge[e].entries) {
            if (bad[idx(row)] || bad[idx(col)]) {
                ++rem;
                continue;
            }
            graphs[e].edges.emplace_back(row, col);
        }
        removed += rem;
        max_removed = std::max(max_removed, rem);
    }
    std::size_t maxdeg = 0;
    for (const auto& g : graphs) maxdeg = std::max(maxdeg, max_degree(g));
    sm["pruning"] = {{"Delta", Delta},
                     {"mu", Delta / 3},
                     {"support_rows", support.size()},
                     {"bad_support_rows", nbad},
                     {"removed_entries", removed},
                     {"crude_bound_per_edge", big_json(crude)},
                     {"max_degree", maxdeg}};
    cert.inequality_chain.push_back(
        exact_item("removed entries per edge <= 2 |B| (2 ell)^{2r+2-t}", BigInt(max_removed), crude));
    cert.inequality_chain.push_back(approx_item("max degree after pruning <= Delta", static_cast<double>(maxdeg), Delta));

    // Norms on the compressed support.
    const std::uint64_t U = support.size();
    std::vector<SparseMatrix> xs;
    xs.reserve(op.num_edges());
    for (std::size_t e = 0; e < op.num_edges(); ++e) {
        std::vector<Triplet> tr;
        tr.reserve(per_edge[e].entries.size());
        for (auto [row, col] : per_edge[e].entries) tr.push_back({idx(row), idx(col), 1.0});
        xs.emplace_back(U, U, std::move(tr));
    }
    std::vector<double> w(op.num_edges());
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = b[hm[e].first] * b[hm[e].second];
    const SparseMatrix ab = signed_sum(xs, w);
    const PowerResult pr = spectral_norm(ab, cfg.tol, 20000, derive_seed(cfg.seed, "certify_norm"));
    std::vector<double> xl(U), axl(U);
    for (std::uint64_t a = 0; a < U; ++a) xl[a] = op.lifted_sign(support[a], x);
    ab.apply(xl, axl);
    double quad = 0;
    for (std::uint64_t a = 0; a < U; ++a) quad += xl[a] * axl[a];
    const double dfm = to_double(op.D()) * static_cast<double>(eval_paired(*pi, b, x));
    cert.inequality_chain.push_back(approx_item("D f_M(x) <= x'^T A x' at a codeword", dfm, quad));
    cert.inequality_chain.push_back(
        approx_item("x'^T A x' <= sqrt(rows cols) ||A||_2", quad, static_cast<double>(U) * pr.sigma));
    ojson spectral = {{"sigma", pr.sigma},
                  {"residual", pr.residual},
                  {"iterations", pr.iterations},
                  {"converged", pr.converged},
                  {"support_dim", U},
                  {"n_sigma", Nd * pr.sigma}};
    if (cfg.trials > 0) {
        const RademacherResult rr = empirical_rademacher(xs, cfg.trials, derive_seed(cfg.seed, "certify_rademacher"),
                                                         cfg.rademacher_tol);
        spectral["rademacher"] = {{"trials", rr.trials}, {"mean", rr.mean}, {"max", rr.max}, {"sigma2", rr.sigma2},
                              {"bound", rr.bound}};
        cert.inequality_chain.push_back({"E_b ||A_b||_2 <= sqrt(2 sigma^2 ln(2 rows))", rr.mean, rr.bound, rr.holds});
    }
    sm["spectral"] = spectral;

    // 2-LDC reduction.
    const LdcExtraction ldc = extract_2ldc(graphs, Delta, N);
    std::uint64_t kept = 0;
    for (auto e : ldc.edges) kept += e;
    cert.inequality_chain.push_back(
        approx_item("sum |E(G')| / Delta <= sum |G''|", static_cast<double>(kept) / Delta, ldc.matched));
    cert.inequality_chain.push_back(approx_item("delta' k' <= 2 log2(2N)", ldc.gkst.lhs, ldc.gkst.rhs));
    ojson lj = {{"k_prime", graphs.size()},
                {"kept_edges", kept},
                {"matched", ldc.matched},
                {"delta_prime", ldc.delta_prime},
                {"gkst_lhs", ldc.gkst.lhs},
                {"gkst_rhs", ldc.gkst.rhs},
                {"gkst_from_sizes", ldc.gkst_direct}};
    if (static_cast<double>(sol.basis.size()) * ldc.matched <= static_cast<double>(cfg.check_cap)) {
        const LiftCheck lc = check_lifted_codewords(op, ldc.matchings, sol);
        lj["lift_checked"] = lc.checked;
        lj["lift_violations"] = lc.violations;
        cert.inequality_chain.push_back(
            {"lifted codeword violations on G'' = 0", static_cast<double>(lc.violations), 0.0, lc.violations == 0});
    }
    sm["ldc"] = lj;

    if (ldc.matched <= 0) return finish(static_cast<double>(n), "empty matchings");
    // GKST on k' = floor(k/2) matchings of average size g over 2N vertices:
    // floor(k/2) g <= 4N log2(2N), so k <= 8 N log2(2N) / g + 1.
    const double g = ldc.matched / static_cast<double>(graphs.size());
    return finish(8.0 * Nd * std::log2(2.0 * Nd) / g + 1.0, "2-LDC");
}

}  // namespace lcc
