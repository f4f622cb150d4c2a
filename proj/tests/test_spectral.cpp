#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "lcc/certify.hpp"
#include "lcc/chains.hpp"
#include "lcc/pruning.hpp"
#include "lcc/spectral.hpp"

#ifdef LCC_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace lcc;

namespace {

SparseMatrix identity(std::uint64_t n) {
    std::vector<Triplet> t;
    for (std::uint64_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return SparseMatrix(n, n, std::move(t));
}

SparseMatrix random_sparse(std::uint64_t rows, std::uint64_t cols, double density, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Triplet> t;
    for (std::uint64_t i = 0; i < rows; ++i)
        for (std::uint64_t j = 0; j < cols; ++j)
            if (rng.bernoulli(density)) t.push_back({i, j, static_cast<double>(rng.sign())});
    return SparseMatrix(rows, cols, std::move(t));
}

// Maximum matching by trying every edge subset.
std::size_t brute_matching(const BipartiteGraph& g) {
    const std::size_t e = g.edges.size();
    std::size_t best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e); ++mask) {
        std::vector<std::uint64_t> l, r;
        bool ok = true;
        for (std::size_t a = 0; a < e && ok; ++a) {
            if (!(mask >> a & 1)) continue;
            auto [x, y] = g.edges[a];
            if (std::find(l.begin(), l.end(), x) != l.end() || std::find(r.begin(), r.end(), y) != r.end()) ok = false;
            l.push_back(x);
            r.push_back(y);
        }
        if (ok) best = std::max(best, l.size());
    }
    return best;
}

bool is_matching(const BipartiteMatching& m, const BipartiteGraph& g) {
    std::vector<std::uint64_t> l, r;
    for (auto [x, y] : m.edges) {
        if (std::find(g.edges.begin(), g.edges.end(), std::make_pair(x, y)) == g.edges.end()) return false;
        l.push_back(x);
        r.push_back(y);
    }
    std::sort(l.begin(), l.end());
    std::sort(r.begin(), r.end());
    return std::adjacent_find(l.begin(), l.end()) == l.end() && std::adjacent_find(r.begin(), r.end()) == r.end();
}

// Disjoint union of c copies of K_{Δ,Δ}.
BipartiteGraph regular_union(std::size_t c, std::size_t delta) {
    BipartiteGraph g;
    for (std::size_t b = 0; b < c; ++b)
        for (std::size_t i = 0; i < delta; ++i)
            for (std::size_t j = 0; j < delta; ++j) g.edges.emplace_back(b * delta + i, 1000 + b * delta + j);
    return g;
}

struct Pipeline {
    MatchingFamily fam;
    SolutionSpace sol;
    std::shared_ptr<const XorInstance> psi;
    std::shared_ptr<const PairedInstance> pi;
};

Pipeline pipeline(MatchingFamily fam, std::size_t r, std::size_t t, std::uint64_t d) {
    Pipeline p;
    p.fam = std::move(fam);
    p.sol = solution_space(p.fam);
    auto cs = build_chains(p.fam, r);
    auto part = decompose(p.fam, cs, d);
    auto phi = build_phi(p.fam, r, p.sol.information_set);
    p.psi = std::make_shared<XorInstance>(build_psi(phi, cs, part, t));
    p.pi = std::make_shared<PairedInstance>(
        cross_terms(p.psi, default_matching(p.sol.dimension), d, p.fam.max_matching_size()));
    return p;
}

#ifdef LCC_HAVE_EIGEN
double svd_top(const SparseMatrix& a) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    for (auto t : a.triplets()) m(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}
#endif

}  // namespace

TEST_CASE("maximum bipartite matching") {
    BipartiteGraph one;
    one.edges = {{3, 7}};
    CHECK(max_bipartite_matching(one).size() == 1);
    CHECK(max_bipartite_matching(BipartiteGraph{}).size() == 0);

    for (std::size_t delta : {1, 2, 3, 5}) {
        auto g = regular_union(4, delta);
        auto m = max_bipartite_matching(g);
        CHECK(m.size() * delta == g.edges.size());
        CHECK(max_degree(g) == delta);
        CHECK(is_matching(m, g));
    }

    // Needs augmenting paths: a greedy left-to-right choice gets stuck.
    BipartiteGraph path;
    path.edges = {{0, 0}, {0, 1}, {1, 0}, {2, 1}, {2, 2}, {3, 2}};
    CHECK(max_bipartite_matching(path).size() == 3);

    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        BipartiteGraph g;
        const std::size_t e = 1 + rng.below(12);
        for (std::size_t a = 0; a < e; ++a) g.edges.emplace_back(rng.below(6), rng.below(6));
        std::sort(g.edges.begin(), g.edges.end());
        g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
        auto m = max_bipartite_matching(g);
        CHECK(is_matching(m, g));
        CHECK(m.size() == brute_matching(g));
    }
}

TEST_CASE("spectral norm of simple operators") {
    auto id = spectral_norm(identity(8));
    CHECK(id.converged);
    CHECK(id.sigma == doctest::Approx(1.0).epsilon(1e-9));

    std::vector<Triplet> t;
    for (std::uint64_t i = 0; i < 8; ++i)
        for (std::uint64_t j = 0; j < 8; ++j) t.push_back({i, j, 1.0});
    CHECK(spectral_norm(SparseMatrix(8, 8, t)).sigma == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(spectral_norm(SparseMatrix(5, 5, {})).sigma == 0.0);
}

#ifdef LCC_HAVE_EIGEN
TEST_CASE("power iteration agrees with a dense SVD") {
    for (std::uint64_t s = 1; s <= 10; ++s) {
        auto a = random_sparse(40 + s, 30, 0.2, s);
        CHECK(spectral_norm(a).sigma == doctest::Approx(svd_top(a)).epsilon(1e-6));
    }
    // Materialized Kikuchi operators with N <= 512.
    std::size_t tested = 0;
    for (std::uint64_t seed = 1; seed <= 40 && tested < 6; ++seed) {
        const std::size_t t = seed % 2;
        auto fam = gen_random_matchings(t == 0 ? 4 : 8, t == 0 ? 1 : 2, seed);
        auto cs = build_chains(fam, 1);
        auto part = decompose(fam, cs, 1);
        auto phi = build_phi(fam, 1, 4);
        auto psi = std::make_shared<XorInstance>(build_psi(phi, cs, part, t));
        auto pi = std::make_shared<PairedInstance>(cross_terms(psi, default_matching(4), 1, fam.max_matching_size()));
        if (pi->pairs.empty()) continue;
        KikuchiOperator op(pi, 1);
        REQUIRE(op.size() <= 512);
        Rng rng(seed);
        auto signed_op = op.with_signs(random_signs(4, rng));
        auto a = signed_op.materialize();
        const double want = svd_top(a);
        CHECK(spectral_norm(a).sigma == doctest::Approx(want).epsilon(1e-6));
        CHECK(spectral_norm(signed_op).sigma == doctest::Approx(want).epsilon(1e-6));
        ++tested;
    }
    CHECK(tested >= 3);
}

TEST_CASE("matrix variance agrees with dense products") {
    std::vector<SparseMatrix> xs;
    for (std::uint64_t s = 0; s < 4; ++s) xs.push_back(random_sparse(12, 9, 0.3, 100 + s));
    Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(12, 12), inner = Eigen::MatrixXd::Zero(9, 9);
    for (const auto& x : xs) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(12, 9);
        for (auto t : x.triplets()) m(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;
        outer += m * m.transpose();
        inner += m.transpose() * m;
    }
    const double want = std::max(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(outer).eigenvalues().maxCoeff(),
                                 Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(inner).eigenvalues().maxCoeff());
    CHECK(matrix_variance(xs) == doctest::Approx(want).epsilon(1e-6));
}
#endif

TEST_CASE("infinity-to-one norm never exceeds N sigma") {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const std::uint64_t n = 4 + s % 17;
        auto a = random_sparse(n, n, 0.3, 300 + s);
        const double exact = infty_to_1_exhaustive(a);
        const double sigma = spectral_norm(a, 1e-9).sigma;
        CHECK(exact <= static_cast<double>(n) * sigma * (1 + 1e-9));
        auto r = infty_to_1(a);
        CHECK(r.upper >= exact * (1 - 1e-9));
    }
}

TEST_CASE("matrix Khintchine bound") {
    CHECK(khintchine_bound(4, 8, 8) == doctest::Approx(4.709640).epsilon(1e-6));
    CHECK(khintchine_bound(0, 8, 8) == 0.0);

    auto single = empirical_rademacher({identity(8)}, 100, 1);
    CHECK(single.sigma2 == doctest::Approx(1.0));
    CHECK(single.bound == doctest::Approx(std::sqrt(2 * std::log(16.0))));
    CHECK(single.mean == doctest::Approx(1.0));
    CHECK(single.holds);

    auto zero = empirical_rademacher({SparseMatrix(8, 8, {}), SparseMatrix(8, 8, {})}, 100, 1);
    CHECK(zero.bound == 0.0);
    CHECK(zero.mean == 0.0);
    CHECK(zero.holds);

    for (std::uint64_t s = 1; s <= 4; ++s) {
        std::vector<SparseMatrix> xs;
        for (std::uint64_t e = 0; e < 3 + s; ++e) xs.push_back(random_sparse(10, 14, 0.2, 10 * s + e));
        auto r = empirical_rademacher(xs, 100, s);
        CHECK(r.holds);
        CHECK(r.mean <= r.bound);
        // Reproducible.
        CHECK(empirical_rademacher(xs, 100, s).mean == r.mean);
    }
    CHECK_THROWS(signed_sum({identity(3), identity(4)}, {1, 1}));
}

TEST_CASE("2-LDC extraction on regular unions") {
    std::vector<BipartiteGraph> gs{regular_union(3, 2), regular_union(2, 2)};
    auto res = extract_2ldc(gs, 2, BigInt(4096));
    CHECK(res.matchings[0].size() == 6);
    CHECK(res.matchings[1].size() == 4);
    CHECK(res.size_ok);
    CHECK(res.max_degree == 2);
    CHECK(res.delta_prime == doctest::Approx(10.0 / 2 / 8192));
    CHECK(res.gkst.holds);
    CHECK_FALSE(res.gkst_direct);
    CHECK_THROWS_AS(extract_2ldc(gs, 1, BigInt(4096)), std::runtime_error);

    BipartiteGraph one;
    one.edges = {{0, 0}};
    auto r1 = extract_2ldc({one}, 1, BigInt(1) << 80);
    CHECK(r1.matchings[0].size() == 1);
    CHECK(r1.gkst_direct);
    CHECK(r1.gkst.holds);
}

TEST_CASE("lifted codewords satisfy every matched edge at n=10, ell=1, r=1") {
    std::size_t tested = 0;
    for (std::uint64_t seed = 1; seed <= 30 && tested < 2; ++seed) {
        PlantedLcc pl;
        try {
            pl = gen_planted(10, 2, 3, seed);
        } catch (const std::exception&) {
            continue;
        }
        auto p = pipeline(pl.family, 1, 0, 4);
        if (p.sol.dimension < 2 || p.pi->pairs.empty()) continue;
        KikuchiOperator op(p.pi, 1);
        ThresholdParams tp{10, 1, 0, 1, 4, static_cast<double>(p.fam.max_matching_size())};
        const double Delta = delta_threshold(tp);
        auto bad = find_bad_rows(op, Delta);
        auto pr = prune(op, bad.mask);
        std::vector<BipartiteGraph> gs(op.num_edges());
        for (std::size_t e = 0; e < op.num_edges(); ++e)
            for (std::size_t q = p.pi->edge_offsets[e]; q < p.pi->edge_offsets[e + 1]; ++q)
                op.for_each_entry(q, [&](std::uint64_t row, std::uint64_t col) {
                    if (!bad.mask[row] && !bad.mask[col]) gs[e].edges.emplace_back(row, col);
                });
        auto ldc = extract_2ldc(gs, Delta, BigInt(op.size()));
        CHECK(ldc.size_ok);
        CHECK(ldc.max_degree <= pr.max_row_degree + pr.max_col_degree);
        auto lc = check_lifted_codewords(op, ldc.matchings, p.sol);
        CHECK(lc.checked > 0);
        CHECK(lc.violations == 0);
        ++tested;
    }
    CHECK(tested >= 1);
}

TEST_CASE("certificates are sound") {
    auto flat = gen_flat_lcc(3);
    CertifyConfig cfg;
    cfg.ell = 1;
    auto cert = certify(flat.family, cfg);
    for (const auto& it : cert.inequality_chain) {
        INFO(it.name);
        CHECK(it.holds);
    }
    CHECK(cert.k_true == 4);
    CHECK(cert.k_bound >= 4);
    CHECK(cert.sound);
    // Δ < 1 at ell = 1 here, so every support row is pruned.
    CHECK(cert.stage_metrics["k_bound_route"] == "empty matchings");

    cfg.ell = 2;
    cfg.trials = 2;
    auto c2 = certify(flat.family, cfg);
    CHECK(c2.sound);
    CHECK(c2.stage_metrics["k_bound_route"] == "2-LDC");
    CHECK(c2.stage_metrics["ldc"]["lift_violations"] == 0);
    for (const auto& it : c2.inequality_chain) {
        INFO(it.name);
        CHECK(it.holds);
    }

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CertifyConfig c;
        c.seed = seed;
        auto cr = certify(gen_random_matchings(40, 4, seed), c);
        CHECK(cr.sound);
        CHECK(cr.k_bound >= static_cast<double>(cr.k_true));
    }

    MatchingFamily empty(6, std::vector<std::vector<Triple>>(6));
    cfg.ell = 1;
    auto ce = certify(empty, cfg);
    CHECK(ce.k_true == 6);
    CHECK(ce.k_bound == 6.0);
    CHECK(ce.sound);
}

TEST_CASE("certificates are reproducible and budgeted") {
    auto flat = gen_flat_lcc(3);
    CertifyConfig cfg;
    cfg.ell = 1;
    cfg.seed = 7;
    CHECK(certify(flat.family, cfg).to_json().dump() == certify(flat.family, cfg).to_json().dump());

    cfg.budgets.max_nnz = 10;
    try {
        certify(flat.family, cfg);
        FAIL("expected a budget error");
    } catch (const BudgetError& e) {
        CHECK(e.stage() == "certify");
    }
    CertifyConfig bad;
    bad.r = 0;
    CHECK_THROWS_AS(certify(flat.family, bad), std::invalid_argument);
}
