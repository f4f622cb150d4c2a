#include "lcc/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcc/certify.hpp"
#include "lcc/chains.hpp"
#include "lcc/concentration.hpp"
#include "lcc/family_io.hpp"
#include "lcc/formulas.hpp"
#include "lcc/partition.hpp"

namespace lcc {

namespace {

using ojson = nlohmann::ordered_json;

struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

// Every report: command, version, resolved config, payload, and a timestamp
// that comparisons ignore.
ojson envelope(const std::string& cmd, const ojson& config) {
    ojson j;
    j["command"] = cmd;
    j["version"] = kVersion;
    j["config"] = config;
    return j;
}

void emit(ojson j, const std::string& out) {
    j["timestamp"] = utc_now();
    const std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
}

void emit_text(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
}

void write_chain_csv(const std::string& path, const std::vector<std::pair<std::string, ojson>>& certs) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "source,item,lhs,rhs,holds\n";
    f << std::setprecision(17);
    for (const auto& [src, c] : certs)
        for (const auto& it : c["inequality_chain"])
            f << src << ",\"" << it["name"].get<std::string>() << "\"," << it["lhs"].get<double>() << ","
              << it["rhs"].get<double>() << "," << (it["holds"].get<bool>() ? 1 : 0) << "\n";
}

struct Common {
    unsigned threads = 0;
    Budgets budgets;
    std::string out;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("-o,--output", c.out, "Output file (default stdout)");
    sub->add_option("--threads", c.threads, "Worker threads (default LCC_THREADS or hardware)");
    sub->add_option("--max-chains", c.budgets.max_chains, "Chain budget");
    sub->add_option("--max-pieces", c.budgets.max_pieces, "Piece budget");
    sub->add_option("--max-constraints", c.budgets.max_constraints, "Constraint budget");
    sub->add_option("--max-pairs", c.budgets.max_pairs, "Constraint pair budget");
    sub->add_option("--max-dim", c.budgets.max_vector_dim, "Largest vector length");
    sub->add_option("--max-materialize", c.budgets.max_materialize_dim, "Largest materialized dimension");
    sub->add_option("--max-nnz", c.budgets.max_nnz, "Largest number of stored nonzeros");
}

ojson budgets_json(const Budgets& b) {
    return {{"max_chains", b.max_chains},         {"max_pieces", b.max_pieces},
            {"max_constraints", b.max_constraints}, {"max_pairs", b.max_pairs},
            {"max_vector_dim", b.max_vector_dim}, {"max_materialize_dim", b.max_materialize_dim},
            {"max_nnz", b.max_nnz}};
}

void apply_threads(unsigned threads) {
    if (threads > 0) setenv("LCC_THREADS", std::to_string(threads).c_str(), 1);
}

}  // namespace

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args);
}

int run(const std::vector<std::string>& args_in) {
    CLI::App app{"Long-chain Kikuchi refutation toolkit for 3-query LCC matchings"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Common common;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a matching family");
    std::string kind = "random";
    std::size_t n = 60, m = 6, heavy = 4;
    unsigned mdim = 3, pk = 3;
    std::uint64_t seed = 1;
    gen->add_option("--kind", kind, "random | flat | planted | heavy")
        ->check(CLI::IsMember({"random", "flat", "planted", "heavy"}));
    gen->add_option("--n", n, "Vertex count");
    gen->add_option("--m", m, "Edges per matching");
    gen->add_option("--mdim", mdim, "Dimension for --kind flat (n = 2^mdim)");
    gen->add_option("--k", pk, "Planted dimension for --kind planted");
    gen->add_option("--heavy", heavy, "Vertices sharing the heavy pair for --kind heavy");
    gen->add_option("--seed", seed, "Seed");
    add_common(gen, common);

    // validate
    auto* val = app.add_subcommand("validate", "Check the normal-form conditions of a family");
    std::string input;
    val->add_option("family", input, "Family JSON")->required();
    add_common(val, common);

    // chains
    auto* ch = app.add_subcommand("chains", "Dump the t-chains of a family");
    std::size_t t = 1;
    bool count_only = false;
    ch->add_option("family", input, "Family JSON")->required();
    ch->add_option("--t", t, "Chain length");
    ch->add_flag("--count", count_only, "Only report chain counts");
    add_common(ch, common);

    // decompose
    auto* dec = app.add_subcommand("decompose", "Contiguously regular partition of the r-chains");
    std::size_t r = 1;
    std::uint64_t d = 4;
    dec->add_option("family", input, "Family JSON")->required();
    dec->add_option("--r", r, "Chain length");
    dec->add_option("--d", d, "Regularity parameter");
    dec->add_option("--seed", seed, "Seed for sampled property checks");
    add_common(dec, common);

    // refute
    auto* ref = app.add_subcommand("refute", "Run the full pipeline and emit a certificate");
    CertifyConfig cc;
    std::optional<std::size_t> tforce;
    std::string csv;
    ref->add_option("family", input, "Family JSON")->required();
    ref->add_option("--r", cc.r, "Chain length");
    ref->add_option("--ell", cc.ell, "Kikuchi level");
    ref->add_option("--d", cc.d, "Regularity parameter");
    ref->add_option("--t", tforce, "Force the piece size t");
    ref->add_option("--trials", cc.trials, "Sign draws for the Rademacher experiment");
    ref->add_option("--seed", cc.seed, "Seed");
    ref->add_option("--tol", cc.tol, "Power iteration tolerance");
    ref->add_option("--csv", csv, "Also write the inequality chain as CSV");
    add_common(ref, common);

    // bruteforce
    auto* bf = app.add_subcommand("bruteforce", "Exact val(Φ_b) by exhaustive search (n <= 22)");
    std::uint64_t bseed = 1;
    std::optional<std::size_t> bk;
    bf->add_option("family", input, "Family JSON")->required();
    bf->add_option("--r", r, "Chain length");
    bf->add_option("--b-seed", bseed, "Seed for the sign vector b");
    bf->add_option("--k", bk, "Heads 0..k-1 (default: an information set)");
    add_common(bf, common);

    // concentration
    auto* con = app.add_subcommand("concentration", "Tail bounds and the partite polynomial experiment");
    double mu = 1, gamma = 0.1, beta = 1, fill = 1, p = 0.1;
    std::size_t cr = 3, cn = 20, monomials = 40;
    std::uint64_t ctrials = 0;
    std::optional<double> bt, bs2, bm, cdelta, cmu;
    con->add_option("--mu", mu, "μ");
    con->add_option("--gamma", gamma, "γ");
    con->add_option("--beta", beta, "β");
    con->add_option("--r", cr, "Number of groups");
    con->add_option("--n", cn, "Group size");
    con->add_option("--p", p, "Bias of the Monte Carlo inputs");
    con->add_option("--monomials", monomials, "Monomials of the random polynomial");
    con->add_option("--fill", fill, "Probability that a monomial uses a group");
    con->add_option("--trials", ctrials, "Monte Carlo trials (0 skips the experiment)");
    con->add_option("--seed", seed, "Seed");
    con->add_option("--bernstein-t", bt, "Bernstein t");
    con->add_option("--sigma2", bs2, "Bernstein σ²");
    con->add_option("--M", bm, "Bernstein M");
    con->add_option("--chernoff-delta", cdelta, "Chernoff δ");
    con->add_option("--chernoff-mu", cmu, "Chernoff μ");
    add_common(con, common);

    // report
    auto* rep = app.add_subcommand("report", "Summarize certificates");
    std::vector<std::string> certs;
    rep->add_option("certificates", certs, "Certificate JSON files")->required();
    rep->add_option("--csv", csv, "Write the inequality chains as CSV");
    add_common(rep, common);

    std::vector<std::string> args(args_in.begin() + (args_in.empty() ? 0 : 1), args_in.end());
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    apply_threads(common.threads);

    try {
        if (*gen) {
            MatchingFamily fam;
            if (kind == "random") fam = gen_random_matchings(n, m, seed);
            else if (kind == "flat") fam = gen_flat_lcc(mdim).family;
            else if (kind == "planted") fam = gen_planted(n, m, pk, seed).family;
            else fam = gen_heavy_pair(n, m, heavy, seed);
            emit_text(family_to_json(fam).dump() + "\n", common.out);
            return 0;
        }
        if (*val) {
            const MatchingFamily fam = load_family(input);
            const SolutionSpace sol = solution_space(fam);
            const ValidationReport vr = validate_normal_form(fam, &sol);
            ojson j = envelope("validate", {{"family", input}});
            ojson viol = ojson::array();
            for (const auto& v : vr.violations) viol.push_back({{"kind", v.kind}, {"u", v.u}, {"detail", v.detail}});
            j["result"] = {{"ok", vr.ok()},
                           {"n", fam.n()},
                           {"min_matching", fam.min_matching_size()},
                           {"max_matching", fam.max_matching_size()},
                           {"delta_eff", fam.delta_eff()},
                           {"dimension", sol.dimension},
                           {"counts",
                            {{"arity", vr.arity},
                             {"disjointness", vr.disjointness},
                             {"constraint", vr.constraint},
                             {"negation", vr.negation}}},
                           {"violations", viol}};
            emit(j, common.out);
            return vr.ok() ? 0 : 1;
        }
        if (*ch) {
            const MatchingFamily fam = load_family(input);
            if (count_only) {
                const ChainCount cnt = count_chains(fam, t);
                ojson j = envelope("chains", {{"family", input}, {"t", t}});
                j["result"] = {{"total", cnt.total.str()}};
                emit(j, common.out);
                return 0;
            }
            const ChainSet cs = build_chains(fam, t, common.budgets);
            std::ostringstream os;
            write_chains(os, cs);
            emit_text(os.str(), common.out);
            return 0;
        }
        if (*dec) {
            const MatchingFamily fam = load_family(input);
            const ChainSet cs = build_chains(fam, r, common.budgets);
            const Partition part = decompose(fam, cs, d, common.budgets);
            PartitionCheckOptions po;
            po.seed = seed;
            const PartitionCheck pc = verify_partition(fam, cs, part, po);
            ojson j = envelope("decompose", {{"family", input}, {"r", r}, {"d", d}, {"seed", seed},
                                             {"budgets", budgets_json(common.budgets)}});
            j["check"] = {{"ok", pc.ok()},
                          {"cover", pc.cover},
                          {"contiguity", pc.contiguity},
                          {"singleton_p", pc.singleton_p},
                          {"suffix_bound", pc.suffix_bound},
                          {"size_bound", pc.size_bound},
                          {"observation", pc.observation},
                          {"greedy_exact", pc.greedy_exact},
                          {"max_suffix_ratio", pc.max_suffix_ratio},
                          {"pieces_per_size", pc.pieces_per_size},
                          {"failures", pc.failures}};
            j["partition"] = partition_to_json(cs, part);
            emit(j, common.out);
            return pc.ok() ? 0 : 1;
        }
        if (*ref) {
            const MatchingFamily fam = load_family(input);
            cc.t = tforce;
            cc.budgets = common.budgets;
            const Certificate cert = certify(fam, cc);
            ojson j = envelope("refute", {{"family", input}});
            const ojson body = cert.to_json();
            for (const auto& [key, value] : body.items()) j[key] = value;
            if (!csv.empty()) write_chain_csv(csv, {{input, j}});
            emit(j, common.out);
            return cert.sound ? 0 : 1;
        }
        if (*bf) {
            const MatchingFamily fam = load_family(input);
            if (fam.n() > kBruteForceMaxN)
                throw ValidationFailure("bruteforce: n = " + std::to_string(fam.n()) + " exceeds " +
                                        std::to_string(kBruteForceMaxN));
            std::vector<Vertex> heads;
            if (bk) {
                for (Vertex v = 0; v < *bk; ++v) heads.push_back(v);
            } else {
                heads = solution_space(fam).information_set;
                if (heads.empty()) heads.push_back(0);
            }
            const XorInstance phi = build_phi(fam, r, heads, common.budgets);
            Rng rng(derive_seed(bseed, "bruteforce_b"));
            const std::vector<int> b = random_signs(heads.size(), rng);
            const BruteForceResult res = brute_force_val(phi, b);
            const std::int64_t at = eval_value(phi, b, res.argmax);
            ojson j = envelope("bruteforce", {{"family", input}, {"r", r}, {"b_seed", bseed}, {"heads", heads}});
            j["result"] = {{"constraints", phi.size()},
                           {"b", b},
                           {"val", res.value},
                           {"argmax", res.argmax},
                           {"eval_at_argmax", at},
                           {"match", at == res.value}};
            emit(j, common.out);
            return at == res.value ? 0 : 1;
        }
        if (*con) {
            ojson cfg = {{"mu", mu},       {"gamma", gamma},         {"beta", beta},   {"r", cr},
                         {"n", cn},        {"p", p},                 {"monomials", monomials},
                         {"fill", fill},   {"trials", ctrials},      {"seed", seed}};
            ojson j = envelope("concentration", cfg);
            const TailBound tb = partite_tail_bound(mu, gamma, beta, cr, cn);
            j["partite"] = {{"alpha", partite_alpha(beta, gamma)},
                            {"log_alpha", tb.log_alpha},
                            {"log_bound", tb.log_bound},
                            {"bound", tb.bound},
                            {"threshold", tb.threshold}};
            if (ctrials > 0) {
                const PartitePolynomial P = random_partite(cr, cn, monomials, fill, seed);
                const double mu_cal = calibrate_mu(P, p, gamma);
                const TailBound tc = partite_tail_bound(mu_cal, gamma, beta, cr, cn);
                const McEstimate mc = mc_tail(P, p, tc.threshold, ctrials, seed);
                const double slack = tc.bound + 3 * mc.stderr_;
                j["experiment"] = {{"mu", mu_cal},
                                   {"threshold", tc.threshold},
                                   {"bound", tc.bound},
                                   {"empirical", mc.mean},
                                   {"stderr", mc.stderr_},
                                   {"ci99", {mc.ci_low, mc.ci_high}},
                                   {"holds", mc.mean <= slack}};
            }
            if (bt && bs2 && bm) j["bernstein"] = bernstein(*bt, *bs2, *bm);
            if (cdelta && cmu) j["chernoff"] = chernoff(*cdelta, *cmu);
            emit(j, common.out);
            return 0;
        }
        if (*rep) {
            ojson j = envelope("report", {{"certificates", certs}});
            ojson rows = ojson::array();
            std::vector<std::pair<std::string, ojson>> loaded;
            bool all_sound = true;
            for (const auto& path : certs) {
                std::ifstream f(path);
                if (!f) throw ValidationFailure("cannot read " + path);
                ojson c;
                try {
                    c = ojson::parse(f);
                } catch (const nlohmann::json::parse_error& e) {
                    throw ValidationFailure(path + ": byte " + std::to_string(e.byte) + ": malformed JSON");
                }
                if (!c.contains("k_bound") || !c.contains("k_true") || !c.contains("inequality_chain"))
                    throw ValidationFailure(path + ": not a certificate");
                std::size_t failed = 0;
                for (const auto& it : c["inequality_chain"]) failed += !it["holds"].get<bool>();
                all_sound = all_sound && c["sound"].get<bool>();
                rows.push_back({{"source", path},
                                {"k_bound", c["k_bound"]},
                                {"k_true", c["k_true"]},
                                {"sound", c["sound"]},
                                {"chain_items", c["inequality_chain"].size()},
                                {"chain_failures", failed}});
                loaded.emplace_back(path, std::move(c));
            }
            j["rows"] = rows;
            j["all_sound"] = all_sound;
            if (!csv.empty()) write_chain_csv(csv, loaded);
            emit(j, common.out);
            return all_sound ? 0 : 1;
        }
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InstanceParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace lcc
