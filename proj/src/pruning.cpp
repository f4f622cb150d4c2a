#include "lcc/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "lcc/parallel.hpp"
#include "lcc/rng.hpp"

namespace lcc {

namespace {

std::size_t positions_of(std::size_t r, std::size_t t) { return 2 * r + 2 - t; }

inline unsigned opt_count(const std::array<Vertex, 2>& o, const std::vector<char>& m) {
    return static_cast<unsigned>(m[o[0]] != 0) + static_cast<unsigned>(o[1] != kStar && m[o[1]] != 0);
}

inline std::uint64_t opt_match(const std::array<Vertex, 2>& o, Vertex z) {
    if (z == kStar) return o[1] == kStar ? 1 : 2;
    return (o[0] == z || o[1] == z) ? 1 : 0;
}

void fill_member(const TupleCodec& codec, std::uint64_t rank, std::vector<Vertex>& sets,
                 std::vector<std::vector<char>>& member) {
    codec.unrank(rank, sets);
    const std::size_t l = codec.ell();
    member.resize(codec.slots());
    for (std::size_t s = 0; s < codec.slots(); ++s) {
        member[s].assign(codec.n(), 0);
        for (std::size_t a = 0; a < l; ++a) member[s][sets[s * l + a]] = 1;
    }
}

// Deg(S) > Δ or Deg(P S) > Δ in some context. Scrambles member.
bool row_is_bad(const std::vector<DegreeContext>& ctxs, std::size_t k, std::vector<std::vector<char>>& member,
                double Delta) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& c : ctxs)
            if (static_cast<double>(c.deg(member)) > Delta) return true;
        for (std::size_t s = 0; s < k; ++s) std::swap(member[s], member[s + k]);
    }
    return false;
}

}  // namespace

double log_delta_threshold(const ThresholdParams& p) {
    const double s = static_cast<double>(positions_of(p.r, p.t));
    return std::log(9.0) + static_cast<double>(2 * p.r + 2 - 2 * p.t) * std::log(2.0) +
           s * std::log(static_cast<double>(p.ell) / static_cast<double>(p.n)) +
           static_cast<double>(p.t) * std::log(p.d) + static_cast<double>(2 * p.r + 1 - p.t) * std::log(3 * p.m);
}

double delta_threshold(const ThresholdParams& p) { return std::exp(log_delta_threshold(p)); }

double mu_value(const ThresholdParams& p) { return std::exp(log_delta_threshold(p) - std::log(3.0)); }

Rational delta_threshold_exact(std::size_t n, std::size_t r, std::size_t t, std::size_t ell, std::uint64_t d,
                               std::uint64_t m) {
    using boost::multiprecision::pow;
    const unsigned s = static_cast<unsigned>(positions_of(r, t));
    BigInt num = BigInt(9) * (BigInt(1) << (2 * r + 2 - 2 * t)) * pow(BigInt(ell), s) *
                 pow(BigInt(d), static_cast<unsigned>(t)) * pow(BigInt(3 * m), static_cast<unsigned>(2 * r + 1 - t));
    return Rational(num, pow(BigInt(n), s));
}

Rational mu_value_exact(std::size_t n, std::size_t r, std::size_t t, std::size_t ell, std::uint64_t d,
                        std::uint64_t m) {
    return delta_threshold_exact(n, r, t, ell, d, m) / 3;
}

double pruning_beta(std::size_t r) {
    if (r == 0) throw std::invalid_argument("pruning_beta: r must be at least 1");
    return 1.0 / (4.0 * static_cast<double>(r));
}

double biased_p(std::size_t n, std::size_t r, std::size_t ell) {
    return (1.0 + pruning_beta(r)) * static_cast<double>(ell) / static_cast<double>(n);
}

double coupling_slack(std::size_t r, std::size_t ell) {
    const double rr = static_cast<double>(r);
    return (2 * rr + 2) * std::exp(-static_cast<double>(ell) / (64 * rr * rr));
}

FeasibilityReport feasibility(const FeasibilityParams& p) {
    FeasibilityReport rep;
    const double r = static_cast<double>(p.r);
    auto item = [](std::string name, double log_lhs, double log_rhs) {
        FeasibilityItem it;
        it.name = std::move(name);
        it.lhs = std::exp(log_lhs);
        it.rhs = std::exp(log_rhs);
        it.margin = log_rhs - log_lhs;
        it.holds = it.margin >= 0;
        return it;
    };
    rep.items[0] = item("gamma <= 1/(c Gamma r^3 log2 n)", std::log(p.gamma),
                        -std::log(p.c * p.Gamma * r * r * r * std::log2(p.n)));
    rep.items[1] = item("2/(3 delta ell) <= gamma", std::log(2.0 / (3 * p.delta * p.ell)), std::log(p.gamma));
    rep.items[2] = item("(3 gamma delta ell / 4)^(r+1) >= n", std::log(p.n),
                        (r + 1) * std::log(3 * p.gamma * p.delta * p.ell / 4));
    rep.items[3] = item("(2r+2) exp(-ell/64r^2) <= ell^(-Gamma r)", std::log(2 * r + 2) - p.ell / (64 * r * r),
                        -p.Gamma * r * std::log(p.ell));
    {
        FeasibilityItem it;
        it.name = "d = 3 delta ell gamma";
        it.lhs = p.d;
        it.rhs = 3 * p.delta * p.ell * p.gamma;
        it.margin = -std::abs(std::log(it.lhs / it.rhs));
        it.holds = std::abs(it.lhs - it.rhs) <= 1e-9 * std::max(1.0, std::abs(it.rhs));
        rep.items[4] = it;
    }
    rep.all = true;
    for (const auto& it : rep.items) rep.all = rep.all && it.holds;
    return rep;
}

DegreeContext::DegreeContext(const XorInstance& psi, std::uint32_t i, std::uint32_t j)
    : n_(psi.n()), r_(psi.r()), i_(i), j_(j) {
    if (!psi.t()) throw std::invalid_argument("DegreeContext: source must be a Ψ^(t) instance");
    t_ = *psi.t();
    if (i >= psi.k() || j >= psi.k()) throw std::out_of_range("DegreeContext: head index out of range");
    std::map<std::uint32_t, PieceSides> by_piece;
    for (std::size_t c = 0; c < psi.size(); ++c) {
        const std::uint32_t h = psi.head_index(c);
        if (h != i && h != j) continue;
        const auto pc = static_cast<std::uint32_t>(psi.piece(c));
        const Pattern& q = psi.pieces()[pc];
        auto ch = psi.chain(c);
        std::vector<std::size_t> s_pos{0}, r_pos;
        for (std::size_t k = 1; k <= r_; ++k) (q[k - 1] == kStar ? s_pos : r_pos).push_back(k);
        if (r_pos.size() != t_) throw std::logic_error("DegreeContext: piece pattern does not match t");
        auto pair_at = [&](std::size_t k) { return std::array<Vertex, 2>{ch[1 + 3 * k], ch[2 + 3 * k]}; };
        auto& ps = by_piece[pc];
        ps.piece = pc;
        if (h == i) {
            Options o;
            for (std::size_t k : s_pos) o.push_back(pair_at(k));
            for (std::size_t k : r_pos) {
                auto cc = pair_at(k);
                const Vertex qv = q[k - 1];
                if (cc[0] != qv && cc[1] != qv) throw std::logic_error("DegreeContext: chain misses its pattern");
                o.push_back({cc[0] == qv ? cc[1] : cc[0], kStar});
            }
            ps.left.push_back(std::move(o));
        }
        if (h == j) {
            Options o;
            for (std::size_t k : s_pos) o.push_back(pair_at(k));
            ps.right.push_back(std::move(o));
        }
    }
    for (auto& [pc, ps] : by_piece)
        if (!ps.left.empty() && !ps.right.empty()) pieces_.push_back(std::move(ps));
}

std::size_t DegreeContext::row_slot(std::size_t pos) const {
    const std::size_t k = r_ - t_ + 1;
    if (pos < k) return pos;
    if (pos < r_ + 1) return 2 * k + (pos - k);
    return k + (pos - r_ - 1);
}

std::uint64_t DegreeContext::chain_pairs() const {
    std::uint64_t s = 0;
    for (const auto& p : pieces_) s += p.left.size() * p.right.size();
    return s;
}

BigInt DegreeContext::num_tuples() const {
    return (BigInt(1) << (2 * (r_ - t_ + 1))) * chain_pairs();
}

std::vector<std::vector<Vertex>> DegreeContext::tuples() const {
    std::vector<std::vector<Vertex>> out;
    auto expand = [](const Options& o) {
        std::vector<std::vector<Vertex>> res{{}};
        for (const auto& opt : o) {
            std::vector<std::vector<Vertex>> nxt;
            for (const auto& pre : res)
                for (Vertex v : opt) {
                    if (v == kStar) continue;
                    auto x = pre;
                    x.push_back(v);
                    nxt.push_back(std::move(x));
                }
            res = std::move(nxt);
        }
        return res;
    };
    for (const auto& p : pieces_)
        for (const auto& l : p.left)
            for (const auto& r : p.right)
                for (const auto& a : expand(l))
                    for (const auto& b : expand(r)) {
                        auto u = a;
                        u.insert(u.end(), b.begin(), b.end());
                        out.push_back(std::move(u));
                    }
    return out;
}

std::uint64_t DegreeContext::deg(const std::vector<std::vector<char>>& member) const {
    const std::size_t a = u_positions();
    std::uint64_t total = 0;
    for (const auto& p : pieces_) {
        std::uint64_t f = 0, g = 0;
        for (const auto& o : p.left) {
            std::uint64_t prod = 1;
            for (std::size_t pos = 0; pos < a && prod; ++pos) prod *= opt_count(o[pos], member[row_slot(pos)]);
            f += prod;
        }
        if (!f) continue;
        for (const auto& o : p.right) {
            std::uint64_t prod = 1;
            for (std::size_t pos = 0; pos < o.size() && prod; ++pos)
                prod *= opt_count(o[pos], member[row_slot(a + pos)]);
            g += prod;
        }
        total += f * g;
    }
    return total;
}

std::uint64_t DegreeContext::deg_row(const TupleCodec& codec, std::uint64_t rank) const {
    std::vector<Vertex> sets;
    std::vector<std::vector<char>> member;
    fill_member(codec, rank, sets, member);
    return deg(member);
}

std::uint64_t DegreeContext::deg_Z(const std::vector<Vertex>& z) const {
    if (z.size() != positions()) throw std::invalid_argument("deg_Z: Z has wrong length");
    const std::size_t a = u_positions();
    std::uint64_t total = 0;
    for (const auto& p : pieces_) {
        std::uint64_t f = 0, g = 0;
        for (const auto& o : p.left) {
            std::uint64_t prod = 1;
            for (std::size_t pos = 0; pos < a && prod; ++pos) prod *= opt_match(o[pos], z[pos]);
            f += prod;
        }
        if (!f) continue;
        for (const auto& o : p.right) {
            std::uint64_t prod = 1;
            for (std::size_t pos = 0; pos < o.size() && prod; ++pos) prod *= opt_match(o[pos], z[a + pos]);
            g += prod;
        }
        total += f * g;
    }
    return total;
}

double mu_Z(const DegreeContext& ctx, const std::vector<Vertex>& z, double p) {
    std::size_t sz = 0;
    for (Vertex v : z) sz += v != kStar;
    return std::pow(p, static_cast<double>(ctx.positions() - sz)) * static_cast<double>(ctx.deg_Z(z));
}

namespace {

// Star-transformed counts of one side: out[code] = number of (chain, choice)
// with the side pattern encoded by `code` (digit n = star) contained in it.
void side_transform(const std::vector<DegreeContext::Options>& chains, std::size_t len, std::size_t base,
                    std::size_t offset, std::vector<std::uint64_t>& out) {
    for (const auto& o : chains) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> cur{{0, 1}}, nxt;
        std::uint64_t w = 1;
        for (std::size_t pos = 0; pos < len; ++pos, w *= base) {
            const auto& opt = o[offset + pos];
            nxt.clear();
            for (auto [code, mult] : cur) {
                nxt.emplace_back(code + (base - 1) * w, mult * (opt[1] == kStar ? 1 : 2));
                nxt.emplace_back(code + opt[0] * w, mult);
                if (opt[1] != kStar) nxt.emplace_back(code + opt[1] * w, mult);
            }
            std::swap(cur, nxt);
        }
        for (auto [code, mult] : cur) out[code] += mult;
    }
}

std::vector<std::uint8_t> code_sizes(std::size_t len, std::size_t base) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= base;
    std::vector<std::uint8_t> sz(total);
    for (std::uint64_t c = 0; c < total; ++c) {
        std::uint64_t x = c;
        std::uint8_t s = 0;
        for (std::size_t i = 0; i < len; ++i, x /= base) s += (x % base) != base - 1;
        sz[c] = s;
    }
    return sz;
}

std::vector<Vertex> decode(std::uint64_t c1, std::uint64_t c2, std::size_t a, std::size_t b, std::size_t base) {
    std::vector<Vertex> z;
    for (std::size_t i = 0; i < a; ++i, c1 /= base) z.push_back(c1 % base == base - 1 ? kStar : Vertex(c1 % base));
    for (std::size_t i = 0; i < b; ++i, c2 /= base) z.push_back(c2 % base == base - 1 ? kStar : Vertex(c2 % base));
    return z;
}

}  // namespace

PartialsCheck check_partials(const DegreeContext& ctx, double mu, double gamma, double p, std::uint64_t samples,
                          std::uint64_t seed, const Budgets& budgets) {
    PartialsCheck res;
    const std::size_t s = ctx.positions();
    const std::size_t a = ctx.u_positions(), b = s - a;
    res.max_ratio_by_size.assign(s + 1, 0.0);
    std::vector<double> factor(s + 1);
    for (std::size_t k = 0; k <= s; ++k)
        factor[k] = std::pow(p, static_cast<double>(s - k)) / (mu * std::pow(gamma, static_cast<double>(k)));
    auto record = [&](std::size_t k, std::uint64_t deg, auto&& z_of) {
        const double ratio = factor[k] * static_cast<double>(deg);
        if (ratio > res.max_ratio_by_size[k]) res.max_ratio_by_size[k] = ratio;
        if (ratio > res.max_ratio) {
            res.max_ratio = ratio;
            res.worst = z_of();
        }
        if (ratio > 1.0 + 1e-12) ++res.violations;
    };

    const std::size_t base = ctx.n() + 1;
    if (s <= 6 && ctx.n() <= 30 && samples == 0) {
        res.exhaustive = true;
        const auto sz1 = code_sizes(a, base), sz2 = code_sizes(b, base);
        const std::uint64_t n1 = sz1.size(), n2 = sz2.size();
        const auto& pcs = ctx.pieces();
        check_budget("pruning", BigInt(pcs.size()) * (n1 + n2), budgets.max_nnz);
        std::vector<std::vector<std::uint64_t>> F(pcs.size(), std::vector<std::uint64_t>(n1, 0));
        std::vector<std::vector<std::uint64_t>> G(pcs.size(), std::vector<std::uint64_t>(n2, 0));
        for (std::size_t q = 0; q < pcs.size(); ++q) {
            side_transform(pcs[q].left, a, base, 0, F[q]);
            side_transform(pcs[q].right, b, base, 0, G[q]);
        }
        std::vector<std::uint64_t> acc(n2);
        for (std::uint64_t c1 = 0; c1 < n1; ++c1) {
            std::fill(acc.begin(), acc.end(), 0);
            bool any = false;
            for (std::size_t q = 0; q < pcs.size(); ++q) {
                const std::uint64_t f = F[q][c1];
                if (!f) continue;
                any = true;
                const auto& g = G[q];
                for (std::uint64_t c2 = 0; c2 < n2; ++c2) acc[c2] += f * g[c2];
            }
            res.checked += n2;
            if (!any) continue;
            for (std::uint64_t c2 = 0; c2 < n2; ++c2)
                if (acc[c2]) record(sz1[c1] + sz2[c2], acc[c2], [&] { return decode(c1, c2, a, b, base); });
        }
        return res;
    }

    // Sampled: Z is a random sub-pattern of a random tuple of T_{i,j}, with
    // |Z| fixed per stratum.
    const auto& pcs = ctx.pieces();
    if (pcs.empty()) return res;
    std::vector<std::uint64_t> cum;
    std::uint64_t tot = 0;
    for (const auto& pc : pcs) cum.push_back(tot += pc.left.size() * pc.right.size());
    Rng rng(derive_seed(seed, "check_partials"));
    for (std::size_t k = 0; k <= s; ++k) {
        for (std::uint64_t it = 0; it < samples; ++it) {
            const std::uint64_t pick = rng.below(tot);
            const auto& pc = pcs[static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), pick) - cum.begin())];
            const auto& l = pc.left[rng.below(pc.left.size())];
            const auto& r = pc.right[rng.below(pc.right.size())];
            std::vector<Vertex> u;
            for (const auto* o : {&l, &r})
                for (const auto& opt : *o) u.push_back(opt[1] == kStar ? opt[0] : opt[rng.below(2)]);
            std::vector<Vertex> z(s, kStar);
            for (auto pos : rng.subset(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(k))) z[pos] = u[pos];
            ++res.checked;
            record(k, ctx.deg_Z(z), [&] { return z; });
        }
    }
    return res;
}

std::vector<DegreeContext> degree_contexts(const KikuchiOperator& op) {
    std::vector<DegreeContext> out;
    for (const auto& [i, j] : op.paired().matching) {
        out.emplace_back(op.psi(), i, j);
        out.emplace_back(op.psi(), j, i);
    }
    return out;
}

std::vector<std::uint64_t> BadRows::ranks() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t r = 0; r < mask.size(); ++r)
        if (mask[r]) out.push_back(r);
    return out;
}

BadRows find_bad_rows(const KikuchiOperator& op, double Delta, const BadRowOptions& opt, const Budgets& budgets) {
    BadRows res;
    res.rows = op.size();
    res.exhaustive = opt.exhaustive;
    const auto ctxs = degree_contexts(op);
    const TupleCodec& codec = op.codec();
    const std::size_t k = op.r() - op.t() + 1;
    auto is_bad = [&](std::vector<std::vector<char>>& member) { return row_is_bad(ctxs, k, member, Delta); };
    if (opt.exhaustive) {
        check_budget("pruning", BigInt(op.size()), budgets.max_vector_dim);
        res.mask.assign(op.size(), 0);
        constexpr std::uint64_t kBlock = 1024;
        const std::size_t nb = static_cast<std::size_t>((op.size() + kBlock - 1) / kBlock);
        std::vector<std::uint64_t> counts(nb, 0);
        for_blocks(nb, default_threads(), [&](std::size_t blk) {
            std::vector<Vertex> sets;
            std::vector<std::vector<char>> member;
            const std::uint64_t end = std::min<std::uint64_t>(op.size(), (blk + 1) * kBlock);
            for (std::uint64_t row = blk * kBlock; row < end; ++row) {
                fill_member(codec, row, sets, member);
                if (is_bad(member)) {
                    res.mask[row] = 1;
                    ++counts[blk];
                }
            }
        });
        for (auto c : counts) res.bad += c;
        res.examined = op.size();
        res.fraction = res.rows ? static_cast<double>(res.bad) / static_cast<double>(res.rows) : 0.0;
        res.ci_low = res.ci_high = res.fraction;
        return res;
    }
    Rng rng(derive_seed(opt.seed, "find_bad_rows"));
    std::vector<std::vector<char>> member(codec.slots());
    for (std::uint64_t it = 0; it < opt.trials; ++it) {
        for (std::size_t s = 0; s < codec.slots(); ++s) {
            member[s].assign(codec.n(), 0);
            for (auto v : rng.subset(static_cast<std::uint32_t>(codec.n()), static_cast<std::uint32_t>(codec.ell())))
                member[s][v] = 1;
        }
        res.bad += is_bad(member);
    }
    res.examined = opt.trials;
    res.fraction = opt.trials ? static_cast<double>(res.bad) / static_cast<double>(opt.trials) : 0.0;
    std::tie(res.ci_low, res.ci_high) = wilson99(res.bad, opt.trials);
    return res;
}

std::vector<char> bad_among(const KikuchiOperator& op, double Delta, const std::vector<std::uint64_t>& ranks) {
    const auto ctxs = degree_contexts(op);
    const std::size_t k = op.r() - op.t() + 1;
    std::vector<char> out(ranks.size(), 0);
    constexpr std::size_t kBlock = 256;
    const std::size_t nb = (ranks.size() + kBlock - 1) / kBlock;
    for_blocks(nb, default_threads(), [&](std::size_t blk) {
        std::vector<Vertex> sets;
        std::vector<std::vector<char>> member;
        const std::size_t end = std::min(ranks.size(), (blk + 1) * kBlock);
        for (std::size_t a = blk * kBlock; a < end; ++a) {
            fill_member(op.codec(), ranks[a], sets, member);
            out[a] = row_is_bad(ctxs, k, member, Delta);
        }
    });
    return out;
}

PruneResult prune(const KikuchiOperator& op, const std::vector<char>& bad, const Budgets& budgets) {
    if (bad.size() != op.size()) throw std::invalid_argument("prune: mask has wrong length");
    check_budget("pruning", BigInt(op.size()), budgets.max_vector_dim);
    auto mask = std::make_shared<const std::vector<char>>(bad);
    PruneResult res{op.with_pruned(mask)};
    for (char c : bad) res.bad_rows += c != 0;
    res.crude_bound = 2 * BigInt(res.bad_rows) *
                      boost::multiprecision::pow(BigInt(2 * op.ell()), static_cast<unsigned>(op.slots()));
    res.within_crude = true;
    const auto& pi = op.paired();
    std::vector<std::uint32_t> rdeg(op.size()), cdeg(op.size());
    for (std::size_t e = 0; e < op.num_edges(); ++e) {
        std::fill(rdeg.begin(), rdeg.end(), 0);
        std::fill(cdeg.begin(), cdeg.end(), 0);
        std::uint64_t removed = 0;
        for (std::size_t p = pi.edge_offsets[e]; p < pi.edge_offsets[e + 1]; ++p)
            op.for_each_entry(p, [&](std::uint64_t row, std::uint64_t col) {
                if (bad[row] || bad[col]) {
                    ++removed;
                    return;
                }
                ++rdeg[row];
                ++cdeg[col];
            });
        res.removed += removed;
        res.within_crude = res.within_crude && BigInt(removed) <= res.crude_bound;
        res.max_row_degree = std::max<std::uint64_t>(res.max_row_degree, *std::max_element(rdeg.begin(), rdeg.end()));
        res.max_col_degree = std::max<std::uint64_t>(res.max_col_degree, *std::max_element(cdeg.begin(), cdeg.end()));
    }
    return res;
}

CouplingResult coupling_experiment(const DegreeContext& ctx, std::size_t ell, double Delta, std::uint64_t trials,
                                   std::uint64_t seed) {
    CouplingResult res;
    res.trials = trials;
    const std::size_t n = ctx.n(), slots = ctx.positions();
    const double p = biased_p(n, ctx.r(), ell);
    res.slack = coupling_slack(ctx.r(), ell);
    std::vector<std::vector<char>> member(slots, std::vector<char>(n, 0));
    std::uint64_t hit_exact = 0, hit_biased = 0;
    Rng re(derive_seed(seed, "coupling_exact"));
    for (std::uint64_t it = 0; it < trials; ++it) {
        for (auto& m : member) {
            std::fill(m.begin(), m.end(), 0);
            for (auto v : re.subset(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(ell))) m[v] = 1;
        }
        hit_exact += static_cast<double>(ctx.deg(member)) >= Delta;
    }
    Rng rb(derive_seed(seed, "coupling_biased"));
    for (std::uint64_t it = 0; it < trials; ++it) {
        for (auto& m : member)
            for (auto& x : m) x = rb.bernoulli(p) ? 1 : 0;
        hit_biased += static_cast<double>(ctx.deg(member)) >= Delta;
    }
    const double tn = static_cast<double>(std::max<std::uint64_t>(trials, 1));
    res.tail_exact = static_cast<double>(hit_exact) / tn;
    res.tail_biased = static_cast<double>(hit_biased) / tn;
    res.exact_ci_low = wilson99(hit_exact, trials).first;
    res.biased_ci_high = wilson99(hit_biased, trials).second;
    res.holds = res.exact_ci_low <= res.biased_ci_high + res.slack;
    return res;
}

}  // namespace lcc
