#include "lcc/kikuchi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lcc/parallel.hpp"

namespace lcc {

namespace {

using SlotList = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

std::vector<Vertex> with_vertex(const std::vector<Vertex>& u, Vertex a) {
    std::vector<Vertex> s(u);
    s.insert(std::upper_bound(s.begin(), s.end(), a), a);
    return s;
}

std::vector<Vertex> pool_without(std::size_t n, Vertex a, Vertex b) {
    std::vector<Vertex> p;
    p.reserve(n);
    for (Vertex v = 0; v < n; ++v)
        if (v != a && v != b) p.push_back(v);
    return p;
}

// Neumaier-compensated accumulation into acc[i] with error term comp[i].
inline void comp_add(std::vector<double>& acc, std::vector<double>& comp, std::uint64_t i, double v) {
    const double a = acc[i];
    const double s = a + v;
    if (std::abs(a) >= std::abs(v))
        comp[i] += (a - s) + v;
    else
        comp[i] += (v - s) + a;
    acc[i] = s;
}

}  // namespace

KikuchiOperator::KikuchiOperator(std::shared_ptr<const PairedInstance> pi, std::size_t ell, const Budgets& budgets)
    : pi_(std::move(pi)), budgets_(budgets) {
    if (!pi_ || !pi_->psi) throw std::invalid_argument("KikuchiOperator: null paired instance");
    const XorInstance& psi = *pi_->psi;
    if (!psi.t()) throw std::invalid_argument("KikuchiOperator: source must be a Ψ^(t) instance");
    r_ = psi.r();
    t_ = *psi.t();
    if (ell < 1 || psi.n() < 2 * ell) throw std::invalid_argument("KikuchiOperator: need 1 <= ell and 2 ell <= n");
    codec_ = TupleCodec(psi.n(), ell, 2 * r_ + 2 - t_);
    weights_.assign(pi_->matching.size(), 1.0);
    pair_edge_.resize(pi_->pairs.size());
    for (std::size_t e = 0; e + 1 < pi_->edge_offsets.size(); ++e)
        for (std::size_t p = pi_->edge_offsets[e]; p < pi_->edge_offsets[e + 1]; ++p) pair_edge_[p] = e;
}

BigInt KikuchiOperator::D() const {
    BigInt d = BigInt(1) << (2 * (r_ - t_ + 1));
    return d * boost::multiprecision::pow(binom_big(n() - 2, ell() - 1), static_cast<unsigned>(slots()));
}

std::vector<KikuchiOperator::SlotSpec> KikuchiOperator::slot_specs(std::size_t pair) const {
    const XorInstance& psi = *pi_->psi;
    const auto [a, b] = pi_->pairs.at(pair);
    auto ca = psi.chain(a);
    auto cb = psi.chain(b);
    const Pattern& q = psi.pieces()[static_cast<std::size_t>(psi.piece(a))];
    // C_h with h = 0 or pattern position h-1 free goes to an S-slot; a fixed
    // position makes C_h an R-slot.
    std::vector<std::size_t> s_pos, r_pos;
    s_pos.push_back(0);
    for (std::size_t h = 1; h <= r_; ++h) (q[h - 1] == kStar ? s_pos : r_pos).push_back(h);
    if (r_pos.size() != t_ || s_pos.size() != r_ - t_ + 1)
        throw std::logic_error("KikuchiOperator: piece pattern does not match t");
    std::vector<SlotSpec> out;
    out.reserve(slots());
    for (std::size_t h : s_pos) out.push_back({false, ca[1 + 3 * h], ca[2 + 3 * h]});
    for (std::size_t h : s_pos) out.push_back({false, cb[1 + 3 * h], cb[2 + 3 * h]});
    for (std::size_t h : r_pos) {
        const Vertex qv = q[h - 1];
        auto other = [&](std::span<const Vertex> c) {
            Vertex x0 = c[1 + 3 * h], x1 = c[2 + 3 * h];
            if (x0 == qv) return x1;
            if (x1 == qv) return x0;
            throw std::logic_error("KikuchiOperator: chain does not contain its piece pattern");
        };
        out.push_back({true, other(ca), other(cb)});
    }
    return out;
}

bool KikuchiOperator::degenerate(std::size_t pair) const {
    for (const auto& s : slot_specs(pair))
        if (s.r_slot && s.a == s.b) return true;
    return false;
}

std::size_t KikuchiOperator::degenerate_pairs() const {
    std::size_t c = 0;
    for (std::size_t p = 0; p < num_pairs(); ++p) c += degenerate(p);
    return c;
}

BigInt KikuchiOperator::pair_entry_count(std::size_t pair) const {
    const BigInt s = 2 * binom_big(n() - 2, ell() - 1);
    BigInt total = 1;
    for (const auto& sp : slot_specs(pair)) {
        if (!sp.r_slot)
            total *= s;
        else
            total *= sp.a == sp.b ? binom_big(n() - 1, ell() - 1) : binom_big(n() - 2, ell() - 1);
    }
    return total;
}

std::size_t KikuchiOperator::edge_of_pair(std::size_t pair) const { return pair_edge_.at(pair); }

void KikuchiOperator::slot_lists(std::size_t pair, std::vector<SlotList>& out) const {
    auto specs = slot_specs(pair);
    out.assign(specs.size(), {});
    for (std::size_t s = 0; s < specs.size(); ++s) {
        const auto& sp = specs[s];
        const std::uint64_t w = codec_.weight(s);
        auto& list = out[s];
        for_each_subset(pool_without(n(), sp.a, sp.b), ell() - 1, [&](const std::vector<Vertex>& u) {
            const std::uint64_t ra = colex_rank(with_vertex(u, sp.a)) * w;
            const std::uint64_t rb = colex_rank(with_vertex(u, sp.b)) * w;
            list.emplace_back(ra, rb);
            if (!sp.r_slot) list.emplace_back(rb, ra);
        });
    }
}

std::uint64_t KikuchiOperator::block_swap(std::uint64_t rank) const {
    const std::size_t k = r_ - t_ + 1;
    std::vector<std::uint64_t> dig(slots());
    for (std::size_t s = 0; s < slots(); ++s) dig[s] = (rank / codec_.weight(s)) % codec_.base();
    for (std::size_t s = 0; s < k; ++s) std::swap(dig[s], dig[s + k]);
    std::uint64_t out = 0;
    for (std::size_t s = 0; s < slots(); ++s) out += dig[s] * codec_.weight(s);
    return out;
}

int KikuchiOperator::lifted_sign(std::uint64_t rank, const std::vector<int>& x) const {
    std::vector<Vertex> sets;
    codec_.unrank(rank, sets);
    int s = 1;
    for (Vertex v : sets) s *= x[v];
    return s;
}

KikuchiOperator KikuchiOperator::with_signs(const std::vector<int>& b) const {
    if (b.size() != psi().k()) throw std::invalid_argument("with_signs: b has wrong length");
    std::vector<double> w(num_edges());
    for (std::size_t e = 0; e < num_edges(); ++e)
        w[e] = static_cast<double>(b[pi_->matching[e].first] * b[pi_->matching[e].second]);
    return with_edge_weights(std::move(w));
}

KikuchiOperator KikuchiOperator::with_edge_weights(std::vector<double> w) const {
    if (w.size() != num_edges()) throw std::invalid_argument("with_edge_weights: wrong length");
    KikuchiOperator op(*this);
    op.weights_ = std::move(w);
    return op;
}

KikuchiOperator KikuchiOperator::single_edge(std::size_t e) const {
    if (e >= num_edges()) throw std::out_of_range("single_edge: no such edge");
    std::vector<double> w(num_edges(), 0.0);
    w[e] = 1.0;
    return with_edge_weights(std::move(w));
}

KikuchiOperator KikuchiOperator::with_pruned(std::shared_ptr<const std::vector<char>> bad) const {
    if (bad && bad->size() != size()) throw std::invalid_argument("with_pruned: mask has wrong length");
    KikuchiOperator op(*this);
    op.bad_ = std::move(bad);
    return op;
}

void KikuchiOperator::accumulate(std::span<const double> x, std::span<double> y, bool transpose) const {
    if (x.size() != size() || y.size() != size()) throw std::invalid_argument("KikuchiOperator: size mismatch");
    check_budget("kikuchi", BigInt(size()), budgets_.max_vector_dim);
    const std::size_t np = num_pairs();
    const std::size_t nb = std::max<std::size_t>(1, std::min<std::size_t>(default_threads(), np));
    std::vector<std::vector<double>> acc(nb), comp(nb);
    const std::vector<char>* bad = bad_.get();
    for_blocks(nb, static_cast<unsigned>(nb), [&](std::size_t blk) {
        auto& a = acc[blk];
        auto& c = comp[blk];
        a.assign(size(), 0.0);
        c.assign(size(), 0.0);
        const std::size_t lo = np * blk / nb, hi = np * (blk + 1) / nb;
        for (std::size_t p = lo; p < hi; ++p) {
            const double w = weights_[pair_edge_[p]];
            if (w == 0) continue;
            for_each_entry(p, [&](std::uint64_t row, std::uint64_t col) {
                if (bad && ((*bad)[row] || (*bad)[col])) return;
                if (transpose)
                    comp_add(a, c, col, w * x[row]);
                else
                    comp_add(a, c, row, w * x[col]);
            });
        }
    });
    std::vector<double> tot(size(), 0.0), tc(size(), 0.0);
    for (std::size_t blk = 0; blk < nb; ++blk)
        for (std::uint64_t i = 0; i < size(); ++i) {
            comp_add(tot, tc, i, acc[blk][i]);
            comp_add(tot, tc, i, comp[blk][i]);
        }
    for (std::uint64_t i = 0; i < size(); ++i) y[i] = tot[i] + tc[i];
}

void KikuchiOperator::apply(std::span<const double> x, std::span<double> y) const { accumulate(x, y, false); }

void KikuchiOperator::apply_transpose(std::span<const double> x, std::span<double> y) const {
    accumulate(x, y, true);
}

SparseMatrix KikuchiOperator::materialize(const Budgets& budgets) const {
    check_budget("kikuchi", BigInt(size()), budgets.max_materialize_dim);
    BigInt total = 0;
    for (std::size_t p = 0; p < num_pairs(); ++p)
        if (weights_[pair_edge_[p]] != 0) total += pair_entry_count(p);
    check_budget("kikuchi", total, budgets.max_nnz);
    std::vector<Triplet> e;
    e.reserve(static_cast<std::size_t>(total));
    const std::vector<char>* bad = bad_.get();
    for (std::size_t p = 0; p < num_pairs(); ++p) {
        const double w = weights_[pair_edge_[p]];
        if (w == 0) continue;
        for_each_entry(p, [&](std::uint64_t row, std::uint64_t col) {
            if (bad && ((*bad)[row] || (*bad)[col])) return;
            e.push_back({row, col, w});
        });
    }
    return SparseMatrix(size(), size(), std::move(e));
}

QuadFormCheck quadratic_form_check(const KikuchiOperator& op, const std::vector<int>& x, const std::vector<int>& b) {
    const XorInstance& psi = op.psi();
    const PairedInstance& pi = op.paired();
    if (x.size() != psi.n()) throw std::invalid_argument("quadratic_form_check: x has wrong length");
    if (b.size() != psi.k()) throw std::invalid_argument("quadratic_form_check: b has wrong length");
    QuadFormCheck res;
    for (std::size_t p = 0; p < op.num_pairs(); ++p) {
        const auto [ca, cb] = pi.pairs[p];
        const auto& edge = pi.matching[op.edge_of_pair(p)];
        const int bb = b[edge.first] * b[edge.second];
        int mono = bb;
        for (Vertex v : psi.support(ca)) mono *= x[v];
        for (Vertex v : psi.support(cb)) mono *= x[v];
        res.rhs_exact += op.pair_entry_count(p) * mono;
        if (op.degenerate(p)) ++res.degenerate_pairs;
        std::int64_t acc = 0;
        op.for_each_entry(p, [&](std::uint64_t row, std::uint64_t col) {
            acc += op.lifted_sign(row, x) * op.lifted_sign(col, x);
        });
        res.lhs += bb * acc;
    }
    res.rhs = op.D() * eval_paired(pi, b, x);
    res.equal = BigInt(res.lhs) == res.rhs;
    res.equal_exact = BigInt(res.lhs) == res.rhs_exact;
    return res;
}

namespace {

// max over signs of the small side of sum over the large side of |(A s)_j|.
double component_max(const std::vector<std::uint64_t>& small, const std::vector<std::uint64_t>& large,
                     const std::vector<Triplet>& entries, bool small_is_rows) {
    std::vector<std::size_t> si(entries.size()), li(entries.size());
    auto pos = [](const std::vector<std::uint64_t>& v, std::uint64_t x) {
        return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
    };
    for (std::size_t k = 0; k < entries.size(); ++k) {
        si[k] = pos(small, small_is_rows ? entries[k].row : entries[k].col);
        li[k] = pos(large, small_is_rows ? entries[k].col : entries[k].row);
    }
    const std::size_t s = small.size();
    if (s == 0) return 0;
    double best = 0;
    std::vector<double> acc(large.size());
    // A global sign flip leaves the value unchanged, so fix the first sign.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (s - 1)); ++mask) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t k = 0; k < entries.size(); ++k) {
            const double sg = (si[k] > 0 && ((mask >> (si[k] - 1)) & 1)) ? -1.0 : 1.0;
            acc[li[k]] += sg * entries[k].value;
        }
        double v = 0;
        for (double a : acc) v += std::abs(a);
        best = std::max(best, v);
    }
    return best;
}

std::optional<double> exact_by_components(const SparseMatrix& a, std::size_t cap) {
    const std::uint64_t R = a.rows(), C = a.cols();
    std::vector<std::uint64_t> parent(R + C);
    std::iota(parent.begin(), parent.end(), std::uint64_t{0});
    auto find = [&](std::uint64_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    auto trip = a.triplets();
    for (const auto& t : trip) {
        auto x = find(t.row), y = find(R + t.col);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }
    std::vector<std::uint64_t> comp_of(R + C);
    for (std::uint64_t v = 0; v < R + C; ++v) comp_of[v] = find(v);
    std::vector<std::uint64_t> roots;
    for (const auto& t : trip) roots.push_back(comp_of[t.row]);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    auto idx = [&](std::uint64_t root) {
        return static_cast<std::size_t>(std::lower_bound(roots.begin(), roots.end(), root) - roots.begin());
    };
    std::vector<std::vector<std::uint64_t>> rows(roots.size()), cols(roots.size());
    std::vector<std::vector<Triplet>> ent(roots.size());
    for (const auto& t : trip) ent[idx(comp_of[t.row])].push_back(t);
    for (std::size_t c = 0; c < roots.size(); ++c) {
        for (const auto& t : ent[c]) {
            rows[c].push_back(t.row);
            cols[c].push_back(t.col);
        }
        for (auto* v : {&rows[c], &cols[c]}) {
            std::sort(v->begin(), v->end());
            v->erase(std::unique(v->begin(), v->end()), v->end());
        }
        if (std::min(rows[c].size(), cols[c].size()) > cap) return std::nullopt;
    }
    double total = 0;
    for (std::size_t c = 0; c < roots.size(); ++c) {
        if (rows[c].size() <= cols[c].size())
            total += component_max(rows[c], cols[c], ent[c], true);
        else
            total += component_max(cols[c], rows[c], ent[c], false);
    }
    return total;
}

}  // namespace

InftyToOne infty_to_1(const SparseMatrix& a, std::size_t exact_cap, double tol, std::uint64_t seed) {
    InftyToOne res;
    auto pw = power_iteration(a, tol, 20000, seed);
    res.sigma = pw.sigma;
    res.converged = pw.converged;
    res.upper = std::sqrt(static_cast<double>(a.rows()) * static_cast<double>(a.cols())) * pw.sigma;
    res.exact = exact_by_components(a, exact_cap);
    return res;
}

double infty_to_1_exhaustive(const SparseMatrix& a) {
    if (std::min(a.rows(), a.cols()) > 24) throw std::invalid_argument("infty_to_1_exhaustive: matrix too large");
    std::vector<std::uint64_t> rows(a.rows()), cols(a.cols());
    std::iota(rows.begin(), rows.end(), std::uint64_t{0});
    std::iota(cols.begin(), cols.end(), std::uint64_t{0});
    auto trip = a.triplets();
    if (rows.size() <= cols.size()) return component_max(rows, cols, trip, true);
    return component_max(cols, rows, trip, false);
}

EvenQReport build_basic_even_q(std::size_t n, std::size_t q,
                               const std::vector<std::vector<std::vector<Vertex>>>& hyperedges,
                               const std::vector<int>& b, const std::vector<int>& x, std::size_t ell,
                               const Budgets& budgets) {
    if (q == 0 || q % 2) throw std::invalid_argument("build_basic_even_q: q must be even and positive");
    if (ell < q / 2 || ell > n) throw std::invalid_argument("build_basic_even_q: need q/2 <= ell <= n");
    if (b.size() != hyperedges.size()) throw std::invalid_argument("build_basic_even_q: b has wrong length");
    if (x.size() != n) throw std::invalid_argument("build_basic_even_q: x has wrong length");
    EvenQReport rep;
    rep.n = n;
    rep.q = q;
    rep.ell = ell;
    rep.N = binom_big(n, ell);
    rep.D = binom_big(n - q, ell - q / 2) * binom_big(q, q / 2);
    check_budget("kikuchi", rep.N, budgets.max_materialize_dim);
    for (const auto& h : hyperedges) rep.hyperedges += h.size();
    check_budget("kikuchi", rep.D * rep.hyperedges, budgets.max_nnz);
    std::vector<Triplet> e;
    for (std::size_t i = 0; i < hyperedges.size(); ++i) {
        for (const auto& c0 : hyperedges[i]) {
            std::vector<Vertex> c(c0);
            std::sort(c.begin(), c.end());
            if (c.size() != q || std::adjacent_find(c.begin(), c.end()) != c.end() || c.back() >= n)
                throw std::invalid_argument("build_basic_even_q: hyperedge is not a q-subset of [n]");
            int mono = b[i];
            for (Vertex v : c) mono *= x[v];
            rep.lhs += mono;
            std::vector<Vertex> pool;
            for (Vertex v = 0; v < n; ++v)
                if (!std::binary_search(c.begin(), c.end(), v)) pool.push_back(v);
            for_each_subset(c, q / 2, [&](const std::vector<Vertex>& half) {
                std::vector<Vertex> rest;
                std::set_difference(c.begin(), c.end(), half.begin(), half.end(), std::back_inserter(rest));
                for_each_subset(pool, ell - q / 2, [&](const std::vector<Vertex>& u) {
                    std::vector<Vertex> s, t;
                    std::merge(half.begin(), half.end(), u.begin(), u.end(), std::back_inserter(s));
                    std::merge(rest.begin(), rest.end(), u.begin(), u.end(), std::back_inserter(t));
                    e.push_back({colex_rank(s), colex_rank(t), static_cast<double>(b[i])});
                });
            });
        }
    }
    const auto N = static_cast<std::uint64_t>(rep.N);
    rep.matrix = SparseMatrix(N, N, std::move(e));
    rep.sigma = power_iteration(rep.matrix, 1e-10, 20000, 1).sigma;
    const double D = static_cast<double>(rep.D);
    rep.avg_degree = static_cast<double>(rep.hyperedges) * D / static_cast<double>(N);
    rep.rhs = static_cast<double>(N) * rep.sigma / D;
    rep.holds = rep.lhs <= rep.rhs * (1 + 1e-9) + 1e-9;
    return rep;
}

}  // namespace lcc
