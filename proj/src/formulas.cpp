#include "lcc/formulas.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "lcc/parallel.hpp"

namespace lcc {

namespace {

// Vertices of odd multiplicity, sorted.
void odd_part(std::vector<Vertex>& v) {
    std::sort(v.begin(), v.end());
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        if ((j - i) % 2) out.push_back(v[i]);
        i = j;
    }
    v.swap(out);
}

std::uint64_t support_mask(std::span<const Vertex> s) {
    std::uint64_t m = 0;
    for (Vertex v : s) m ^= std::uint64_t{1} << v;
    return m;
}

std::uint64_t pattern_mask(const Pattern& q) {
    std::uint64_t m = 0;
    for (Vertex v : q)
        if (v != kStar) m ^= std::uint64_t{1} << v;
    return m;
}

void check_signs(const std::vector<int>& v, std::size_t len, const char* what) {
    if (v.size() != len)
        throw std::invalid_argument(std::string("dimension mismatch for ") + what + ": expected " +
                                    std::to_string(len) + ", got " + std::to_string(v.size()));
    for (int s : v)
        if (s != 1 && s != -1) throw std::invalid_argument(std::string(what) + " must be a ±1 vector");
}

BigInt big_pow(std::uint64_t b, std::size_t e) {
    return boost::multiprecision::pow(BigInt(b), static_cast<unsigned>(e));
}

}  // namespace

XorInstance build_phi(const MatchingFamily& fam, std::size_t r, const std::vector<Vertex>& heads,
                      const Budgets& budgets) {
    if (fam.field_char() != 2) throw std::invalid_argument("build_phi: only F2 families are supported");
    std::vector<std::int64_t> pos(fam.n(), -1);
    for (std::size_t i = 0; i < heads.size(); ++i) {
        if (heads[i] >= fam.n()) throw std::invalid_argument("build_phi: head out of range");
        if (pos[heads[i]] >= 0) throw std::invalid_argument("build_phi: repeated head");
        pos[heads[i]] = static_cast<std::int64_t>(i);
    }
    auto cnt = count_chains(fam, r + 1);
    BigInt need = 0;
    for (Vertex u : heads) need += cnt.per_head[u];
    check_budget("phi", need, budgets.max_constraints);

    XorInstance inst;
    inst.n_ = fam.n();
    inst.r_ = r;
    inst.heads_ = heads;
    auto cs = std::make_shared<ChainSet>(build_chains_from(fam, r + 1, heads, budgets));
    const std::size_t w = cs->width();
    std::vector<Vertex> buf;
    for (std::size_t c = 0; c < cs->size(); ++c) {
        auto ch = cs->chain(c);
        buf.clear();
        for (std::size_t h = 0; h <= r; ++h) {
            buf.push_back(ch[1 + 3 * h]);
            buf.push_back(ch[2 + 3 * h]);
        }
        buf.push_back(ch[w - 1]);
        odd_part(buf);
        inst.chain_of_.push_back(static_cast<std::uint32_t>(c));
        inst.head_of_.push_back(static_cast<std::uint32_t>(pos[ch[0]]));
        inst.vars_.insert(inst.vars_.end(), buf.begin(), buf.end());
        inst.offsets_.push_back(inst.vars_.size());
    }
    inst.chains_ = std::move(cs);
    return inst;
}

XorInstance build_phi(const MatchingFamily& fam, std::size_t r, std::size_t k, const Budgets& budgets) {
    if (k > fam.n()) throw std::invalid_argument("build_phi: k exceeds n");
    std::vector<Vertex> heads(k);
    std::iota(heads.begin(), heads.end(), Vertex{0});
    return build_phi(fam, r, heads, budgets);
}

XorInstance build_psi(const XorInstance& phi, const ChainSet& cs, const Partition& part, std::size_t t) {
    if (phi.t()) throw std::invalid_argument("build_psi: source must be a Φ instance");
    if (cs.t() != phi.r() || part.r() != phi.r())
        throw std::invalid_argument("build_psi: chain length mismatch");
    if (t > phi.r()) throw std::invalid_argument("build_psi: t exceeds r");
    if (part.piece_of().size() != cs.size()) throw std::invalid_argument("build_psi: partition does not match chain set");

    XorInstance inst;
    inst.n_ = phi.n_;
    inst.r_ = phi.r_;
    inst.t_ = t;
    inst.heads_ = phi.heads_;
    inst.chains_ = phi.chains_;
    for (const auto& pc : part.pieces()) inst.patterns_.push_back(pc.q);
    std::vector<Vertex> buf;
    for (std::size_t c = 0; c < phi.size(); ++c) {
        auto suffix = phi.chain(c).subspan(3);
        auto id = cs.find(suffix);
        if (!id) throw std::invalid_argument("build_psi: r-suffix missing from chain set");
        std::uint32_t pi = part.piece_of()[*id];
        if (pi == UINT32_MAX) throw std::invalid_argument("build_psi: chain not covered by partition");
        const Pattern& q = inst.patterns_[pi];
        if (pattern_size(q) != t + 1) continue;
        auto s = phi.support(c);
        buf.assign(s.begin(), s.end());
        for (Vertex v : q)
            if (v != kStar) buf.push_back(v);
        odd_part(buf);
        inst.chain_of_.push_back(phi.chain_of_[c]);
        inst.head_of_.push_back(phi.head_of_[c]);
        inst.piece_of_.push_back(static_cast<std::int32_t>(pi));
        inst.vars_.insert(inst.vars_.end(), buf.begin(), buf.end());
        inst.offsets_.push_back(inst.vars_.size());
    }
    return inst;
}

std::vector<int> derived_y(const XorInstance& inst, const std::vector<int>& x) {
    check_signs(x, inst.n(), "x");
    std::vector<int> y;
    y.reserve(inst.pieces().size());
    for (const auto& q : inst.pieces()) {
        int s = 1;
        for (Vertex v : q)
            if (v != kStar) s *= x[v];
        y.push_back(s);
    }
    return y;
}

std::int64_t eval_value(const XorInstance& inst, const std::vector<int>& b, const std::vector<int>& x,
                        const std::vector<int>& y_in) {
    check_signs(b, inst.k(), "b");
    check_signs(x, inst.n(), "x");
    std::vector<int> y = y_in.empty() ? derived_y(inst, x) : y_in;
    check_signs(y, inst.pieces().size(), "y");
    constexpr std::size_t kBlock = 1 << 14;
    const std::size_t nb = (inst.size() + kBlock - 1) / kBlock;
    std::vector<std::int64_t> part(nb, 0);
    for_blocks(nb, default_threads(), [&](std::size_t blk) {
        std::int64_t acc = 0;
        const std::size_t end = std::min(inst.size(), (blk + 1) * kBlock);
        for (std::size_t c = blk * kBlock; c < end; ++c) {
            int s = b[inst.head_index(c)];
            if (inst.piece(c) >= 0) s *= y[static_cast<std::size_t>(inst.piece(c))];
            for (Vertex v : inst.support(c)) s *= x[v];
            acc += s;
        }
        part[blk] = acc;
    });
    return std::accumulate(part.begin(), part.end(), std::int64_t{0});
}

BruteForceResult max_walsh(std::size_t n, const std::vector<std::pair<std::uint64_t, std::int64_t>>& terms) {
    if (n > kBruteForceMaxN)
        throw std::invalid_argument("brute force limited to n <= " + std::to_string(kBruteForceMaxN));
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::int64_t> f(size, 0);
    for (auto [mask, c] : terms) {
        if (mask >> n) throw std::invalid_argument("max_walsh: mask out of range");
        f[mask] += c;
    }
    // Unnormalized Walsh-Hadamard transform: f(x) = sum_m c_m (-1)^{|m & x|}.
    for (std::size_t len = 1; len < size; len <<= 1)
        for (std::size_t i = 0; i < size; i += len << 1)
            for (std::size_t j = i; j < i + len; ++j) {
                std::int64_t a = f[j], b = f[j + len];
                f[j] = a + b;
                f[j + len] = a - b;
            }
    std::size_t best = 0;
    for (std::size_t x = 1; x < size; ++x)
        if (f[x] > f[best]) best = x;
    BruteForceResult res;
    res.value = f[best];
    res.argmax.resize(n);
    for (std::size_t v = 0; v < n; ++v) res.argmax[v] = ((best >> v) & 1) ? -1 : 1;
    return res;
}

BruteForceResult brute_force_val(const XorInstance& inst, const std::vector<int>& b) {
    check_signs(b, inst.k(), "b");
    if (inst.n() > kBruteForceMaxN)
        throw std::invalid_argument("brute force limited to n <= " + std::to_string(kBruteForceMaxN));
    std::unordered_map<std::uint64_t, std::int64_t> acc;
    for (std::size_t c = 0; c < inst.size(); ++c) {
        std::uint64_t m = support_mask(inst.support(c));
        if (inst.piece(c) >= 0) m ^= pattern_mask(inst.pieces()[static_cast<std::size_t>(inst.piece(c))]);
        acc[m] += b[inst.head_index(c)];
    }
    std::vector<std::pair<std::uint64_t, std::int64_t>> terms(acc.begin(), acc.end());
    return max_walsh(inst.n(), terms);
}

HeadMatching default_matching(std::size_t k) {
    HeadMatching m;
    for (std::uint32_t a = 0; 2 * a + 1 < k; ++a) m.emplace_back(2 * a, 2 * a + 1);
    return m;
}

HeadMatching random_matching(std::size_t k, Rng& rng) {
    std::vector<std::uint32_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0u);
    rng.shuffle(perm);
    HeadMatching m;
    for (std::size_t a = 0; a + 1 < k; a += 2) m.emplace_back(perm[a], perm[a + 1]);
    return m;
}

std::vector<int> random_signs(std::size_t k, Rng& rng) {
    std::vector<int> b(k);
    for (auto& s : b) s = rng.sign();
    return b;
}

std::vector<std::vector<std::uint64_t>> psi_term_counts(const XorInstance& psi) {
    std::vector<std::vector<std::uint64_t>> out(psi.k(), std::vector<std::uint64_t>(psi.pieces().size(), 0));
    for (std::size_t c = 0; c < psi.size(); ++c)
        if (psi.piece(c) >= 0) ++out[psi.head_index(c)][static_cast<std::size_t>(psi.piece(c))];
    return out;
}

PairedInstance cross_terms(std::shared_ptr<const XorInstance> psi_ptr, const HeadMatching& m, std::uint64_t d,
                           std::size_t m_max, const Budgets& budgets) {
    if (!psi_ptr) throw std::invalid_argument("cross_terms: null instance");
    const XorInstance& psi = *psi_ptr;
    if (!psi.t()) throw std::invalid_argument("cross_terms: expects a Ψ^(t) instance");
    const std::size_t k = psi.k();
    std::vector<char> used(k, 0);
    for (auto [i, j] : m) {
        if (i >= k || j >= k || i == j) throw std::invalid_argument("cross_terms: invalid matching edge");
        if (used[i] || used[j]) throw std::invalid_argument("cross_terms: M is not a matching");
        used[i] = used[j] = 1;
    }
    if (m.size() > k / 2) throw std::invalid_argument("cross_terms: matching too large");
    const std::size_t t = *psi.t();

    PairedInstance pi;
    pi.psi = psi_ptr;
    pi.matching = m;
    for (const auto& q : psi.pieces()) pi.num_pieces_t += pattern_size(q) == t + 1;
    pi.magnitude_bound = big_pow(3 * m_max, psi.r() - t) * big_pow(d, t);
    BigInt row = BigInt(pi.num_pieces_t) * pi.magnitude_bound;
    pi.diagonal_bound = BigInt(k) * row * row;

    // Constraints grouped by (head, piece).
    std::map<std::pair<std::uint32_t, std::int32_t>, std::vector<std::uint32_t>> groups;
    for (std::size_t c = 0; c < psi.size(); ++c)
        groups[{psi.head_index(c), psi.piece(c)}].push_back(static_cast<std::uint32_t>(c));
    BigInt total = 0;
    for (auto [i, j] : m)
        for (auto it = groups.lower_bound({i, INT32_MIN}); it != groups.end() && it->first.first == i; ++it) {
            auto jt = groups.find({j, it->first.second});
            if (jt != groups.end()) total += BigInt(it->second.size()) * jt->second.size();
        }
    check_budget("cross_terms", total, budgets.max_pairs);
    pi.pairs.reserve(static_cast<std::size_t>(total));
    for (auto [i, j] : m) {
        for (auto it = groups.lower_bound({i, INT32_MIN}); it != groups.end() && it->first.first == i; ++it) {
            auto jt = groups.find({j, it->first.second});
            if (jt == groups.end()) continue;
            for (std::uint32_t a : it->second)
                for (std::uint32_t b : jt->second) pi.pairs.emplace_back(a, b);
        }
        pi.edge_offsets.push_back(pi.pairs.size());
    }
    return pi;
}

std::int64_t eval_paired(const PairedInstance& pi, const std::vector<int>& b, const std::vector<int>& x) {
    const XorInstance& psi = *pi.psi;
    check_signs(b, psi.k(), "b");
    check_signs(x, psi.n(), "x");
    std::vector<int> mono(psi.size());
    for (std::size_t c = 0; c < psi.size(); ++c) {
        int s = 1;
        for (Vertex v : psi.support(c)) s *= x[v];
        mono[c] = s;
    }
    std::int64_t total = 0;
    for (std::size_t e = 0; e < pi.matching.size(); ++e) {
        std::int64_t acc = 0;
        for (std::size_t q = pi.edge_offsets[e]; q < pi.edge_offsets[e + 1]; ++q)
            acc += mono[pi.pairs[q].first] * mono[pi.pairs[q].second];
        total += b[pi.matching[e].first] * b[pi.matching[e].second] * acc;
    }
    return total;
}

BruteForceResult brute_force_paired(const PairedInstance& pi, const std::vector<int>& b) {
    const XorInstance& psi = *pi.psi;
    check_signs(b, psi.k(), "b");
    if (psi.n() > kBruteForceMaxN)
        throw std::invalid_argument("brute force limited to n <= " + std::to_string(kBruteForceMaxN));
    std::vector<std::uint64_t> masks(psi.size());
    for (std::size_t c = 0; c < psi.size(); ++c) masks[c] = support_mask(psi.support(c));
    std::unordered_map<std::uint64_t, std::int64_t> acc;
    for (std::size_t e = 0; e < pi.matching.size(); ++e) {
        int s = b[pi.matching[e].first] * b[pi.matching[e].second];
        for (std::size_t q = pi.edge_offsets[e]; q < pi.edge_offsets[e + 1]; ++q)
            acc[masks[pi.pairs[q].first] ^ masks[pi.pairs[q].second]] += s;
    }
    std::vector<std::pair<std::uint64_t, std::int64_t>> terms(acc.begin(), acc.end());
    return max_walsh(psi.n(), terms);
}

}  // namespace lcc
