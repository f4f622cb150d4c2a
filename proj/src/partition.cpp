#include "lcc/partition.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lcc/rng.hpp"

namespace lcc {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Initialize: return "Initialize";
        case Provenance::Extend: return "Extend";
        case Provenance::GreedyFix: return "GreedyFix";
    }
    return "?";
}

std::size_t pattern_size(const Pattern& q) {
    return static_cast<std::size_t>(std::count_if(q.begin(), q.end(), [](Vertex v) { return v != kStar; }));
}

bool is_contiguous(const Pattern& q) {
    if (q.empty() || q.back() == kStar) return false;
    bool fixed = false;
    for (Vertex v : q) {
        if (v != kStar) fixed = true;
        else if (fixed) return false;
    }
    return true;
}

namespace {

std::uint64_t sat_pow(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (b != 0 && r > UINT64_MAX / b) return UINT64_MAX;
        r *= b;
    }
    return r;
}

bool piece_less(const Piece& a, const Piece& b) {
    if (a.q != b.q) return a.q < b.q;
    return a.p < b.p;
}

}  // namespace

Partition::Partition(std::size_t r, std::uint64_t d, std::size_t num_chains, std::vector<Piece> pieces)
    : r_(r), d_(d), pieces_(std::move(pieces)), piece_of_(num_chains, UINT32_MAX) {
    std::sort(pieces_.begin(), pieces_.end(), piece_less);
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        for (std::uint32_t c : pieces_[i].chains) {
            if (c >= num_chains) throw std::invalid_argument("Partition: chain id out of range");
            if (piece_of_[c] != UINT32_MAX) disjoint_ = false;
            piece_of_[c] = static_cast<std::uint32_t>(i);
        }
}

std::vector<std::size_t> Partition::pieces_of_size(std::size_t t) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        if (pattern_size(pieces_[i].q) == t + 1) out.push_back(i);
    return out;
}

namespace {

struct WorkPiece {
    Pattern q;
    std::uint32_t p;
    std::size_t level;
    std::vector<Vertex> data;  // flat chains, canonical order
};

struct PrevLink {
    Vertex u, c0, c1;
};

void sort_records(std::vector<Vertex>& data, std::size_t w) {
    const std::size_t cnt = data.size() / w;
    std::vector<std::uint32_t> idx(cnt);
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::lexicographical_compare(data.begin() + a * w, data.begin() + (a + 1) * w,
                                            data.begin() + b * w, data.begin() + (b + 1) * w);
    });
    std::vector<Vertex> out(data.size());
    for (std::size_t i = 0; i < cnt; ++i)
        std::copy(data.begin() + idx[i] * w, data.begin() + (idx[i] + 1) * w, out.begin() + i * w);
    data.swap(out);
}

Provenance provenance_for(std::size_t level, std::size_t r) {
    if (level == 0) return Provenance::Initialize;
    return level == r ? Provenance::GreedyFix : Provenance::Extend;
}

}  // namespace

Partition decompose(const MatchingFamily& fam, const ChainSet& cs, std::uint64_t d,
                    const Budgets& budgets) {
    if (d == 0) throw std::invalid_argument("decompose: d must be positive");
    const std::size_t r = cs.t();
    const std::size_t n = fam.n();
    if (cs.n() != n) throw std::invalid_argument("decompose: chain set does not match family");

    std::vector<std::vector<PrevLink>> prev(n);
    {
        auto links = successor_links(fam);
        for (Vertex u = 0; u < n; ++u)
            for (const auto& l : links[u]) prev[l.w].push_back({u, l.c0, l.c1});
    }

    std::vector<WorkPiece> cur;
    for (Vertex w = 0; w < n; ++w) cur.push_back({Pattern{w}, 1, 0, {w}});

    for (std::size_t t = 1; t <= r; ++t) {
        check_budget("decompose", count_chains(fam, t).total, budgets.max_chains);
        const std::size_t w = 1 + 3 * t;
        const std::uint64_t thr = sat_pow(d, t);
        std::vector<WorkPiece> nxt;
        std::map<Pattern, std::uint32_t> counters;
        for (auto& pc : cur) {
            WorkPiece np{Pattern{}, pc.p, pc.level, {}};
            np.q.push_back(kStar);
            np.q.insert(np.q.end(), pc.q.begin(), pc.q.end());
            const std::size_t w0 = w - 3;
            for (std::size_t i = 0; i * w0 < pc.data.size(); ++i) {
                const Vertex* c = pc.data.data() + i * w0;
                for (const auto& pl : prev[c[0]]) {
                    np.data.push_back(pl.u);
                    np.data.push_back(pl.c0);
                    np.data.push_back(pl.c1);
                    np.data.insert(np.data.end(), c, c + w0);
                }
            }
            pc.data.clear();
            pc.data.shrink_to_fit();
            sort_records(np.data, w);

            // Every chain contains 2^k fully specified patterns of length t + 1,
            // one per choice of a vertex from each of its first k links.
            const std::size_t k = np.q.size() - pattern_size(np.q);
            if (thr != UINT64_MAX) {
                const std::size_t cnt = np.data.size() / w;
                const std::size_t fills = std::size_t{1} << k;
                std::vector<Vertex> keys(cnt * fills * k);
                for (std::size_t i = 0; i < cnt; ++i)
                    for (std::size_t f = 0; f < fills; ++f)
                        for (std::size_t h = 0; h < k; ++h)
                            keys[(i * fills + f) * k + h] = np.data[i * w + 1 + 3 * h + ((f >> (k - 1 - h)) & 1)];
                std::vector<std::uint32_t> ord(cnt * fills);
                std::iota(ord.begin(), ord.end(), 0u);
                auto key_less = [&](std::uint32_t a, std::uint32_t b) {
                    auto ka = keys.begin() + std::size_t{a} * k, kb = keys.begin() + std::size_t{b} * k;
                    if (std::lexicographical_compare(ka, ka + k, kb, kb + k)) return true;
                    if (std::lexicographical_compare(kb, kb + k, ka, ka + k)) return false;
                    return a < b;
                };
                std::sort(ord.begin(), ord.end(), key_less);
                auto same_key = [&](std::uint32_t a, std::uint32_t b) {
                    return std::equal(keys.begin() + std::size_t{a} * k, keys.begin() + (std::size_t{a} + 1) * k,
                                      keys.begin() + std::size_t{b} * k);
                };
                std::vector<char> moved(cnt, 0);
                for (std::size_t a = 0; a < ord.size();) {
                    std::size_t b = a;
                    while (b < ord.size() && same_key(ord[a], ord[b])) ++b;
                    std::vector<std::uint32_t> rest;
                    for (std::size_t i = a; i < b; ++i)
                        if (!moved[ord[i] / fills]) rest.push_back(static_cast<std::uint32_t>(ord[i] / fills));
                    std::size_t off = 0;
                    if (rest.size() > thr) {
                        Pattern q2 = np.q;
                        for (std::size_t h = 0; h < k; ++h) q2[h] = keys[std::size_t{ord[a]} * k + h];
                        while (rest.size() - off > thr) {
                            WorkPiece g{q2, ++counters[q2], t, {}};
                            for (std::size_t j = off; j < off + thr; ++j) {
                                moved[rest[j]] = 1;
                                g.data.insert(g.data.end(), np.data.begin() + rest[j] * w,
                                              np.data.begin() + (rest[j] + 1) * w);
                            }
                            off += thr;
                            nxt.push_back(std::move(g));
                        }
                    }
                    a = b;
                }
                std::vector<Vertex> keep;
                for (std::size_t i = 0; i < cnt; ++i)
                    if (!moved[i])
                        keep.insert(keep.end(), np.data.begin() + i * w, np.data.begin() + (i + 1) * w);
                np.data.swap(keep);
            }
            if (!np.data.empty()) nxt.push_back(std::move(np));
        }
        check_budget("decompose", BigInt(nxt.size()), budgets.max_pieces);
        cur.swap(nxt);
    }

    std::vector<Piece> pieces;
    const std::size_t w = cs.width();
    for (auto& pc : cur) {
        if (pc.data.empty()) continue;
        Piece out{pc.q, pc.p, provenance_for(pc.level, r), pc.level, {}};
        for (std::size_t i = 0; i * w < pc.data.size(); ++i) {
            auto id = cs.find(std::span<const Vertex>(pc.data.data() + i * w, w));
            if (!id) throw std::logic_error("decompose: chain missing from chain set");
            out.chains.push_back(static_cast<std::uint32_t>(*id));
        }
        std::sort(out.chains.begin(), out.chains.end());
        pieces.push_back(std::move(out));
    }
    return Partition(r, d, cs.size(), std::move(pieces));
}

Partition trivial_partition(const ChainSet& cs) {
    const std::size_t r = cs.t();
    std::vector<std::vector<std::uint32_t>> by_tail(cs.n());
    for (std::size_t i = 0; i < cs.size(); ++i) by_tail[cs.tail(i)].push_back(static_cast<std::uint32_t>(i));
    std::vector<Piece> pieces;
    for (Vertex w = 0; w < cs.n(); ++w) {
        if (by_tail[w].empty()) continue;
        Pattern q(r + 1, kStar);
        q[r] = w;
        pieces.push_back({q, 1, Provenance::Initialize, 0, std::move(by_tail[w])});
    }
    return Partition(r, 1, cs.size(), std::move(pieces));
}

Partition negate_partition(const MatchingFamily& fam, const ChainSet& cs, const Partition& part) {
    std::vector<Piece> pieces;
    std::vector<Vertex> buf(cs.width());
    for (const auto& pc : part.pieces()) {
        Piece np = pc;
        for (auto& v : np.q)
            if (v != kStar) v = fam.negate(v);
        np.chains.clear();
        for (std::uint32_t id : pc.chains) {
            auto c = cs.chain(id);
            for (std::size_t j = 0; j < c.size(); ++j) buf[j] = fam.negate(c[j]);
            for (std::size_t h = 0; 3 * h + 2 < c.size(); ++h)
                if (buf[1 + 3 * h] > buf[2 + 3 * h]) std::swap(buf[1 + 3 * h], buf[2 + 3 * h]);
            auto found = cs.find(buf);
            if (!found) throw std::invalid_argument("negate_partition: family is not closed under negation");
            np.chains.push_back(static_cast<std::uint32_t>(*found));
        }
        std::sort(np.chains.begin(), np.chains.end());
        pieces.push_back(std::move(np));
    }
    return Partition(part.r(), part.d(), cs.size(), std::move(pieces));
}

namespace {

// Largest number of distinct s-link suffixes of the piece's chains that
// contain a common Q' extending q by fixing the positions r-s .. r-|q|.
std::size_t max_suffix_count(const ChainSet& cs, const Piece& pc, std::size_t s,
                             const PartitionCheckOptions& opt, Rng& rng) {
    const std::size_t r = cs.t();
    const std::size_t a = pattern_size(pc.q);
    const std::size_t free = s + 1 - a;
    const std::size_t off = 3 * (r - s);
    std::vector<std::vector<Vertex>> suf;
    suf.reserve(pc.chains.size());
    for (std::uint32_t id : pc.chains) {
        auto c = cs.chain(id);
        suf.emplace_back(c.begin() + static_cast<long>(off), c.end());
    }
    std::sort(suf.begin(), suf.end());
    suf.erase(std::unique(suf.begin(), suf.end()), suf.end());
    if (free == 0) return suf.size();
    // Within a suffix, the free positions are its first `free` C-slots.
    if (s + 1 <= opt.exhaustive_cap) {
        std::vector<std::vector<Vertex>> keys;
        keys.reserve(suf.size() << free);
        for (const auto& x : suf)
            for (std::size_t mask = 0; mask < (std::size_t{1} << free); ++mask) {
                std::vector<Vertex> k(free);
                for (std::size_t j = 0; j < free; ++j) k[j] = x[1 + 3 * j + ((mask >> j) & 1)];
                keys.push_back(std::move(k));
            }
        std::sort(keys.begin(), keys.end());
        std::size_t best = 0;
        for (std::size_t i = 0; i < keys.size();) {
            std::size_t j = i;
            while (j < keys.size() && keys[j] == keys[i]) ++j;
            best = std::max(best, j - i);
            i = j;
        }
        return best;
    }
    std::size_t best = 0;
    for (std::size_t t = 0; t < opt.samples; ++t) {
        const auto& x = suf[rng.below(suf.size())];
        std::vector<Vertex> k(free);
        for (std::size_t j = 0; j < free; ++j) k[j] = x[1 + 3 * j + rng.below(2)];
        std::size_t cnt = 0;
        for (const auto& y : suf) {
            bool ok = true;
            for (std::size_t j = 0; j < free && ok; ++j)
                ok = y[1 + 3 * j] == k[j] || y[2 + 3 * j] == k[j];
            cnt += ok;
        }
        best = std::max(best, cnt);
    }
    return best;
}

Rational rpow(const Rational& b, long e) {
    Rational r = 1;
    if (e >= 0)
        for (long i = 0; i < e; ++i) r *= b;
    else
        for (long i = 0; i < -e; ++i) r /= b;
    return r;
}

}  // namespace

PartitionCheck verify_partition(const MatchingFamily& fam, const ChainSet& cs,
                                const Partition& part, const PartitionCheckOptions& opt) {
    PartitionCheck res;
    const std::size_t r = cs.t();
    const std::uint64_t d = part.d();
    auto fail = [&](bool& flag, const std::string& msg) {
        flag = false;
        if (res.failures.size() < 50) res.failures.push_back(msg);
    };
    if (part.r() != r) fail(res.cover, "partition depth does not match chain set");

    std::vector<std::uint32_t> seen(cs.size(), 0);
    for (const auto& pc : part.pieces()) {
        const std::string key = piece_key(pc);
        if (pc.q.size() != r + 1) {
            fail(res.contiguity, key + ": pattern has wrong length");
            continue;
        }
        for (std::uint32_t id : pc.chains) {
            if (id >= cs.size()) {
                fail(res.cover, key + ": chain id out of range");
                continue;
            }
            ++seen[id];
            if (!contains(cs.chain(id), pc.q)) fail(res.cover, key + ": chain does not contain Q");
        }
        if (!pc.chains.empty() && !is_contiguous(pc.q)) fail(res.contiguity, key + ": not contiguous");
        if (pattern_size(pc.q) == 1 && pc.p != 1) fail(res.singleton_p, key + ": |Q| = 1 with p != 1");
    }
    for (std::size_t i = 0; i < cs.size(); ++i)
        if (seen[i] != 1) {
            fail(res.cover, "chain " + std::to_string(i) + " covered " + std::to_string(seen[i]) + " times");
            break;
        }

    const std::size_t m = fam.max_matching_size();
    const Rational three_m = 3 * m;
    Rng rng(derive_seed(opt.seed, "verify-partition"));
    res.pieces_per_size.assign(r + 1, 0);
    for (const auto& pc : part.pieces()) {
        if (pc.q.size() != r + 1 || !is_contiguous(pc.q)) continue;
        const std::size_t a = pattern_size(pc.q);
        ++res.pieces_per_size[a - 1];
        const std::string key = piece_key(pc);
        if (pc.provenance == Provenance::GreedyFix && pc.chains.size() != sat_pow(d, a - 1))
            fail(res.greedy_exact, key + ": Greedy-Fix piece has " + std::to_string(pc.chains.size()) + " chains");
        for (std::size_t s = a - 1; s <= r; ++s) {
            std::size_t cnt = max_suffix_count(cs, pc, s, opt, rng);
            std::uint64_t lim = sat_pow(d, s);
            res.max_suffix_count = std::max(res.max_suffix_count, cnt);
            res.max_suffix_ratio = std::max(res.max_suffix_ratio, static_cast<double>(cnt) / static_cast<double>(lim));
            if (cnt > lim)
                fail(res.suffix_bound, key + ": " + std::to_string(cnt) + " suffixes of length " +
                                           std::to_string(s) + " exceed " + std::to_string(lim));
        }
        if (m > 0) {
            Rational bound = Rational(fam.n()) * rpow(three_m, static_cast<long>(r) - static_cast<long>(a)) *
                             rpow(Rational(d), static_cast<long>(a) - 1);
            if (Rational(pc.chains.size()) > bound) fail(res.observation, key + ": piece exceeds n(3m)^{r-|Q|}d^{|Q|-1}");
            if (a <= r) {
                Rational hb = rpow(three_m, static_cast<long>(r - a)) * rpow(Rational(d), static_cast<long>(a) - 1);
                std::map<Vertex, std::size_t> per_head;
                for (std::uint32_t id : pc.chains) ++per_head[cs.head(id)];
                for (auto [u, c] : per_head)
                    if (Rational(c) > hb) {
                        fail(res.observation, key + ": head " + std::to_string(u) + " exceeds (3m)^{r-|Q|}d^{|Q|-1}");
                        break;
                    }
            }
        }
    }
    for (std::size_t t = 0; t <= r; ++t) {
        BigInt lhs = BigInt(res.pieces_per_size[t]) * boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(t));
        BigInt exact = count_chains(fam, t).total;
        BigInt crude = BigInt(fam.n()) * boost::multiprecision::pow(BigInt(3 * m), static_cast<unsigned>(t));
        if (t > 0 && (lhs > exact || lhs > crude))
            fail(res.size_bound, "|P_" + std::to_string(t) + "| d^t = " + lhs.str() + " exceeds |H^(t)| = " +
                                     exact.str() + " or n(3m)^t = " + crude.str());
    }
    return res;
}

std::string piece_key(const Piece& pc) {
    return pattern_string(pc.q) + "/" + std::to_string(pc.p);
}

nlohmann::ordered_json partition_to_json(const ChainSet& cs, const Partition& part) {
    nlohmann::ordered_json j;
    j["r"] = part.r();
    j["d"] = part.d();
    j["num_chains"] = cs.size();
    nlohmann::ordered_json pj = nlohmann::ordered_json::object();
    for (const auto& pc : part.pieces()) {
        nlohmann::ordered_json e;
        e["provenance"] = provenance_name(pc.provenance);
        e["level"] = pc.level;
        e["size"] = pc.chains.size();
        nlohmann::ordered_json ch = nlohmann::ordered_json::array();
        for (std::uint32_t id : pc.chains) {
            auto c = cs.chain(id);
            ch.push_back(std::vector<Vertex>(c.begin(), c.end()));
        }
        e["chains"] = std::move(ch);
        pj[piece_key(pc)] = std::move(e);
    }
    j["pieces"] = std::move(pj);
    return j;
}

}  // namespace lcc
