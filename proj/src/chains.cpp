#include "lcc/chains.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lcc {

std::vector<std::vector<Link>> successor_links(const MatchingFamily& fam) {
    std::vector<std::vector<Link>> out(fam.n());
    for (Vertex v = 0; v < fam.n(); ++v) {
        auto& lv = out[v];
        for (const auto& e : fam.edges(fam.negate(v))) {
            lv.push_back({e[1], e[2], e[0]});
            lv.push_back({e[0], e[2], e[1]});
            lv.push_back({e[0], e[1], e[2]});
        }
        std::sort(lv.begin(), lv.end());
    }
    return out;
}

ChainSet::ChainSet(std::size_t n, std::size_t t, std::vector<Vertex> data)
    : n_(n), t_(t), data_(std::move(data)), head_offsets_(n + 1, 0) {
    const std::size_t w = width();
    if (data_.size() % w != 0) throw std::invalid_argument("ChainSet: ragged data");
    const std::size_t cnt = data_.size() / w;
    for (std::size_t i = 0; i < cnt; ++i) {
        Vertex u = data_[i * w];
        if (u >= n_) throw std::invalid_argument("ChainSet: head out of range");
        ++head_offsets_[u + 1];
    }
    for (std::size_t u = 0; u < n_; ++u) head_offsets_[u + 1] += head_offsets_[u];
    for (std::size_t i = 1; i < cnt; ++i)
        if (!std::lexicographical_compare(data_.begin() + (i - 1) * w, data_.begin() + i * w,
                                          data_.begin() + i * w, data_.begin() + (i + 1) * w))
            throw std::invalid_argument("ChainSet: chains not in strict canonical order");
}

std::optional<std::size_t> ChainSet::find(std::span<const Vertex> ch) const {
    if (ch.size() != width() || ch[0] >= n_) return std::nullopt;
    std::size_t lo = head_offsets_[ch[0]], hi = head_offsets_[ch[0] + 1];
    const std::size_t w = width();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        auto c = chain(mid);
        if (std::lexicographical_compare(c.begin(), c.end(), ch.begin(), ch.end()))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < size() && std::equal(ch.begin(), ch.end(), data_.begin() + lo * w)) return lo;
    return std::nullopt;
}

void ChainSet::build_index() const {
    std::call_once(cache_->once, [this] {
        auto& idx = cache_->idx;
        idx.assign((t_ + 1) * n_, {});
        const std::size_t w = width();
        for (std::size_t i = 0; i < size(); ++i) {
            const Vertex* c = data_.data() + i * w;
            for (std::size_t h = 0; h < t_; ++h) {
                idx[h * n_ + c[1 + 3 * h]].push_back(static_cast<std::uint32_t>(i));
                idx[h * n_ + c[2 + 3 * h]].push_back(static_cast<std::uint32_t>(i));
            }
            idx[t_ * n_ + c[w - 1]].push_back(static_cast<std::uint32_t>(i));
        }
    });
}

std::vector<std::size_t> ChainSet::enumerate_containing(const Pattern& q) const {
    if (q.size() != t_ + 1) throw std::invalid_argument("enumerate_containing: pattern length must be t+1");
    if (q.back() == kStar) throw std::invalid_argument("enumerate_containing: last entry must be fixed");
    for (Vertex v : q)
        if (v != kStar && v >= n_) throw std::invalid_argument("enumerate_containing: vertex out of range");
    build_index();
    const auto& idx = cache_->idx;
    const std::vector<std::uint32_t>* best = nullptr;
    for (std::size_t h = 0; h <= t_; ++h) {
        if (q[h] == kStar) continue;
        const auto& l = idx[h * n_ + q[h]];
        if (!best || l.size() < best->size()) best = &l;
    }
    std::vector<std::size_t> out;
    for (std::uint32_t i : *best)
        if (contains(chain(i), q)) out.push_back(i);
    return out;
}

ChainCount count_chains(const MatchingFamily& fam, std::size_t t) {
    const std::size_t n = fam.n();
    std::vector<BigInt> cur(n, 1), nxt(n);
    for (std::size_t s = 0; s < t; ++s) {
        for (Vertex w = 0; w < n; ++w) {
            BigInt acc = 0;
            for (const auto& e : fam.edges(fam.negate(w)))
                acc += cur[e[0]] + cur[e[1]] + cur[e[2]];
            nxt[w] = std::move(acc);
        }
        std::swap(cur, nxt);
    }
    ChainCount out;
    out.total = 0;
    for (auto& c : cur) out.total += c;
    out.per_head = std::move(cur);
    return out;
}

namespace {

void dfs(const std::vector<std::vector<Link>>& links, std::size_t depth, std::size_t t,
         std::vector<Vertex>& buf, std::vector<Vertex>& out) {
    if (depth == t) {
        out.insert(out.end(), buf.begin(), buf.end());
        return;
    }
    Vertex last = buf.back();
    for (const auto& l : links[last]) {
        buf.push_back(l.c0);
        buf.push_back(l.c1);
        buf.push_back(l.w);
        dfs(links, depth + 1, t, buf, out);
        buf.resize(buf.size() - 3);
    }
}

}  // namespace

ChainSet build_chains_from(const MatchingFamily& fam, std::size_t t,
                           const std::vector<Vertex>& heads, const Budgets& budgets) {
    auto cnt = count_chains(fam, t);
    std::vector<Vertex> hs = heads;
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    BigInt need = 0;
    for (Vertex u : hs) {
        if (u >= fam.n()) throw std::invalid_argument("build_chains: head out of range");
        need += cnt.per_head[u];
    }
    check_budget("chains", need, budgets.max_chains);
    auto links = successor_links(fam);
    std::vector<Vertex> data;
    data.reserve(static_cast<std::size_t>(need) * (1 + 3 * t));
    std::vector<Vertex> buf;
    for (Vertex u : hs) {
        buf.assign(1, u);
        dfs(links, 0, t, buf, data);
    }
    return ChainSet(fam.n(), t, std::move(data));
}

ChainSet build_chains(const MatchingFamily& fam, std::size_t t, const Budgets& budgets) {
    std::vector<Vertex> all(fam.n());
    for (Vertex u = 0; u < fam.n(); ++u) all[u] = u;
    return build_chains_from(fam, t, all, budgets);
}

ChainSet extend(const MatchingFamily& fam, const ChainSet& cs, const Budgets& budgets) {
    auto links = successor_links(fam);
    BigInt need = 0;
    for (Vertex u = 0; u < fam.n(); ++u)
        for (const auto& l : links[u]) {
            auto [a, b] = cs.head_range(l.w);
            need += b - a;
        }
    check_budget("chains", need, budgets.max_chains);
    const std::size_t w = cs.width();
    std::vector<Vertex> data;
    data.reserve(static_cast<std::size_t>(need) * (w + 3));
    // Iterating u, then its sorted links, then the (sorted) chains of each
    // link's pivot keeps the output in canonical order.
    for (Vertex u = 0; u < fam.n(); ++u)
        for (const auto& l : links[u]) {
            auto [a, b] = cs.head_range(l.w);
            for (std::size_t i = a; i < b; ++i) {
                data.push_back(u);
                data.push_back(l.c0);
                data.push_back(l.c1);
                auto c = cs.chain(i);
                data.insert(data.end(), c.begin(), c.end());
            }
        }
    return ChainSet(fam.n(), cs.t() + 1, std::move(data));
}

bool is_chain(const MatchingFamily& fam, std::span<const Vertex> ch) {
    if (ch.empty() || (ch.size() - 1) % 3 != 0) return false;
    for (Vertex v : ch)
        if (v >= fam.n()) return false;
    const std::size_t t = (ch.size() - 1) / 3;
    Vertex prev = ch[0];
    for (std::size_t h = 0; h < t; ++h) {
        Vertex a = ch[1 + 3 * h], b = ch[2 + 3 * h], w = ch[3 + 3 * h];
        if (!(a < b)) return false;
        Triple e{a, b, w};
        std::sort(e.begin(), e.end());
        const auto& hs = fam.edges(fam.negate(prev));
        if (!std::binary_search(hs.begin(), hs.end(), e)) return false;
        prev = w;
    }
    return true;
}

bool contains(std::span<const Vertex> ch, const Pattern& q) {
    const std::size_t t = (ch.size() - 1) / 3;
    if (q.size() != t + 1) return false;
    if (q[t] != kStar && q[t] != ch[ch.size() - 1]) return false;
    for (std::size_t h = 0; h < t; ++h) {
        if (q[h] == kStar) continue;
        if (q[h] != ch[1 + 3 * h] && q[h] != ch[2 + 3 * h]) return false;
    }
    return true;
}

std::vector<std::pair<Vertex, std::uint32_t>> chain_parity(const MatchingFamily& fam,
                                                           std::span<const Vertex> ch) {
    const std::uint32_t p = fam.field_char();
    const std::size_t t = (ch.size() - 1) / 3;
    std::map<Vertex, std::uint32_t> acc;
    auto add = [&](Vertex v, bool neg) { acc[v] = (acc[v] + (neg ? p - 1 : 1)) % p; };
    // Links read -x_{w_{h-1}} = x_{C_h} + x_{w_h}; alternating their sum
    // leaves the head, every C_h and the tail.
    add(ch[0], false);
    for (std::size_t h = 1; h <= t; ++h) {
        bool neg = (h % 2) == 0;
        add(ch[1 + 3 * (h - 1)], neg);
        add(ch[2 + 3 * (h - 1)], neg);
    }
    add(ch[ch.size() - 1], (t % 2) == 0);
    std::vector<std::pair<Vertex, std::uint32_t>> out;
    for (auto [v, c] : acc)
        if (c % p) out.emplace_back(v, c % p);
    return out;
}

void write_chains(std::ostream& os, const ChainSet& cs) {
    for (std::size_t i = 0; i < cs.size(); ++i) {
        auto c = cs.chain(i);
        for (std::size_t j = 0; j < c.size(); ++j) os << (j ? " " : "") << c[j];
        os << '\n';
    }
}

std::string pattern_string(const Pattern& q) {
    std::ostringstream os;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i) os << ',';
        if (q[i] == kStar) os << '*';
        else os << q[i];
    }
    return os.str();
}

}  // namespace lcc
