// Independent brute-force reference implementations used only by tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "lcc/instances.hpp"

namespace oracle {

using lcc::MatchingFamily;
using lcc::Triple;
using lcc::Vertex;

// Number of x in F2^n satisfying every constraint, by enumeration.
inline std::uint64_t count_f2_solutions(const MatchingFamily& fam) {
    const std::size_t n = fam.n();
    std::uint64_t cnt = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        bool ok = true;
        for (Vertex u = 0; u < n && ok; ++u)
            for (const auto& c : fam.edges(u)) {
                unsigned s = ((x >> u) ^ (x >> c[0]) ^ (x >> c[1]) ^ (x >> c[2])) & 1;
                if (s) {
                    ok = false;
                    break;
                }
            }
        cnt += ok;
    }
    return cnt;
}

// All t-chains, enumerated by trying every (C, w) candidate at each step.
inline std::vector<std::vector<Vertex>> all_chains(const MatchingFamily& fam, std::size_t t) {
    const std::size_t n = fam.n();
    std::vector<std::set<Triple>> hs(n);
    for (Vertex u = 0; u < n; ++u)
        for (auto c : fam.edges(u)) hs[u].insert(c);
    std::vector<std::vector<Vertex>> cur;
    for (Vertex u = 0; u < n; ++u) cur.push_back({u});
    for (std::size_t s = 0; s < t; ++s) {
        std::vector<std::vector<Vertex>> nxt;
        for (const auto& ch : cur) {
            Vertex prev = fam.negate(ch.back());
            for (Vertex a = 0; a < n; ++a)
                for (Vertex b = a + 1; b < n; ++b)
                    for (Vertex w = 0; w < n; ++w) {
                        if (w == a || w == b) continue;
                        Triple e{a, b, w};
                        std::sort(e.begin(), e.end());
                        if (!hs[prev].count(e)) continue;
                        auto c2 = ch;
                        c2.push_back(a);
                        c2.push_back(b);
                        c2.push_back(w);
                        nxt.push_back(std::move(c2));
                    }
        }
        cur.swap(nxt);
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

inline std::size_t heavy_pair(const MatchingFamily& fam) {
    std::size_t best = 0;
    for (Vertex a = 0; a < fam.n(); ++a)
        for (Vertex b = a + 1; b < fam.n(); ++b) {
            std::size_t c = 0;
            for (Vertex u = 0; u < fam.n(); ++u)
                for (const auto& e : fam.edges(u))
                    c += std::count(e.begin(), e.end(), a) && std::count(e.begin(), e.end(), b);
            best = std::max(best, c);
        }
    return best;
}

// Max of sum_m c_m (-1)^{|m & x|} by walking x in Gray-code order and
// flipping one variable at a time. Returns (max, x bits of the first max).
inline std::pair<std::int64_t, std::uint64_t> gray_max(
    std::size_t n, const std::vector<std::pair<std::uint64_t, std::int64_t>>& terms) {
    std::vector<std::int64_t> cur(terms.size());
    std::int64_t val = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        cur[i] = terms[i].second;
        val += cur[i];
    }
    std::vector<std::vector<std::size_t>> touching(n);
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t v = 0; v < n; ++v)
            if ((terms[i].first >> v) & 1) touching[v].push_back(i);
    std::int64_t best = val;
    std::uint64_t best_x = 0, x = 0;
    for (std::uint64_t g = 1; g < (std::uint64_t{1} << n); ++g) {
        std::size_t v = static_cast<std::size_t>(__builtin_ctzll(g));
        x ^= std::uint64_t{1} << v;
        for (std::size_t i : touching[v]) {
            val -= 2 * cur[i];
            cur[i] = -cur[i];
        }
        if (val > best || (val == best && x < best_x)) {
            best = val;
            best_x = x;
        }
    }
    return {best, best_x};
}

}  // namespace oracle
