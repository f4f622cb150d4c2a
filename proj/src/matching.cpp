#include "lcc/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_map>

namespace lcc {

namespace {

// Maps ids to 0..k-1 in increasing id order.
std::vector<std::uint64_t> compress(std::vector<std::uint64_t> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::uint32_t index_of(const std::vector<std::uint64_t>& ids, std::uint64_t v) {
    return static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
}

}  // namespace

BipartiteMatching max_bipartite_matching(const BipartiteGraph& g) {
    std::vector<std::uint64_t> ls, rs;
    ls.reserve(g.edges.size());
    rs.reserve(g.edges.size());
    for (auto [a, b] : g.edges) {
        ls.push_back(a);
        rs.push_back(b);
    }
    ls = compress(std::move(ls));
    rs = compress(std::move(rs));
    const std::uint32_t nl = static_cast<std::uint32_t>(ls.size());
    const std::uint32_t nr = static_cast<std::uint32_t>(rs.size());

    std::vector<std::vector<std::uint32_t>> adj(nl);
    for (auto [a, b] : g.edges) adj[index_of(ls, a)].push_back(index_of(rs, b));
    for (auto& l : adj) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }

    constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> match_l(nl, kNone), match_r(nr, kNone), dist(nl), it(nl);

    auto bfs = [&] {
        std::queue<std::uint32_t> q;
        bool found = false;
        for (std::uint32_t u = 0; u < nl; ++u) {
            if (match_l[u] == kNone) {
                dist[u] = 0;
                q.push(u);
            } else {
                dist[u] = kNone;
            }
        }
        while (!q.empty()) {
            std::uint32_t u = q.front();
            q.pop();
            for (std::uint32_t v : adj[u]) {
                std::uint32_t w = match_r[v];
                if (w == kNone) {
                    found = true;
                } else if (dist[w] == kNone) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    };

    // Iterative DFS along the layered graph.
    auto augment = [&](std::uint32_t root) {
        std::vector<std::uint32_t> stack{root};
        while (!stack.empty()) {
            std::uint32_t u = stack.back();
            if (it[u] == adj[u].size()) {
                dist[u] = kNone;
                stack.pop_back();
                continue;
            }
            std::uint32_t v = adj[u][it[u]];
            std::uint32_t w = match_r[v];
            if (w == kNone) {
                // Flip the path root -> ... -> u -> v.
                for (std::size_t s = stack.size(); s-- > 0;) {
                    std::uint32_t x = stack[s];
                    std::uint32_t y = adj[x][it[x]];
                    match_r[y] = x;
                    match_l[x] = y;
                }
                return true;
            }
            if (dist[w] == dist[u] + 1) {
                stack.push_back(w);
            } else {
                ++it[u];
            }
        }
        return false;
    };

    while (bfs()) {
        std::fill(it.begin(), it.end(), 0);
        for (std::uint32_t u = 0; u < nl; ++u)
            if (match_l[u] == kNone) augment(u);
    }

    BipartiteMatching out;
    for (std::uint32_t u = 0; u < nl; ++u)
        if (match_l[u] != kNone) out.edges.emplace_back(ls[u], rs[match_l[u]]);
    return out;
}

std::size_t max_degree(const BipartiteGraph& g) {
    std::unordered_map<std::uint64_t, std::size_t> dl, dr;
    std::size_t best = 0;
    for (auto [a, b] : g.edges) {
        best = std::max(best, ++dl[a]);
        best = std::max(best, ++dr[b]);
    }
    return best;
}

}  // namespace lcc
