#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace lcc {

// Bipartite graph with left vertices [0, left) and right vertices [0, right).
struct BipartiteGraph {
    std::uint64_t left = 0, right = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
};

struct BipartiteMatching {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;  // sorted by left endpoint
    std::size_t size() const { return edges.size(); }
};

// Maximum matching by Hopcroft-Karp. Vertex ids are compressed internally, so
// left and right may be large as long as the edge list is small.
BipartiteMatching max_bipartite_matching(const BipartiteGraph& g);

// Largest number of edges at one vertex on either side.
std::size_t max_degree(const BipartiteGraph& g);

}  // namespace lcc
