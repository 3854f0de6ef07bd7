#pragma once

#include <vector>

namespace mucalc {

// Strongly connected components of the subgraph induced by `keep` (all
// vertices when empty).  comp[v] = -1 outside the subgraph; components are
// numbered in reverse topological order (sinks first).
struct Sccs {
    std::vector<int> comp;
    int count = 0;
};

Sccs strongly_connected(const std::vector<std::vector<int>>& succ, const std::vector<bool>& keep = {});

// Per component: true if it contains a cycle (more than one vertex, or a self loop).
std::vector<bool> cyclic_components(const std::vector<std::vector<int>>& succ, const Sccs& s);

std::vector<bool> reachable_from(const std::vector<std::vector<int>>& succ, const std::vector<bool>& start,
                                 const std::vector<bool>& keep = {});

}  // namespace mucalc
