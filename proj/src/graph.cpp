#include "mucalc/graph.hpp"

#include <algorithm>

namespace mucalc {

Sccs strongly_connected(const std::vector<std::vector<int>>& succ, const std::vector<bool>& keep) {
    const int n = static_cast<int>(succ.size());
    auto in = [&](int v) { return keep.empty() || keep[v]; };
    Sccs r;
    r.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on(n, false);
    int counter = 0;
    // explicit DFS frames: (vertex, next successor slot)
    std::vector<std::pair<int, std::size_t>> frames;
    for (int root = 0; root < n; ++root) {
        if (!in(root) || index[root] >= 0) continue;
        frames.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on[root] = true;
        while (!frames.empty()) {
            auto& [v, i] = frames.back();
            if (i < succ[v].size()) {
                int w = succ[v][i++];
                if (!in(w)) continue;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            int done = v;
            frames.pop_back();
            if (!frames.empty()) {
                int parent = frames.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                for (;;) {
                    int w = stack.back();
                    stack.pop_back();
                    on[w] = false;
                    r.comp[w] = r.count;
                    if (w == done) break;
                }
                ++r.count;
            }
        }
    }
    return r;
}

std::vector<bool> cyclic_components(const std::vector<std::vector<int>>& succ, const Sccs& s) {
    std::vector<int> members(s.count, 0);
    std::vector<bool> cyc(s.count, false);
    const int n = static_cast<int>(succ.size());
    for (int v = 0; v < n; ++v) {
        if (s.comp[v] < 0) continue;
        if (++members[s.comp[v]] > 1) cyc[s.comp[v]] = true;
        for (int w : succ[v])
            if (w == v) cyc[s.comp[v]] = true;
    }
    return cyc;
}

std::vector<bool> reachable_from(const std::vector<std::vector<int>>& succ, const std::vector<bool>& start,
                                 const std::vector<bool>& keep) {
    const int n = static_cast<int>(succ.size());
    std::vector<bool> seen(n, false);
    std::vector<int> todo;
    for (int v = 0; v < n; ++v)
        if (start[v] && (keep.empty() || keep[v])) {
            seen[v] = true;
            todo.push_back(v);
        }
    while (!todo.empty()) {
        int v = todo.back();
        todo.pop_back();
        for (int w : succ[v])
            if (!seen[w] && (keep.empty() || keep[w])) {
                seen[w] = true;
                todo.push_back(w);
            }
    }
    return seen;
}

}  // namespace mucalc
