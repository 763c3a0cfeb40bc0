// Internal: strongly connected components of the support digraph of a
// nonnegative row-major matrix, via iterative Tarjan. Edge j -> i iff
// a(i, j) > tol. Components are returned with members sorted ascending and
// ordered so that upstream components (those that can reach others along
// edges) come first.
#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace parepi::detail {

inline std::vector<std::vector<int>> scc_components(const double* a, int n, double tol) {
    std::vector<std::vector<int>> adj(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (a[std::size_t(i) * n + j] > tol) adj[j].push_back(i);

    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int next_index = 0;

    // Explicit DFS frames: node and position in its adjacency list.
    struct Frame { int v; std::size_t pos; };
    std::vector<Frame> frames;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        frames.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.pos < adj[f.v].size()) {
                int w = adj[f.v][f.pos++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    std::vector<int> members;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = int(sccs.size());
                        members.push_back(w);
                    } while (w != f.v);
                    std::sort(members.begin(), members.end());
                    sccs.push_back(std::move(members));
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    // Tarjan emits downstream components first; flip to upstream-first.
    std::reverse(sccs.begin(), sccs.end());
    return sccs;
}

}  // namespace parepi::detail
