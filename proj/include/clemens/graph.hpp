#pragma once

#include <algorithm>
#include <queue>
#include <vector>

#include "clemens/rational.hpp"

namespace clemens {

// Finite multigraph on vertices 0..num_vertices-1. Parallel edges allowed,
// self-loops are not (callers validate).
struct MultiGraph {
    struct Edge {
        int u = 0;
        int v = 0;
    };

    int num_vertices = 0;
    std::vector<Edge> edges;

    int degree(int v) const {
        int d = 0;
        for (const auto& e : edges) {
            if (e.u == v) ++d;
            if (e.v == v) ++d;
        }
        return d;
    }

    // Incident edge indices, in edge order.
    std::vector<int> incident(int v) const {
        std::vector<int> out;
        for (int i = 0; i < (int)edges.size(); ++i)
            if (edges[i].u == v || edges[i].v == v) out.push_back(i);
        return out;
    }

    int other_end(int edge, int v) const {
        const Edge& e = edges[edge];
        return e.u == v ? e.v : e.u;
    }

    bool has_self_loop() const {
        for (const auto& e : edges)
            if (e.u == e.v) return true;
        return false;
    }

    bool connected() const {
        if (num_vertices == 0) return false;
        std::vector<char> seen(num_vertices, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int count = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const auto& e : edges) {
                int w = -1;
                if (e.u == v) w = e.v;
                else if (e.v == v) w = e.u;
                if (w >= 0 && !seen[w]) {
                    seen[w] = 1;
                    ++count;
                    q.push(w);
                }
            }
        }
        return count == num_vertices;
    }

    // First Betti number; meaningful for connected graphs.
    int b1() const { return (int)edges.size() - num_vertices + 1; }
};

}  // namespace clemens
