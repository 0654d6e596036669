#pragma once

#include <string>
#include <vector>

#include "clemens/curves.hpp"

namespace clemens {

struct Flag {
    int vertex = 0;
    int edge = 0;
    bool operator==(const Flag& o) const { return vertex == o.vertex && edge == o.edge; }
};

struct PathTrace {
    std::vector<Flag> flags;
    int end_vertex = -1;  // endpoint of the last edge, opposite its flag vertex
};

// Decomposes the flow of the i-th weight coordinate through the flag
// (v0, e0) into w^i paths. Each path follows positive i-weights through
// remaining edge capacity, stopping only where no continuation exists; such
// a stop vertex has nonzero sigma, otherwise coordinate conservation at
// sigma = 0 vertices is violated and an internal error is raised. Ties are
// broken by smallest edge id at the current vertex.
inline std::vector<PathTrace> extract_paths(const CombinatorialType& t, int v0, int e0, int i) {
    const int dim = t.weight_at_u.empty() ? 0 : (int)t.weight_at_u[0].size();
    if (v0 < 0 || v0 >= t.graph.num_vertices) throw DomainError("flag vertex out of range");
    if (e0 < 0 || e0 >= (int)t.graph.edges.size()) throw DomainError("flag edge out of range");
    if (i < 0 || i >= dim) throw DomainError("direction out of range");
    {
        const auto& e = t.graph.edges[e0];
        if (e.u != v0 && e.v != v0) throw DomainError("flag vertex not an endpoint");
    }

    const Int m = flag_weight(t, e0, v0)[i];
    if (m <= 0) throw DomainError("precondition m <= 0");

    std::vector<Int> capacity(t.graph.edges.size());
    for (int ei = 0; ei < (int)t.graph.edges.size(); ++ei) {
        Int w = t.weight_at_u[ei][i];
        capacity[ei] = w < 0 ? -w : w;
    }
    // Conservation of the i-th coordinate at sigma = 0 vertices: inflow
    // capacity equals outflow capacity. Holds for every valid type.
    for (int v = 0; v < t.graph.num_vertices; ++v) {
        if (vertex_class(t, v, dim) != VertexClass::B) continue;
        Int in = 0, out = 0;
        for (int ei : t.graph.incident(v)) {
            Int w = flag_weight(t, ei, v)[i];
            if (w > 0) out += capacity[ei];
            if (w < 0) in += capacity[ei];
        }
        if (in != out) throw InternalError("capacity invariant broken");
    }

    std::vector<PathTrace> out;
    for (Int p = 0; p < m; ++p) {
        PathTrace trace;
        int cur_v = v0;
        int cur_e = e0;
        if (capacity[e0] <= 0) throw InternalError("capacity invariant broken");
        capacity[e0] -= 1;
        trace.flags.push_back({cur_v, cur_e});
        while (true) {
            int next_v = t.graph.other_end(cur_e, cur_v);
            int choice = -1;
            for (int ei : t.graph.incident(next_v)) {
                if (capacity[ei] <= 0) continue;
                if (flag_weight(t, ei, next_v)[i] <= 0) continue;
                if (choice == -1 || ei < choice) choice = ei;
            }
            if (choice == -1) {
                if (vertex_class(t, next_v, dim) == VertexClass::B)
                    throw InternalError("capacity invariant broken");
                trace.end_vertex = next_v;
                break;
            }
            cur_v = next_v;
            cur_e = choice;
            capacity[cur_e] -= 1;
            trace.flags.push_back({cur_v, cur_e});
        }
        out.push_back(std::move(trace));
    }
    return out;
}

}  // namespace clemens
