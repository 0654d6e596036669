#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clemens/complex.hpp"
#include "clemens/curves.hpp"
#include "clemens/lp.hpp"

namespace clemens {

// Polyhedral model of a stratum. Variables: the root vertex position (one
// per complex vertex) followed by one length per edge. reason is nonempty
// exactly when a structural requirement fails, in which case poly is the
// canonical empty polyhedron.
struct StratumBuild {
    Polyhedron poly;
    std::string reason;
};

namespace strata_detail {

// Linear expressions for every vertex position in terms of the root position
// and edge lengths, propagated along a BFS spanning tree. tree_edge[e] marks
// spanning-tree edges.
struct PositionExprs {
    int m = 0;
    int num_vars = 0;
    // exprs[v][i] = coefficient row (size num_vars) of coordinate i of h(v)
    std::vector<std::vector<std::vector<Rat>>> exprs;
    std::vector<char> tree_edge;
};

inline PositionExprs position_exprs(const ClemensComplex& c, const CombinatorialType& t) {
    PositionExprs pe;
    pe.m = c.num_vertices();
    const int nv = t.graph.num_vertices;
    const int ne = (int)t.graph.edges.size();
    pe.num_vars = pe.m + ne;
    pe.exprs.assign(nv, {});
    pe.tree_edge.assign(ne, 0);

    std::vector<char> placed(nv, 0);
    pe.exprs[0].assign(pe.m, std::vector<Rat>(pe.num_vars, Rat(0)));
    for (int i = 0; i < pe.m; ++i) pe.exprs[0][i][i] = 1;
    placed[0] = 1;
    std::vector<int> queue{0};
    while (!queue.empty()) {
        int v = queue.front();
        queue.erase(queue.begin());
        for (int ei = 0; ei < ne; ++ei) {
            const auto& e = t.graph.edges[ei];
            int other = -1;
            Rat sign;
            if (e.u == v && !placed[e.v]) {
                other = e.v;
                sign = 1;  // h(v_other) = h(v) + len * w
            } else if (e.v == v && !placed[e.u]) {
                other = e.u;
                sign = -1;  // h(v_other) = h(v) - len * w
            } else {
                continue;
            }
            pe.tree_edge[ei] = 1;
            pe.exprs[other] = pe.exprs[v];
            for (int i = 0; i < pe.m; ++i)
                pe.exprs[other][i][pe.m + ei] += sign * Rat(t.weight_at_u[ei][i]);
            placed[other] = 1;
            queue.push_back(other);
        }
    }
    return pe;
}

inline StratumBuild build(const ClemensComplex& c, const CombinatorialType& t, bool strict) {
    const int m = c.num_vertices();
    const int ne = (int)t.graph.edges.size();
    const int num_vars = m + ne;

    StratumBuild out;
    out.poly.num_vars = num_vars;
    out.poly.var_names = c.vertex_names;
    for (int ei = 0; ei < ne; ++ei) out.poly.var_names.push_back("len_" + std::to_string(ei));

    auto fail = [&](const std::string& reason) {
        StratumBuild bad;
        bad.poly = Polyhedron::empty_canonical(num_vars);
        bad.poly.var_names = out.poly.var_names;
        bad.reason = reason;
        return bad;
    };

    for (int v = 0; v < t.graph.num_vertices; ++v)
        if (!c.is_face(t.face_label[v]))
            return fail("label not a face: vertex " + std::to_string(v));
    for (int ei = 0; ei < ne; ++ei) {
        const auto& e = t.graph.edges[ei];
        const WeightVector& w = t.weight_at_u[ei];
        Face uni = face_union(t.face_label[e.u], t.face_label[e.v]);
        if (!c.is_face(uni)) return fail("edge union not a face: edge " + std::to_string(ei));
        Int sum = 0;
        for (const auto& x : w) sum += x;
        if (sum != 0)
            return fail("weight has nonzero coordinate sum: edge " + std::to_string(ei));
        for (int i = 0; i < m; ++i)
            if (w[i] != 0 && !std::binary_search(uni.begin(), uni.end(), i))
                return fail("weight not supported in edge face: edge " + std::to_string(ei));
    }

    PositionExprs pe = position_exprs(c, t);
    const Rel ineq = strict ? Rel::Lt : Rel::Le;

    // Root coordinates sum to 1; edge weights have zero coordinate sum, so
    // the normalization propagates to every vertex.
    {
        Constraint row;
        row.a.assign(num_vars, Rat(0));
        for (int i = 0; i < m; ++i) row.a[i] = 1;
        row.rel = Rel::Eq;
        row.b = 1;
        out.poly.rows.push_back(row);
    }
    // Membership pattern of each vertex in the relative interior of its face.
    for (int v = 0; v < t.graph.num_vertices; ++v) {
        const Face& I = t.face_label[v];
        for (int i = 0; i < m; ++i) {
            bool inside = std::binary_search(I.begin(), I.end(), i);
            Constraint row;
            row.b = 0;
            if (inside) {
                row.a.assign(num_vars, Rat(0));
                for (int k = 0; k < num_vars; ++k) row.a[k] = -pe.exprs[v][i][k];
                row.rel = ineq;  // expr > 0 (or >= 0 in the closure)
            } else {
                row.a = pe.exprs[v][i];
                row.rel = Rel::Eq;
            }
            out.poly.rows.push_back(row);
        }
    }
    // Positive lengths.
    for (int ei = 0; ei < ne; ++ei) {
        Constraint row;
        row.a.assign(num_vars, Rat(0));
        row.a[m + ei] = -1;
        row.rel = ineq;
        row.b = 0;
        out.poly.rows.push_back(row);
    }
    // Non-tree edges close up: h(u) + len * w = h(v).
    for (int ei = 0; ei < ne; ++ei) {
        if (pe.tree_edge[ei]) continue;
        const auto& e = t.graph.edges[ei];
        for (int i = 0; i < m; ++i) {
            Constraint row;
            row.a.assign(num_vars, Rat(0));
            for (int k = 0; k < num_vars; ++k)
                row.a[k] = pe.exprs[e.u][i][k] - pe.exprs[e.v][i][k];
            row.a[m + ei] += Rat(t.weight_at_u[ei][i]);
            row.rel = Rel::Eq;
            row.b = 0;
            out.poly.rows.push_back(row);
        }
    }
    return out;
}

}  // namespace strata_detail

inline StratumBuild stratum_polyhedron(const ClemensComplex& c, const CombinatorialType& t) {
    return strata_detail::build(c, t, true);
}

inline StratumBuild closure_polyhedron(const ClemensComplex& c, const CombinatorialType& t) {
    return strata_detail::build(c, t, false);
}

// Vertex positions encoded by a solution vector of the stratum polyhedron.
inline std::vector<RationalPoint> evaluate_positions(const ClemensComplex& c,
                                                     const CombinatorialType& t,
                                                     const std::vector<Rat>& sol) {
    strata_detail::PositionExprs pe = strata_detail::position_exprs(c, t);
    std::vector<RationalPoint> out(t.graph.num_vertices, RationalPoint(pe.m, Rat(0)));
    for (int v = 0; v < t.graph.num_vertices; ++v)
        for (int i = 0; i < pe.m; ++i) {
            Rat acc = 0;
            for (int k = 0; k < pe.num_vars; ++k) acc += pe.exprs[v][i][k] * sol[k];
            out[v][i] = acc;
        }
    return out;
}

inline ParamTropCurve curve_from_solution(const ClemensComplex& c, const CombinatorialType& t,
                                          const std::vector<Rat>& sol) {
    ParamTropCurve k;
    k.graph = t.graph;
    k.genus_label = t.genus_label;
    k.weight_at_u = t.weight_at_u;
    k.marks = t.marks;
    k.positions = evaluate_positions(c, t, sol);
    return k;
}

// Coordinates (root position, edge lengths) of a curve whose graph, labels
// and weights literally equal the given type's.
inline std::vector<Rat> coordinates_of(const ClemensComplex& c, const CombinatorialType& t,
                                       const ParamTropCurve& k) {
    std::vector<Rat> sol;
    sol.reserve(c.num_vertices() + k.graph.edges.size());
    for (const auto& x : k.positions[0]) sol.push_back(x);
    for (int ei = 0; ei < (int)k.graph.edges.size(); ++ei) sol.push_back(edge_length(k, ei));
    (void)t;
    return sol;
}

struct GoodnessReport {
    bool good = false;
    std::string reason;
    std::optional<ParamTropCurve> witness;
};

// A type is good when its stratum is nonempty; the witness curve is checked
// to validate and to reproduce the type.
inline GoodnessReport is_good(const ClemensComplex& c, const CombinatorialType& t) {
    StratumBuild sb = stratum_polyhedron(c, t);
    if (!sb.reason.empty()) return {false, sb.reason, std::nullopt};
    auto w = fm_witness(sb.poly);
    if (!w) return {false, "stratum empty", std::nullopt};
    ParamTropCurve k = curve_from_solution(c, t, *w);
    ViolationReport rep = validate_curve(c, k);
    if (!rep.ok) throw InternalError("stratum witness invalid: " + rep.message);
    CombinatorialType back = type_of(c, k);
    for (int v = 0; v < t.graph.num_vertices; ++v)
        if (back.face_label[v] != t.face_label[v])
            throw InternalError("stratum witness type mismatch at vertex " + std::to_string(v));
    return {true, "", k};
}

}  // namespace clemens
