#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "clemens/canonical.hpp"
#include "clemens/degeneration.hpp"
#include "clemens/enumerate.hpp"
#include "clemens/strata.hpp"

namespace clemens {

struct Stratum {
    CombinatorialType type;      // canonically labeled
    StratumBuild interior;       // strict polyhedron of the open stratum
    StratumBuild closure;
    int dim = -1;
    std::string canonical_bytes;
};

struct ModuliParams {
    int genus = 0;
    int num_marks = 0;
    Rat degree_bound;
};

struct ModuliSpace {
    ModuliParams params;
    std::vector<Stratum> strata;
    Poset poset;
};

namespace moduli_detail {

// A point of the closure polyhedron degenerates the curve: zero-length edges
// are contracted, vertices land on smaller faces. Reconstructs the limit as
// an honest curve.
inline ParamTropCurve contract_solution(const ClemensComplex& c, const CombinatorialType& t,
                                        const std::vector<Rat>& sol) {
    const int nv = t.graph.num_vertices;
    const int m = c.num_vertices();
    std::vector<RationalPoint> pos = evaluate_positions(c, t, sol);

    // union-find over zero-length edges
    std::vector<int> parent(nv);
    for (int v = 0; v < nv; ++v) parent[v] = v;
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::vector<char> zero_edge(t.graph.edges.size(), 0);
    for (int ei = 0; ei < (int)t.graph.edges.size(); ++ei) {
        if (sol[m + ei] == 0) {
            zero_edge[ei] = 1;
            parent[find(t.graph.edges[ei].u)] = find(t.graph.edges[ei].v);
        }
    }
    std::vector<int> cls(nv, -1);
    int num_cls = 0;
    for (int v = 0; v < nv; ++v)
        if (find(v) == v) cls[v] = num_cls++;
    for (int v = 0; v < nv; ++v) cls[v] = cls[find(v)];

    ParamTropCurve k;
    k.graph.num_vertices = num_cls;
    k.positions.assign(num_cls, RationalPoint());
    k.genus_label.assign(num_cls, 0);
    // each contracted class contributes its internal first Betti number
    std::vector<int> cls_vertices(num_cls, 0), cls_edges(num_cls, 0);
    for (int v = 0; v < nv; ++v) {
        cls_vertices[cls[v]] += 1;
        k.genus_label[cls[v]] += t.genus_label[v];
        k.positions[cls[v]] = pos[v];
    }
    for (int ei = 0; ei < (int)t.graph.edges.size(); ++ei) {
        if (zero_edge[ei]) {
            cls_edges[cls[t.graph.edges[ei].u]] += 1;
            continue;
        }
        int cu = cls[t.graph.edges[ei].u];
        int cv = cls[t.graph.edges[ei].v];
        if (cu == cv)
            throw InternalError("contraction produced a self-loop at edge " +
                                std::to_string(ei));
        k.graph.edges.push_back({cu, cv});
        k.weight_at_u.push_back(t.weight_at_u[ei]);
    }
    for (int cid = 0; cid < num_cls; ++cid)
        k.genus_label[cid] += cls_edges[cid] - cls_vertices[cid] + 1;
    for (int mark : t.marks) k.marks.push_back(cls[mark]);
    return k;
}

}  // namespace moduli_detail

// Assembles the moduli space: every good simple type within the degree
// bound, its stratum polyhedra and dimension, and the degeneration poset.
// Every facet of every closed stratum is sampled and the sampled limit curve
// is required to simplify into a preceding type.
inline ModuliSpace build_moduli(const ClemensComplex& c, const SimpleDensity& d, int genus,
                                int num_marks, const Rat& degree_bound,
                                const EnumerateOptions& opt = {}) {
    ModuliSpace m;
    m.params = {genus, num_marks, degree_bound};
    std::vector<CombinatorialType> types = enumerate_types(c, d, genus, num_marks, degree_bound, opt);

    for (const CombinatorialType& t : types) {
        Stratum s;
        s.type = t;
        s.interior = stratum_polyhedron(c, t);
        s.closure = closure_polyhedron(c, t);
        if (!s.interior.reason.empty())
            throw InternalError("enumerated type fails structurally: " + s.interior.reason);
        LpResult lr = lp_feasibility(s.interior.poly);
        if (!lr.feasible) throw InternalError("enumerated type has empty stratum");
        s.dim = lr.dimension;
        s.canonical_bytes = canonical_form(t).bytes;
        m.strata.push_back(std::move(s));
    }

    m.poset = build_poset(c, types);

    // boundary consistency: one sample per facet of each closed stratum
    for (size_t si = 0; si < m.strata.size(); ++si) {
        const Stratum& s = m.strata[si];
        for (size_t ri = 0; ri < s.closure.poly.rows.size(); ++ri) {
            if (s.closure.poly.rows[ri].rel != Rel::Le) continue;
            Polyhedron facet = s.closure.poly;
            facet.rows[ri].rel = Rel::Eq;
            auto w = fm_witness(facet);
            if (!w) continue;
            ParamTropCurve limit = moduli_detail::contract_solution(c, s.type, *w);
            ViolationReport rep = validate_curve(c, limit);
            if (!rep.ok)
                throw InternalError("boundary consistency violated: facet " +
                                    std::to_string(ri) + " of stratum " + std::to_string(si) +
                                    ": limit curve invalid: " + rep.message);
            CombinatorialType limit_type = simplify(type_of(c, limit));
            if (!precedes(c, limit_type, s.type))
                throw InternalError("boundary consistency violated: facet " +
                                    std::to_string(ri) + " of stratum " + std::to_string(si) +
                                    " does not precede its stratum");
        }
    }
    return m;
}

// Point location: which stratum contains the given curve.
inline int stratum_of(const ClemensComplex& c, const ModuliSpace& m, const ParamTropCurve& k) {
    ViolationReport rep = validate_curve(c, k);
    if (!rep.ok) throw DomainError(rep.message);
    ParamTropCurve ks = simplify(k);
    CombinatorialType t = type_of(c, ks);
    CanonicalForm cf = canonical_form(t);
    int found = -1;
    for (size_t si = 0; si < m.strata.size(); ++si)
        if (m.strata[si].canonical_bytes == cf.bytes) found = (int)si;
    if (found < 0) throw DomainError("not in moduli space");

    // align the curve with the stratum's canonical labeling and check its
    // coordinates against the polyhedron
    const Stratum& s = m.strata[found];
    std::vector<int> inv(t.graph.num_vertices);
    for (int v = 0; v < t.graph.num_vertices; ++v) inv[cf.map[v]] = v;
    ParamTropCurve aligned;
    aligned.graph.num_vertices = t.graph.num_vertices;
    aligned.positions.assign(t.graph.num_vertices, RationalPoint());
    aligned.genus_label.assign(t.graph.num_vertices, 0);
    for (int v = 0; v < t.graph.num_vertices; ++v) {
        aligned.positions[cf.map[v]] = ks.positions[v];
        aligned.genus_label[cf.map[v]] = ks.genus_label[v];
    }
    for (int mark : ks.marks) aligned.marks.push_back(cf.map[mark]);
    // order the relabeled edges exactly like the stratum type's; parallel
    // edges with equal weights are interchangeable (their lengths agree)
    std::vector<char> used(s.type.graph.edges.size(), 0);
    aligned.graph.edges = s.type.graph.edges;
    aligned.weight_at_u = s.type.weight_at_u;
    std::vector<Rat> lengths(s.type.graph.edges.size());
    for (int ei = 0; ei < (int)t.graph.edges.size(); ++ei) {
        int u = cf.map[t.graph.edges[ei].u];
        int v = cf.map[t.graph.edges[ei].v];
        WeightVector w = t.weight_at_u[ei];
        if (u > v) {
            std::swap(u, v);
            w = negated(w);
        }
        bool placed = false;
        for (size_t sj = 0; sj < s.type.graph.edges.size() && !placed; ++sj) {
            if (used[sj]) continue;
            if (s.type.graph.edges[sj].u == u && s.type.graph.edges[sj].v == v &&
                s.type.weight_at_u[sj] == w) {
                used[sj] = 1;
                lengths[sj] = edge_length(ks, ei);
                placed = true;
            }
        }
        if (!placed) throw InternalError("stratum edge alignment failed");
    }
    std::vector<Rat> coords;
    for (const auto& x : aligned.positions[0]) coords.push_back(x);
    for (const auto& l : lengths) coords.push_back(l);
    for (const Constraint& row : s.interior.poly.rows)
        if (!row.evaluate(coords))
            throw InternalError("curve coordinates violate its stratum polyhedron");
    return found;
}

}  // namespace clemens
