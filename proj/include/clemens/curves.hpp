#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "clemens/complex.hpp"
#include "clemens/density.hpp"
#include "clemens/graph.hpp"
#include "clemens/rational.hpp"

namespace clemens {

using WeightVector = std::vector<Int>;

inline WeightVector negated(const WeightVector& w) {
    WeightVector out(w.size());
    for (size_t i = 0; i < w.size(); ++i) out[i] = -w[i];
    return out;
}

inline bool is_zero(const WeightVector& w) {
    for (const auto& x : w)
        if (x != 0) return false;
    return true;
}

// Combinatorial type of a parametrized tropical curve: the underlying
// multigraph with a face label and genus per vertex, one flag weight per
// edge (stored at the edge's u end; the v end carries the negative), and an
// ordered mark sequence. Isomorphisms must fix each mark index.
struct CombinatorialType {
    MultiGraph graph;
    std::vector<Face> face_label;
    std::vector<int> genus_label;
    std::vector<WeightVector> weight_at_u;
    std::vector<int> marks;
};

// Parametrized tropical curve: positions instead of face labels; the face
// label of a vertex is the carrier of its position.
struct ParamTropCurve {
    MultiGraph graph;
    std::vector<RationalPoint> positions;
    std::vector<int> genus_label;
    std::vector<WeightVector> weight_at_u;
    std::vector<int> marks;
};

template <class T>
WeightVector flag_weight(const T& t, int edge, int at_vertex) {
    const auto& e = t.graph.edges[edge];
    if (e.u == at_vertex) return t.weight_at_u[edge];
    if (e.v == at_vertex) return negated(t.weight_at_u[edge]);
    throw InternalError("flag_weight: vertex not an endpoint");
}

// Sum of flag weights at a vertex.
template <class T>
WeightVector sigma(const T& t, int v, int dim) {
    WeightVector out(dim, Int(0));
    for (int ei = 0; ei < (int)t.graph.edges.size(); ++ei) {
        const auto& e = t.graph.edges[ei];
        if (e.u == v)
            for (int i = 0; i < dim; ++i) out[i] += t.weight_at_u[ei][i];
        if (e.v == v)
            for (int i = 0; i < dim; ++i) out[i] -= t.weight_at_u[ei][i];
    }
    return out;
}

enum class VertexClass { A, B };

template <class T>
VertexClass vertex_class(const T& t, int v, int dim) {
    return is_zero(sigma(t, v, dim)) ? VertexClass::B : VertexClass::A;
}

template <class T>
int marks_at(const T& t, int v) {
    int n = 0;
    for (int m : t.marks)
        if (m == v) ++n;
    return n;
}

// Total genus: first Betti number plus vertex genera. Assumes connected.
template <class T>
int genus(const T& t) {
    int g = t.graph.b1();
    for (int gv : t.genus_label) g += gv;
    return g;
}

// Simple: every unmarked genus-0 vertex of degree 2 has nonzero sigma.
template <class T>
bool is_simple(const T& t, int dim) {
    for (int v = 0; v < t.graph.num_vertices; ++v) {
        if (t.graph.degree(v) != 2) continue;
        if (t.genus_label[v] != 0 || marks_at(t, v) > 0) continue;
        if (is_zero(sigma(t, v, dim))) return false;
    }
    return true;
}

namespace detail {

// Removes one removable vertex (degree 2, genus 0, unmarked, sigma = 0) by
// merging its two edges, skipping vertices whose removal would create a
// self-loop. erase_payload(v) drops per-vertex data alongside. Returns true
// if a vertex was removed.
template <class ErasePayload>
bool simplify_step(MultiGraph& graph, std::vector<WeightVector>& weight_at_u,
                   std::vector<int>& genus_label, std::vector<int>& marks, int dim,
                   ErasePayload erase_payload) {
    for (int v = 0; v < graph.num_vertices; ++v) {
        if (graph.degree(v) != 2 || genus_label[v] != 0) continue;
        bool marked = false;
        for (int m : marks)
            if (m == v) marked = true;
        if (marked) continue;

        std::vector<int> inc = graph.incident(v);
        if (inc.size() != 2) continue;  // self-loop counted twice; cannot happen here
        int e1 = inc[0], e2 = inc[1];
        int a = graph.other_end(e1, v);
        int b = graph.other_end(e2, v);
        if (a == b) continue;  // removal would create a self-loop

        WeightVector w1 = weight_at_u[e1];
        if (graph.edges[e1].u != v) {
            // want the flag at v
            w1 = negated(w1);
        }
        WeightVector w2 = weight_at_u[e2];
        if (graph.edges[e2].u != v) w2 = negated(w2);
        bool zero = true;
        for (int i = 0; i < dim; ++i)
            if (w1[i] + w2[i] != 0) zero = false;
        if (!zero) continue;

        // New edge a -> b carries the flag weight of e1 at a.
        WeightVector wa = weight_at_u[e1];
        if (graph.edges[e1].u != a) wa = negated(wa);

        // Remove the two old edges (higher index first) and append the merged one.
        int hi = std::max(e1, e2), lo = std::min(e1, e2);
        graph.edges.erase(graph.edges.begin() + hi);
        weight_at_u.erase(weight_at_u.begin() + hi);
        graph.edges.erase(graph.edges.begin() + lo);
        weight_at_u.erase(weight_at_u.begin() + lo);
        graph.edges.push_back({a, b});
        weight_at_u.push_back(wa);

        // Remove the vertex, shifting indices above it down.
        graph.num_vertices -= 1;
        for (auto& e : graph.edges) {
            if (e.u > v) --e.u;
            if (e.v > v) --e.v;
        }
        genus_label.erase(genus_label.begin() + v);
        for (auto& m : marks)
            if (m > v) --m;
        erase_payload(v);
        return true;
    }
    return false;
}

}  // namespace detail

inline CombinatorialType simplify(const CombinatorialType& t) {
    CombinatorialType s = t;
    int dim = s.weight_at_u.empty() ? 0 : (int)s.weight_at_u[0].size();
    while (detail::simplify_step(s.graph, s.weight_at_u, s.genus_label, s.marks, dim,
                                 [&](int v) { s.face_label.erase(s.face_label.begin() + v); })) {
    }
    return s;
}

inline ParamTropCurve simplify(const ParamTropCurve& k) {
    ParamTropCurve s = k;
    int dim = s.positions.empty() ? 0 : (int)s.positions[0].size();
    while (detail::simplify_step(s.graph, s.weight_at_u, s.genus_label, s.marks, dim,
                                 [&](int v) { s.positions.erase(s.positions.begin() + v); })) {
    }
    return s;
}

// Combinatorial type of a curve: replace positions by their carriers.
inline CombinatorialType type_of(const ClemensComplex& c, const ParamTropCurve& k) {
    CombinatorialType t;
    t.graph = k.graph;
    t.genus_label = k.genus_label;
    t.weight_at_u = k.weight_at_u;
    t.marks = k.marks;
    t.face_label.reserve(k.positions.size());
    for (const auto& p : k.positions) t.face_label.push_back(carrier(c, p));
    return t;
}

struct DegreeReport {
    ExtRat total = ExtRat(Rat(0));
    std::vector<ExtRat> local;
};

// Tropical degree: sum over vertices of the local degree of sigma at the
// vertex's face. Marks do not contribute.
inline DegreeReport degree(const ClemensComplex& c, const SimpleDensity& d,
                           const CombinatorialType& t) {
    DegreeReport rep;
    for (int v = 0; v < t.graph.num_vertices; ++v) {
        ExtRat loc = local_degree(c, d, t.face_label[v], sigma(t, v, c.num_vertices()));
        rep.local.push_back(loc);
        rep.total = rep.total + loc;
    }
    return rep;
}

inline DegreeReport degree(const ClemensComplex& c, const SimpleDensity& d,
                           const ParamTropCurve& k) {
    return degree(c, d, type_of(c, k));
}

namespace detail {

template <class T>
ViolationReport validate_shared(const ClemensComplex& c, const T& t) {
    const int nv = t.graph.num_vertices;
    if (nv <= 0) return {false, "empty graph"};
    if ((int)t.genus_label.size() != nv) return {false, "genus label count mismatch"};
    if ((int)t.weight_at_u.size() != t.graph.edges.size())
        return {false, "weight count mismatch"};
    for (const auto& e : t.graph.edges)
        if (e.u < 0 || e.u >= nv || e.v < 0 || e.v >= nv)
            return {false, "edge endpoint out of range"};
    if (t.graph.has_self_loop()) return {false, "self-loop"};
    if (!t.graph.connected()) return {false, "not connected"};
    for (int gv : t.genus_label)
        if (gv < 0) return {false, "negative genus"};
    for (int m : t.marks)
        if (m < 0 || m >= nv) return {false, "mark out of range"};
    for (const auto& w : t.weight_at_u) {
        if ((int)w.size() != c.num_vertices()) return {false, "weight has wrong dimension"};
        if (is_zero(w)) return {false, "zero weight"};
    }
    return {true, ""};
}

}  // namespace detail

inline ViolationReport validate_type(const ClemensComplex& c, const CombinatorialType& t) {
    ViolationReport rep = detail::validate_shared(c, t);
    if (!rep.ok) return rep;
    if ((int)t.face_label.size() != t.graph.num_vertices)
        return {false, "face label count mismatch"};
    for (const auto& I : t.face_label)
        if (!c.is_face(I)) return {false, "label not a face: " + face_to_string(c, I)};
    return {true, ""};
}

// Exact rational edge length of a curve edge; requires the displacement to be
// a positive multiple of the flag weight.
inline Rat edge_length(const ParamTropCurve& k, int edge) {
    const auto& e = k.graph.edges[edge];
    const WeightVector& w = k.weight_at_u[edge];
    const RationalPoint& hu = k.positions[e.u];
    const RationalPoint& hv = k.positions[e.v];
    int pivot = -1;
    for (int i = 0; i < (int)w.size(); ++i)
        if (w[i] != 0) { pivot = i; break; }
    if (pivot < 0) throw InternalError("edge_length: zero weight");
    Rat ell = (hv[pivot] - hu[pivot]) / Rat(w[pivot]);
    for (int i = 0; i < (int)w.size(); ++i)
        if (hv[i] - hu[i] != ell * Rat(w[i]))
            throw InternalError("edge_length: displacement not parallel to weight");
    if (ell <= 0) throw InternalError("edge_length: nonpositive length");
    return ell;
}

inline ViolationReport validate_curve(const ClemensComplex& c, const ParamTropCurve& k) {
    ViolationReport rep = detail::validate_shared(c, k);
    if (!rep.ok) return rep;
    if ((int)k.positions.size() != k.graph.num_vertices)
        return {false, "position count mismatch"};
    for (int v = 0; v < k.graph.num_vertices; ++v) {
        try {
            check_point_shape(c, k.positions[v]);
            carrier(c, k.positions[v]);
        } catch (const DomainError& err) {
            std::ostringstream os;
            os << "vertex " << v << ": " << err.what();
            return {false, os.str()};
        }
    }
    for (int ei = 0; ei < (int)k.graph.edges.size(); ++ei) {
        const auto& e = k.graph.edges[ei];
        const WeightVector& w = k.weight_at_u[ei];
        const RationalPoint& hu = k.positions[e.u];
        const RationalPoint& hv = k.positions[e.v];
        bool same = true;
        for (int i = 0; i < c.num_vertices(); ++i)
            if (hu[i] != hv[i]) same = false;
        if (same) {
            std::ostringstream os;
            os << "edge " << ei << ": endpoints coincide";
            return {false, os.str()};
        }
        int pivot = -1;
        for (int i = 0; i < c.num_vertices(); ++i)
            if (w[i] != 0) { pivot = i; break; }
        Rat ell = (hv[pivot] - hu[pivot]) / Rat(w[pivot]);
        bool parallel = true;
        for (int i = 0; i < c.num_vertices(); ++i)
            if (hv[i] - hu[i] != ell * Rat(w[i])) parallel = false;
        if (!parallel) {
            std::ostringstream os;
            os << "edge " << ei << ": weight not parallel to edge displacement";
            return {false, os.str()};
        }
        if (ell <= 0) {
            std::ostringstream os;
            os << "edge " << ei << ": weight points toward vertex";
            return {false, os.str()};
        }
        Face uni = face_union(support(hu), support(hv));
        if (!c.is_face(uni)) {
            std::ostringstream os;
            os << "edge " << ei << ": segment not in a face";
            return {false, os.str()};
        }
    }
    return {true, ""};
}

}  // namespace clemens
