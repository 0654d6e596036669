#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "clemens/curves.hpp"
#include "clemens/graph.hpp"

namespace clemens {

// Canonical labeling of a decorated multigraph. bytes is equal for two
// inputs exactly when they are isomorphic (respecting all decorations, with
// marks fixed indexwise); map sends each original vertex to its canonical
// position.
struct CanonicalForm {
    std::string bytes;
    std::vector<int> map;
};

namespace canon_detail {

struct EdgeRec {
    int u = 0;
    int v = 0;
    int lab_u = 0;  // edge label id as seen from u
    int lab_v = 0;  // edge label id as seen from v
};

// Decorated graph with every label interned to an order-preserving id, so
// the search compares machine integers; the original text stays alongside
// only to render the result.
struct Input {
    int n = 0;
    std::vector<int> vinv;                // iso-invariant vertex decoration
    std::vector<std::string> vinv_text;   // per vertex, for rendering
    std::vector<EdgeRec> edges;
    std::vector<std::string> label_text;  // label id -> text
};

// Ranks strings to dense integer ids, preserving order; table keeps the
// distinct strings indexed by id.
inline std::vector<int> intern_strings(const std::vector<std::string>& keys,
                                       std::vector<std::string>& table) {
    table = keys;
    std::sort(table.begin(), table.end());
    table.erase(std::unique(table.begin(), table.end()), table.end());
    std::vector<int> out(keys.size());
    for (size_t i = 0; i < keys.size(); ++i)
        out[i] = (int)(std::lower_bound(table.begin(), table.end(), keys[i]) - table.begin());
    return out;
}

// Ranks rows to dense integer colors, preserving lexicographic order.
inline std::vector<int> rank_rows(const std::vector<std::vector<int>>& rows) {
    std::vector<std::vector<int>> sorted = rows;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> out(rows.size());
    for (size_t i = 0; i < rows.size(); ++i)
        out[i] = (int)(std::lower_bound(sorted.begin(), sorted.end(), rows[i]) - sorted.begin());
    return out;
}

// Color refinement: a vertex's new color combines its old color with the
// multiset of (edge label seen from here, neighbor color) over incident
// flags. Stable colors are isomorphism-invariant.
inline std::vector<int> refine(const Input& in) {
    std::vector<std::vector<std::pair<int, int>>> flags(in.n);
    for (const auto& e : in.edges) {
        flags[e.u].push_back({e.lab_u, e.v});
        flags[e.v].push_back({e.lab_v, e.u});
    }
    std::vector<int> color = in.vinv;
    std::vector<std::pair<int, int>> tok;
    for (int round = 0; round < in.n + 1; ++round) {
        std::vector<std::vector<int>> sig(in.n);
        for (int v = 0; v < in.n; ++v) {
            tok.clear();
            for (auto [lab, w] : flags[v]) tok.push_back({lab, color[w]});
            std::sort(tok.begin(), tok.end());
            auto& s = sig[v];
            s.reserve(1 + 2 * tok.size());
            s.push_back(color[v]);
            for (auto [lab, c] : tok) {
                s.push_back(lab);
                s.push_back(c);
            }
        }
        std::vector<int> next = rank_rows(sig);
        if (next == color) break;
        color = std::move(next);
    }
    return color;
}

struct Search {
    const Input& in;
    std::vector<int> color;
    std::vector<std::vector<int>> adj;  // vertex -> incident edge indices

    std::vector<int> pos;                 // vertex -> assigned position, -1 if none
    std::vector<std::vector<int>> recs;   // one row per placed position

    bool have_best = false;
    std::vector<std::vector<int>> best_recs;
    std::vector<int> best_pos;

    explicit Search(const Input& input) : in(input) {
        color = refine(in);
        adj.assign(in.n, {});
        for (int i = 0; i < (int)in.edges.size(); ++i) {
            adj[in.edges[i].u].push_back(i);
            adj[in.edges[i].v].push_back(i);
        }
        pos.assign(in.n, -1);
    }

    // Row for placing v at the next position: its invariant plus (position,
    // label) pairs for edges into the already-placed prefix, labeled from
    // the earlier side.
    std::vector<int> record_for(int v) const {
        std::vector<std::pair<int, int>> tokens;
        for (int ei : adj[v]) {
            const auto& e = in.edges[ei];
            int w = (e.u == v) ? e.v : e.u;
            if (w == v) continue;  // self-loops never occur in valid input
            if (pos[w] < 0) continue;
            tokens.push_back({pos[w], (e.u == w) ? e.lab_u : e.lab_v});
        }
        std::sort(tokens.begin(), tokens.end());
        std::vector<int> row;
        row.reserve(1 + 2 * tokens.size());
        row.push_back(in.vinv[v]);
        for (auto [p, lab] : tokens) {
            row.push_back(p);
            row.push_back(lab);
        }
        return row;
    }

    // -1: current prefix strictly smaller than the incumbent's, 0: equal,
    // +1: strictly larger (prunable). Compared against the current best each
    // time, so improvements during the search tighten later pruning.
    int compare_prefix() const {
        for (size_t i = 0; i < recs.size(); ++i) {
            if (recs[i] < best_recs[i]) return -1;
            if (recs[i] > best_recs[i]) return 1;
        }
        return 0;
    }

    void dfs(int depth) {
        if (depth == in.n) {
            if (!have_best || recs < best_recs) {
                have_best = true;
                best_recs = recs;
                best_pos = pos;
            }
            return;
        }
        // Candidates: unassigned vertices of minimal color. Colors are
        // isomorphism-invariant, so restricting to color-sorted orders keeps
        // the minimum well defined across isomorphic inputs.
        int cmin = -1;
        for (int v = 0; v < in.n; ++v)
            if (pos[v] < 0 && (cmin < 0 || color[v] < cmin)) cmin = color[v];
        for (int v = 0; v < in.n; ++v) {
            if (pos[v] >= 0 || color[v] != cmin) continue;
            pos[v] = depth;
            recs.push_back(record_for(v));
            if (!have_best || compare_prefix() <= 0) dfs(depth + 1);
            recs.pop_back();
            pos[v] = -1;
        }
    }

    // The winning labeling rendered with the original label text: equal
    // bytes across separate calls still means isomorphic inputs, because the
    // rendering reads nothing that is private to one interning pass.
    std::string render() const {
        std::vector<int> vert(in.n);  // position -> vertex
        for (int v = 0; v < in.n; ++v) vert[best_pos[v]] = v;
        std::ostringstream os;
        os << "n=" << in.n << ";";
        for (int p = 0; p < in.n; ++p) {
            int v = vert[p];
            std::vector<std::string> tokens;
            for (int ei : adj[v]) {
                const auto& e = in.edges[ei];
                int w = (e.u == v) ? e.v : e.u;
                if (w == v || best_pos[w] >= p) continue;
                tokens.push_back("(" + std::to_string(best_pos[w]) + ":" +
                                 in.label_text[(e.u == w) ? e.lab_u : e.lab_v] + ")");
            }
            std::sort(tokens.begin(), tokens.end());
            os << "[" << in.vinv_text[v];
            for (const auto& t : tokens) os << t;
            os << "];";
        }
        return os.str();
    }

    CanonicalForm run() {
        if (in.n == 0) return {"n=0;", {}};
        dfs(0);
        return {render(), best_pos};
    }
};

inline std::string weight_label(const WeightVector& w) {
    std::ostringstream os;
    os << "w=(";
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) os << ",";
        os << w[i];
    }
    os << ")";
    return os.str();
}

}  // namespace canon_detail

inline CanonicalForm canonical_form(const CombinatorialType& t) {
    canon_detail::Input in;
    in.n = t.graph.num_vertices;
    in.vinv_text.resize(in.n);
    for (int v = 0; v < in.n; ++v) {
        std::ostringstream os;
        os << "F=" << face_key(t.face_label[v]) << ";g=" << t.genus_label[v] << ";m=";
        for (int i = 0; i < (int)t.marks.size(); ++i)
            if (t.marks[i] == v) os << i << ",";
        in.vinv_text[v] = os.str();
    }
    std::vector<std::string> vtable;
    in.vinv = canon_detail::intern_strings(in.vinv_text, vtable);
    std::vector<std::string> labs;
    labs.reserve(2 * t.graph.edges.size());
    for (int ei = 0; ei < (int)t.graph.edges.size(); ++ei) {
        labs.push_back(canon_detail::weight_label(t.weight_at_u[ei]));
        labs.push_back(canon_detail::weight_label(negated(t.weight_at_u[ei])));
    }
    std::vector<int> lab_ids = canon_detail::intern_strings(labs, in.label_text);
    for (int ei = 0; ei < (int)t.graph.edges.size(); ++ei) {
        const auto& e = t.graph.edges[ei];
        in.edges.push_back({e.u, e.v, lab_ids[2 * ei], lab_ids[2 * ei + 1]});
    }
    return canon_detail::Search(in).run();
}

// Canonical string of the bare multigraph (no decorations); used to
// deduplicate graph shapes.
inline std::string canonical_graph_string(const MultiGraph& g) {
    canon_detail::Input in;
    in.n = g.num_vertices;
    in.vinv.assign(in.n, 0);
    in.vinv_text.assign(in.n, "");
    in.label_text.assign(1, "");
    for (const auto& e : g.edges) in.edges.push_back({e.u, e.v, 0, 0});
    return canon_detail::Search(in).run().bytes;
}

// Rewrites a type so vertex ids equal canonical positions, edges are listed
// with u < v sorted by (u, v, weight), and all labels follow along.
inline CombinatorialType relabel_canonical(const CombinatorialType& t, const CanonicalForm& cf) {
    CombinatorialType out;
    int n = t.graph.num_vertices;
    out.graph.num_vertices = n;
    out.face_label.resize(n);
    out.genus_label.resize(n);
    for (int v = 0; v < n; ++v) {
        out.face_label[cf.map[v]] = t.face_label[v];
        out.genus_label[cf.map[v]] = t.genus_label[v];
    }
    out.marks.reserve(t.marks.size());
    for (int m : t.marks) out.marks.push_back(cf.map[m]);

    struct ERec {
        int u, v;
        WeightVector w;
    };
    std::vector<ERec> recs;
    for (int ei = 0; ei < (int)t.graph.edges.size(); ++ei) {
        int u = cf.map[t.graph.edges[ei].u];
        int v = cf.map[t.graph.edges[ei].v];
        WeightVector w = t.weight_at_u[ei];
        if (u > v) {
            std::swap(u, v);
            w = negated(w);
        }
        recs.push_back({u, v, w});
    }
    std::sort(recs.begin(), recs.end(), [](const ERec& a, const ERec& b) {
        if (a.u != b.u) return a.u < b.u;
        if (a.v != b.v) return a.v < b.v;
        return a.w < b.w;
    });
    for (const auto& r : recs) {
        out.graph.edges.push_back({r.u, r.v});
        out.weight_at_u.push_back(r.w);
    }
    return out;
}

}  // namespace clemens
