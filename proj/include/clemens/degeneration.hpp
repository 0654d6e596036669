#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clemens/canonical.hpp"
#include "clemens/curves.hpp"

namespace clemens {

// Witness for "target is a degeneration of source": a surjection
// phi: V(source) -> V(target) such that
//   (i)   the inter-fiber edges of source biject with the edges of target,
//         compatibly with endpoints and flag weights,
//   (ii)  every target label is contained in the label of each source vertex
//         above it,
//   (iii) fibers are connected and absorb genus: g_target(x) equals the
//         first Betti number of the fiber plus the vertex genera inside,
//   (iv)  marks correspond indexwise.
struct DegenerationWitness {
    bool found = false;
    std::vector<int> vertex_map;  // source vertex -> target vertex
};

namespace degen_detail {

// Key identifying an undirected decorated edge slot: endpoints sorted, with
// the flag weight on the smaller endpoint's side.
struct EdgeBucket {
    int a, b;
    WeightVector w;
    bool operator<(const EdgeBucket& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return w < o.w;
    }
    bool operator==(const EdgeBucket& o) const { return a == o.a && b == o.b && w == o.w; }
};

inline EdgeBucket bucket_of(int u, int v, const WeightVector& w_at_u) {
    if (u <= v) return {u, v, w_at_u};
    return {v, u, negated(w_at_u)};
}

struct Matcher {
    const ClemensComplex& c;
    const CombinatorialType& src;
    const CombinatorialType& tgt;
    const std::vector<char>& wildcard;  // target vertices with free label

    std::vector<std::vector<int>> cand;      // source vertex -> admissible targets
    std::map<EdgeBucket, int> tgt_capacity;  // target edge slots
    std::map<EdgeBucket, int> used;
    std::vector<int> phi;
    std::vector<int> order;  // source vertices in BFS order
    bool found = false;
    std::vector<int> result;

    Matcher(const ClemensComplex& cc, const CombinatorialType& s, const CombinatorialType& t,
            const std::vector<char>& wc)
        : c(cc), src(s), tgt(t), wildcard(wc) {}

    bool prepare() {
        int nS = src.graph.num_vertices, nT = tgt.graph.num_vertices;
        if (nT > nS) return false;
        if (src.marks.size() != tgt.marks.size()) return false;
        if (genus(src) != genus(tgt)) return false;

        cand.assign(nS, {});
        for (int v = 0; v < nS; ++v) {
            for (int x = 0; x < nT; ++x) {
                if (!wildcard[x] && !face_subset(tgt.face_label[x], src.face_label[v])) continue;
                cand[v].push_back(x);
            }
            if (cand[v].empty()) return false;
        }
        // Marks pin images.
        for (size_t i = 0; i < src.marks.size(); ++i) {
            int sv = src.marks[i], tv = tgt.marks[i];
            std::vector<int>& cs = cand[sv];
            if (std::find(cs.begin(), cs.end(), tv) == cs.end()) return false;
            cs = {tv};
        }
        for (int ei = 0; ei < (int)tgt.graph.edges.size(); ++ei) {
            const auto& e = tgt.graph.edges[ei];
            tgt_capacity[bucket_of(e.u, e.v, tgt.weight_at_u[ei])] += 1;
        }
        // BFS order so edges constrain assignments early.
        order.clear();
        std::vector<char> seen(nS, 0);
        std::vector<int> queue{0};
        seen[0] = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.erase(queue.begin());
            order.push_back(v);
            for (const auto& e : src.graph.edges) {
                int w = -1;
                if (e.u == v) w = e.v;
                else if (e.v == v) w = e.u;
                if (w >= 0 && !seen[w]) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
            }
        }
        if ((int)order.size() != nS) return false;  // disconnected source
        phi.assign(nS, -1);
        return true;
    }

    // Checks conditions that need the full map: surjectivity, exact edge
    // bijection, fiber connectivity and genus bookkeeping, wildcard labels.
    bool final_check() {
        int nT = tgt.graph.num_vertices;
        std::vector<std::vector<int>> fiber(nT);
        for (int v = 0; v < src.graph.num_vertices; ++v) fiber[phi[v]].push_back(v);
        for (int x = 0; x < nT; ++x)
            if (fiber[x].empty()) return false;

        // Inter-fiber edge buckets must match target buckets exactly.
        std::map<EdgeBucket, int> inter;
        std::vector<int> intra_count(nT, 0);
        for (int ei = 0; ei < (int)src.graph.edges.size(); ++ei) {
            const auto& e = src.graph.edges[ei];
            int x = phi[e.u], y = phi[e.v];
            if (x == y) {
                intra_count[x] += 1;
                continue;
            }
            WeightVector w = src.weight_at_u[ei];
            inter[bucket_of(x, y, w)] += 1;
        }
        if (inter != tgt_capacity) return false;

        for (int x = 0; x < nT; ++x) {
            // connectivity of the fiber under intra-fiber edges
            std::vector<int> stack{fiber[x][0]};
            std::vector<char> seen(src.graph.num_vertices, 0);
            seen[fiber[x][0]] = 1;
            int reached = 1;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (const auto& e : src.graph.edges) {
                    if (phi[e.u] != x || phi[e.v] != x) continue;
                    for (int w : {e.u, e.v}) {
                        if ((e.u == v || e.v == v) && !seen[w]) {
                            seen[w] = 1;
                            ++reached;
                            stack.push_back(w);
                        }
                    }
                }
            }
            if (reached != (int)fiber[x].size()) return false;
            int b1_fiber = intra_count[x] - (int)fiber[x].size() + 1;
            int genus_sum = 0;
            for (int v : fiber[x]) genus_sum += src.genus_label[v];
            if (tgt.genus_label[x] != b1_fiber + genus_sum) return false;
            if (wildcard[x]) {
                Face inter_face = src.face_label[fiber[x][0]];
                for (int v : fiber[x]) inter_face = face_intersect(inter_face, src.face_label[v]);
                if (inter_face.empty()) return false;
            }
        }
        return true;
    }

    void dfs(size_t idx) {
        if (found) return;
        if (idx == order.size()) {
            if (final_check()) {
                found = true;
                result = phi;
            }
            return;
        }
        int v = order[idx];
        for (int x : cand[v]) {
            phi[v] = x;
            // Bucket feasibility for source edges whose endpoints are both set.
            bool ok = true;
            std::vector<EdgeBucket> touched;
            for (int ei = 0; ei < (int)src.graph.edges.size() && ok; ++ei) {
                const auto& e = src.graph.edges[ei];
                int a = -1, b = -1;
                if (e.u == v) { a = v; b = e.v; }
                else if (e.v == v) { a = v; b = e.u; }
                else continue;
                if (phi[b] < 0) continue;
                int xa = phi[a], xb = phi[b];
                if (xa == xb) continue;
                WeightVector w = flag_weight(src, ei, a);
                EdgeBucket key = bucket_of(xa, xb, w);
                auto cap = tgt_capacity.find(key);
                if (cap == tgt_capacity.end()) { ok = false; break; }
                used[key] += 1;
                touched.push_back(key);
                if (used[key] > cap->second) ok = false;
            }
            if (ok) dfs(idx + 1);
            for (const auto& key : touched) used[key] -= 1;
            phi[v] = -1;
            if (found) return;
        }
    }

    DegenerationWitness run() {
        if (!prepare()) return {};
        dfs(0);
        if (!found) return {};
        return {true, result};
    }
};

}  // namespace degen_detail

// Searches for a witness that target is a degeneration of source.
inline DegenerationWitness is_degeneration(const ClemensComplex& c, const CombinatorialType& source,
                                           const CombinatorialType& target) {
    std::vector<char> wildcard(target.graph.num_vertices, 0);
    return degen_detail::Matcher(c, source, target, wildcard).run();
}

namespace degen_detail {

// Variant where some target vertices accept any label; used when the target
// is a subdivision whose inserted vertices carry no meaningful label.
inline DegenerationWitness is_degeneration_wild(const ClemensComplex& c,
                                                const CombinatorialType& source,
                                                const CombinatorialType& target,
                                                const std::vector<char>& wildcard) {
    return Matcher(c, source, target, wildcard).run();
}

}  // namespace degen_detail

// a_prime precedes a: the stratum of a_prime lies in the closure of the
// stratum of a. Concretely: some subdivision of a_prime (inserting removable
// degree-2 vertices into edges) is a degeneration of a. The number of
// inserted vertices never needs to exceed |V(a)| - |V(a_prime)| because the
// degeneration map is surjective.
inline bool precedes(const ClemensComplex& c, const CombinatorialType& a_prime,
                     const CombinatorialType& a) {
    if (genus(a_prime) != genus(a)) return false;
    if (a_prime.marks.size() != a.marks.size()) return false;
    if (!is_simple(a_prime, c.num_vertices())) return false;
    int slack = a.graph.num_vertices - a_prime.graph.num_vertices;
    if (slack < 0) return false;

    // Every edge weight of a_prime must occur among a's edge weights
    // (subdivision preserves weights and the bijection matches them).
    {
        std::vector<WeightVector> have;
        for (const auto& w : a.weight_at_u) {
            have.push_back(w);
            have.push_back(negated(w));
        }
        std::sort(have.begin(), have.end());
        for (const auto& w : a_prime.weight_at_u)
            if (!std::binary_search(have.begin(), have.end(), w)) return false;
    }

    const int num_edges = (int)a_prime.graph.edges.size();

    // Distribute k inserted vertices over the edges of a_prime, k <= slack.
    std::vector<int> insert_count(num_edges, 0);
    std::function<bool(int, int)> go = [&](int edge_idx, int remaining) -> bool {
        if (edge_idx == num_edges) {
            // Build the subdivision beta.
            CombinatorialType beta;
            int n_orig = a_prime.graph.num_vertices;
            beta.graph.num_vertices = n_orig;
            beta.face_label = a_prime.face_label;
            beta.genus_label = a_prime.genus_label;
            beta.marks = a_prime.marks;
            std::vector<char> wildcard(n_orig, 0);
            for (int ei = 0; ei < num_edges; ++ei) {
                const auto& e = a_prime.graph.edges[ei];
                const WeightVector& w = a_prime.weight_at_u[ei];
                int prev = e.u;
                for (int i = 0; i < insert_count[ei]; ++i) {
                    int nv = beta.graph.num_vertices++;
                    beta.face_label.push_back({});
                    beta.genus_label.push_back(0);
                    wildcard.push_back(1);
                    beta.graph.edges.push_back({prev, nv});
                    beta.weight_at_u.push_back(w);
                    prev = nv;
                }
                beta.graph.edges.push_back({prev, e.v});
                beta.weight_at_u.push_back(w);
            }
            return degen_detail::is_degeneration_wild(c, a, beta, wildcard).found;
        }
        for (int k = 0; k <= remaining; ++k) {
            insert_count[edge_idx] = k;
            if (go(edge_idx + 1, remaining - k)) return true;
        }
        insert_count[edge_idx] = 0;
        return false;
    };
    if (num_edges == 0) {
        // Point type: only the trivial subdivision exists.
        return is_degeneration(c, a, a_prime).found;
    }
    return go(0, slack);
}

// Full precedes-matrix over a list of types, with the partial-order axioms
// verified empirically (reflexivity, antisymmetry up to canonical equality,
// transitivity). covers holds the transitive reduction of the strict order.
struct Poset {
    std::vector<std::vector<char>> leq;      // leq[i][j]: types[i] precedes types[j]
    std::vector<std::pair<int, int>> covers;  // (i, j): i strictly below j, no type between
};

inline Poset build_poset(const ClemensComplex& c, const std::vector<CombinatorialType>& types) {
    const int k = (int)types.size();
    std::vector<std::string> canon(k);
    for (int i = 0; i < k; ++i) canon[i] = canonical_form(types[i]).bytes;

    Poset p;
    p.leq.assign(k, std::vector<char>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) p.leq[i][j] = precedes(c, types[i], types[j]) ? 1 : 0;

    for (int i = 0; i < k; ++i)
        if (!p.leq[i][i]) {
            throw InternalError("poset axiom violated: reflexivity fails at index " +
                                std::to_string(i));
        }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j && p.leq[i][j] && p.leq[j][i] && canon[i] != canon[j])
                throw InternalError("poset axiom violated: antisymmetry fails at indices " +
                                    std::to_string(i) + ", " + std::to_string(j));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (!p.leq[i][j]) continue;
            for (int l = 0; l < k; ++l)
                if (p.leq[j][l] && !p.leq[i][l])
                    throw InternalError("poset axiom violated: transitivity fails at indices " +
                                        std::to_string(i) + ", " + std::to_string(j) + ", " +
                                        std::to_string(l));
        }

    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == j || !p.leq[i][j]) continue;
            bool covered = true;
            for (int l = 0; l < k && covered; ++l)
                if (l != i && l != j && p.leq[i][l] && p.leq[l][j]) covered = false;
            if (covered) p.covers.push_back({i, j});
        }
    return p;
}

}  // namespace clemens
