#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "clemens/bounds.hpp"
#include "clemens/canonical.hpp"
#include "clemens/complex.hpp"
#include "clemens/curves.hpp"
#include "clemens/density.hpp"
#include "clemens/graph.hpp"
#include "clemens/strata.hpp"

namespace clemens {

struct EnumerateOptions {
    // When nonzero, face and weight iteration orders are shuffled. The
    // result is canonically sorted, so output must not depend on the seed.
    unsigned long long shuffle_seed = 0;
};

// Size limits driving the search. wall_allowance is zero for a plain
// complex; refined complexes admit degree-free direction changes and raise
// it (and the vertex/edge bounds) accordingly.
struct EnumerationParams {
    int genus = 0;
    int num_marks = 0;
    Rat degree_bound;
    Int type_a_cap = 0;   // max count of nonzero-sigma vertices, walls included
    Int leaf_cap = 0;     // max count of degree-1 vertices
    Int vertex_bound = 1;
    Int edge_bound = 0;
    Rat min_leaf_degree;  // every degree-1 vertex costs at least this much; 0 = no bound
    // Whether a completed vertex with accumulated weight sigma costs at
    // least min_leaf_degree * |sigma|_inf. True for a plain complex; false
    // after refinement, where wall vertices project to zero.
    bool sigma_norm_cost = false;
    // Common denominator of the budget arithmetic: degree_bound and
    // min_leaf_degree must be integral once multiplied by it, and the degree
    // hook reports in these units, so budget checks run on machine words.
    Int degree_scale = 1;
};

// A vertex degree the search must reject: infinite, or sigma inadmissible at
// the face. Finite degrees are integers in 1/degree_scale units.
inline constexpr long long degree_rejected = std::numeric_limits<long long>::max();

// Pluggable decoration rules: admissible edge weights per union face, and
// the degree contribution of a vertex with accumulated weight sigma, in
// 1/degree_scale units (degree_rejected = inadmissible or unaffordable).
// Weight candidates must be nonzero vectors; the search relies on a leaf
// never having zero sigma.
struct EnumerationHooks {
    std::function<std::vector<WeightVector>(const Face&)> weight_candidates;
    std::function<long long(const Face&, const std::vector<long long>&)> vertex_degree_units;
};

namespace enum_detail {

inline int leaf_count(const MultiGraph& g) {
    int l = 0;
    for (int v = 0; v < g.num_vertices; ++v)
        if (g.degree(v) == 1) ++l;
    return l;
}

// Connected multigraphs without self-loops, up to isomorphism: grow trees by
// leaf attachment (leaf count never decreases along a growth chain, so the
// leaf cap prunes completely), then add up to `genus` extra edges.
inline std::vector<MultiGraph> enumerate_graphs(const EnumerationParams& p) {
    std::vector<MultiGraph> trees;
    {
        MultiGraph k1;
        k1.num_vertices = 1;
        trees.push_back(k1);
    }
    std::vector<MultiGraph> layer = trees;
    for (Int size = 2; size <= p.vertex_bound; ++size) {
        std::vector<MultiGraph> next;
        std::map<std::string, char> seen;
        for (const auto& t : layer) {
            for (int u = 0; u < t.num_vertices; ++u) {
                MultiGraph g = t;
                g.edges.push_back({u, g.num_vertices});
                g.num_vertices += 1;
                if (Int(leaf_count(g)) > p.leaf_cap) continue;
                std::string key = canonical_graph_string(g);
                if (seen.emplace(key, 1).second) next.push_back(g);
            }
        }
        if (next.empty()) break;
        for (const auto& g : next) trees.push_back(g);
        layer = std::move(next);
    }

    std::vector<MultiGraph> out;
    std::map<std::string, char> seen;
    for (const auto& t : trees) {
        int max_b1 = p.genus;
        Int room = p.edge_bound - Int((int)t.edges.size());
        if (room < 0) continue;
        if (Int(max_b1) > room) max_b1 = (int)room;
        std::vector<std::pair<int, int>> pairs;
        for (int u = 0; u < t.num_vertices; ++u)
            for (int v = u + 1; v < t.num_vertices; ++v) pairs.push_back({u, v});
        // multisets of extra edges, as non-decreasing index sequences
        std::vector<int> pick;
        std::function<void(int, int)> rec = [&](int b1_left, int from) {
            MultiGraph g = t;
            for (int idx : pick) g.edges.push_back({pairs[idx].first, pairs[idx].second});
            int b1 = (int)pick.size();
            // degree-based admissibility: leaves and unsupported degree-2
            // vertices all need nonzero sigma
            int l = leaf_count(g);
            int d2 = 0;
            for (int v = 0; v < g.num_vertices; ++v)
                if (g.degree(v) == 2) ++d2;
            Int pool = Int(p.genus - b1) + Int(p.num_marks);
            Int need = Int(l);
            if (Int(d2) > pool) need += Int(d2) - pool;
            if (Int(l) <= p.leaf_cap && need <= p.type_a_cap) {
                std::string key = canonical_graph_string(g);
                if (seen.emplace(key, 1).second) out.push_back(g);
            }
            if (b1_left == 0 || t.num_vertices < 2) return;
            for (int idx = from; idx < (int)pairs.size(); ++idx) {
                pick.push_back(idx);
                rec(b1_left - 1, idx);
                pick.pop_back();
            }
        };
        rec(max_b1, 0);
    }
    return out;
}

// DFS edge order from vertex 0: every prefix of the order spans a connected
// subgraph, and a vertex's star closes soon after its subtree is entered,
// so budget checks fire as early as possible.
struct EdgeOrder {
    std::vector<int> edge_perm;    // positions into g.edges
    std::vector<int> vertex_seen;  // discovery order of vertices
};

inline EdgeOrder dfs_edge_order(const MultiGraph& g) {
    EdgeOrder eo;
    std::vector<char> vis(g.num_vertices, 0), used(g.edges.size(), 0);
    std::function<void(int)> visit = [&](int v) {
        vis[v] = 1;
        eo.vertex_seen.push_back(v);
        // edges back into the visited part first: they close cycles, whose
        // consistency prunes harder than anything a fresh subtree offers
        for (int ei : g.incident(v)) {
            if (used[ei] || !vis[g.other_end(ei, v)]) continue;
            used[ei] = 1;
            eo.edge_perm.push_back(ei);
        }
        for (int ei : g.incident(v)) {
            if (used[ei]) continue;
            int w = g.other_end(ei, v);
            if (vis[w]) continue;  // became visited in this loop: skip, rescan
            used[ei] = 1;
            eo.edge_perm.push_back(ei);
            visit(w);
        }
        for (int ei : g.incident(v)) {
            if (used[ei]) continue;
            used[ei] = 1;
            eo.edge_perm.push_back(ei);
        }
    };
    visit(0);
    return eo;
}

struct Core {
    CombinatorialType type;  // genus all zero, no marks
    Rat degree;
};

class Search {
  public:
    Search(const ClemensComplex& c, const EnumerationParams& p, const EnumerationHooks& h,
           const EnumerateOptions& opt)
        : c_(c), p_(p), h_(h) {
        if (opt.shuffle_seed != 0) rng_.emplace(opt.shuffle_seed);
    }

    std::vector<CombinatorialType> run() {
        if (p_.degree_scale <= 0) throw InternalError("degree_scale must be positive");
        scale_ = p_.degree_scale;
        bound_s_ = scaled_units(p_.degree_bound);
        mld_s_ = p_.min_leaf_degree > 0 ? scaled_units(p_.min_leaf_degree) : 0;
        std::vector<MultiGraph> graphs = enumerate_graphs(p_);
        for (const MultiGraph& g : graphs) decorate(g);
        // goodness is independent of genus and marks, so decide it per core
        std::vector<CombinatorialType> out;
        std::map<std::string, CombinatorialType> final_types;
        long long good_cores = 0;
        for (auto& [key, core] : cores_) {
            (void)key;
            if (!is_good(c_, core.type).good) continue;
            ++good_cores;
            expand(core.type, final_types);
        }
        for (auto& [key, t] : final_types) {
            (void)key;
            out.push_back(t);
        }
        if (std::getenv("CLEMENS_ENUM_STATS"))
            std::cerr << "[enum] graphs=" << graphs.size() << " nodes=" << stat_nodes_
                      << " records=" << stat_records_ << " cores=" << cores_.size()
                      << " good=" << good_cores << " types=" << out.size() << "\n";
        return out;
    }

  private:
    const ClemensComplex& c_;
    EnumerationParams p_;
    EnumerationHooks h_;
    std::optional<std::mt19937_64> rng_;
    long long stat_nodes_ = 0;
    long long stat_records_ = 0;
    Int scale_ = 1;          // degree units per 1: all budgets live in 1/scale_ steps
    long long bound_s_ = 0;  // degree_bound in units
    long long mld_s_ = 0;    // min_leaf_degree in units

    // Degrees inside the search are integers in 1/scale_ units; this marks a
    // candidate whose endpoint degree is infinite or inadmissible.
    static constexpr long long kInadmissible = degree_rejected;

    long long scaled_units(const Rat& v) const {
        Rat q = v * scale_;
        if (denominator(q) != 1)
            throw InternalError("degree_scale leaves a fractional degree: " +
                                format_rational(v));
        return numerator(q).convert_to<long long>();
    }

    // One candidate weight for an edge, with the degree either endpoint
    // would contribute if the edge were its whole star (the leaf case).
    struct PairEntry {
        WeightVector w;
        std::vector<long long> wl;  // w again, machine width for the hot loop
        long long sdeg_u = 0, sdeg_v = 0;  // leaf degrees in units
        long long norm = 0;                // |w|_inf
    };
    struct PairData {
        std::vector<PairEntry> entries;  // two-vertex-feasible candidates
        std::vector<int> by_deg_u;       // finite sdeg_u, ascending
        std::vector<int> by_deg_v;
        std::vector<int> by_norm;        // all entries, ascending |w|_inf
        Face support;                    // union face: all weights live here
        std::map<std::vector<long long>, int> index;  // w on support -> entry
    };

    std::map<std::string, Core> cores_;
    std::map<std::string, std::vector<WeightVector>> weight_cache_;
    std::vector<std::optional<PairData>> pair_table_;
    std::map<std::vector<long long>, bool> cycle_cache_;

    // Whether some positive combination of the given vectors is zero: the
    // closing condition of a cycle whose oriented edge weights they are.
    bool positively_closable(const std::vector<std::vector<long long>>& dirs) {
        // order independence: the key sorts per-vector blocks
        std::vector<long long> key;
        {
            std::vector<std::vector<long long>> blocks = dirs;
            std::sort(blocks.begin(), blocks.end());
            for (const auto& b : blocks) key.insert(key.end(), b.begin(), b.end());
        }
        const int m = (int)dirs[0].size();
        auto it = cycle_cache_.find(key);
        if (it != cycle_cache_.end()) return it->second;
        Polyhedron poly;
        poly.num_vars = (int)dirs.size();
        for (int i = 0; i < poly.num_vars; ++i) poly.var_names.push_back("l" + std::to_string(i));
        for (int j = 0; j < m; ++j) {
            Constraint row;
            row.a.assign(poly.num_vars, Rat(0));
            for (int i = 0; i < poly.num_vars; ++i) row.a[i] = Rat(dirs[i][j]);
            row.rel = Rel::Eq;
            row.b = 0;
            poly.rows.push_back(row);
        }
        for (int i = 0; i < poly.num_vars; ++i) {
            Constraint row;
            row.a.assign(poly.num_vars, Rat(0));
            row.a[i] = -1;
            row.rel = Rel::Lt;
            row.b = 0;
            poly.rows.push_back(row);
        }
        bool feas = fm_feasible(poly);
        cycle_cache_.emplace(std::move(key), feas);
        return feas;
    }

    template <class T>
    void maybe_shuffle(std::vector<T>& v) {
        if (rng_) std::shuffle(v.begin(), v.end(), *rng_);
    }

    const std::vector<WeightVector>& weights_for(const Face& f) {
        std::string key = face_key(f);
        auto it = weight_cache_.find(key);
        if (it != weight_cache_.end()) return it->second;
        auto list = h_.weight_candidates(f);
        return weight_cache_.emplace(key, std::move(list)).first->second;
    }

    bool pair_feasible(const Face& iu, const Face& iv, const WeightVector& w) {
        CombinatorialType t;
        t.graph.num_vertices = 2;
        t.graph.edges = {{0, 1}};
        t.face_label = {iu, iv};
        t.genus_label = {0, 0};
        t.weight_at_u = {w};
        StratumBuild sb = stratum_polyhedron(c_, t);
        return sb.reason.empty() && fm_feasible(sb.poly);
    }

    // Admissible weights for an edge whose endpoints carry the given labels:
    // candidates of the union face that pass the two-vertex placement LP,
    // with both leaf degrees resolved up front. Built once per label-index
    // pair so the search loop is table-driven.
    const PairData& pair_data(int fi, int fj) {
        const int nf = (int)c_.faces.size();
        if (pair_table_.empty()) pair_table_.assign(nf * nf, std::nullopt);
        auto& slot = pair_table_[fi * nf + fj];
        if (slot) return *slot;
        PairData pd;
        const Face& iu = c_.faces[fi];
        const Face& iv = c_.faces[fj];
        Face uni = face_union(iu, iv);
        if (c_.is_face(uni)) {
            pd.support = uni;
            for (const WeightVector& w : weights_for(uni)) {
                if (!pair_feasible(iu, iv, w)) continue;
                PairEntry pe;
                pe.w = w;
                pe.wl.reserve(w.size());
                for (const Int& x : w) {
                    long long al = x.convert_to<long long>();
                    pe.wl.push_back(al);
                    if (al < 0) al = -al;
                    if (al > pe.norm) pe.norm = al;
                }
                std::vector<long long> neg(pe.wl.size());
                for (size_t i = 0; i < pe.wl.size(); ++i) neg[i] = -pe.wl[i];
                pe.sdeg_u = h_.vertex_degree_units(iu, pe.wl);
                pe.sdeg_v = h_.vertex_degree_units(iv, neg);  // v sees -w
                pd.entries.push_back(std::move(pe));
            }
            auto order_by = [&pd](long long PairEntry::* member, std::vector<int>& out) {
                for (int i = 0; i < (int)pd.entries.size(); ++i)
                    if (pd.entries[i].*member != kInadmissible) out.push_back(i);
                std::sort(out.begin(), out.end(), [&pd, member](int a, int b) {
                    long long ra = pd.entries[a].*member;
                    long long rb = pd.entries[b].*member;
                    if (ra != rb) return ra < rb;
                    return a < b;
                });
            };
            order_by(&PairEntry::sdeg_u, pd.by_deg_u);
            order_by(&PairEntry::sdeg_v, pd.by_deg_v);
            pd.by_norm.resize(pd.entries.size());
            for (int i = 0; i < (int)pd.entries.size(); ++i) pd.by_norm[i] = i;
            std::sort(pd.by_norm.begin(), pd.by_norm.end(), [&pd](int a, int b) {
                if (pd.entries[a].norm != pd.entries[b].norm)
                    return pd.entries[a].norm < pd.entries[b].norm;
                return a < b;
            });
            for (int i = 0; i < (int)pd.entries.size(); ++i) {
                std::vector<long long> key;
                key.reserve(pd.support.size());
                for (int j : pd.support)
                    key.push_back(pd.entries[i].w[j].convert_to<long long>());
                pd.index.emplace(std::move(key), i);
            }
        }
        slot = std::move(pd);
        return *slot;
    }

    void decorate(const MultiGraph& g) {
        const int nv = g.num_vertices;
        EdgeOrder eo = dfs_edge_order(g);
        MultiGraph og;  // edges reordered so assignment index = edge index
        og.num_vertices = nv;
        for (int pos : eo.edge_perm) og.edges.push_back(g.edges[pos]);
        const int ne = (int)og.edges.size();

        std::vector<int> label_idx(nv, -1);
        std::vector<const PairEntry*> chosen(ne, nullptr);
        std::vector<int> remaining(nv, 0);
        for (int v = 0; v < nv; ++v) remaining[v] = (int)og.incident(v).size();
        // weights are integral and |sigma| stays below the summed norms of a
        // handful of edges, so plain machine words carry the accumulation
        std::vector<std::vector<long long>> sigma_acc(
            nv, std::vector<long long>(c_.num_vertices(), 0));
        const long long pool = p_.genus - og.b1() + p_.num_marks;

        std::vector<int> face_order(c_.faces.size());
        for (size_t i = 0; i < face_order.size(); ++i) face_order[i] = (int)i;
        maybe_shuffle(face_order);

        auto labels_of = [&]() {
            std::vector<Face> out(nv);
            for (int v = 0; v < nv; ++v) out[v] = c_.faces[label_idx[v]];
            return out;
        };

        if (ne == 0) {
            // isolated vertex: degree of the zero sigma
            std::vector<long long> zero(c_.num_vertices(), 0);
            for (int fi : face_order) {
                label_idx[0] = fi;
                long long contrib = h_.vertex_degree_units(c_.faces[fi], zero);
                if (contrib != kInadmissible && contrib <= bound_s_)
                    record(og, labels_of(), {}, Rat(Int(contrib), scale_));
            }
            return;
        }

        const bool leaf_bound = p_.min_leaf_degree > 0;
        int leaves_total = 0;
        for (int v = 0; v < nv; ++v)
            if (og.degree(v) == 1) ++leaves_total;
        // price of k still-open leaves, each at least the minimal degree
        std::vector<long long> leaf_floor(leaves_total + 1, 0);
        for (int k = 1; k <= leaves_total; ++k)
            leaf_floor[k] = leaf_floor[k - 1] + mld_s_;

        // DFS tree replay: each non-tree edge closes a fundamental cycle,
        // recorded as (edge, sign) terms oriented around the cycle. When the
        // closing edge is assigned, the oriented weights must admit a
        // positive zero combination or no positions can realize the loop.
        std::vector<std::vector<std::pair<int, int>>> fundamental(ne);
        {
            std::vector<int> par_vertex(nv, -1), par_edge(nv, -1), depth(nv, 0);
            std::vector<char> disc(nv, 0);
            disc[0] = 1;
            for (int ei = 0; ei < ne; ++ei) {
                const auto& e = og.edges[ei];
                int nu = !disc[e.u] ? e.u : (!disc[e.v] ? e.v : -1);
                if (nu >= 0) {
                    int pv = nu == e.u ? e.v : e.u;
                    disc[nu] = 1;
                    par_vertex[nu] = pv;
                    par_edge[nu] = ei;
                    depth[nu] = depth[pv] + 1;
                    continue;
                }
                std::vector<std::pair<int, int>> up_a, up_b;
                int a = e.u, b = e.v;
                while (a != b) {
                    if (depth[a] >= depth[b]) {
                        int pe = par_edge[a];
                        up_a.push_back({pe, og.edges[pe].u == a ? +1 : -1});
                        a = par_vertex[a];
                    } else {
                        int pe = par_edge[b];
                        up_b.push_back({pe, og.edges[pe].u == b ? -1 : +1});
                        b = par_vertex[b];
                    }
                }
                auto& terms = fundamental[ei];
                terms = std::move(up_a);
                terms.insert(terms.end(), up_b.rbegin(), up_b.rend());
                terms.push_back({ei, -1});
            }
        }

        auto collect = [&]() {
            std::vector<WeightVector> out(ne);
            for (int i = 0; i < ne; ++i) out[i] = chosen[i]->w;
            return out;
        };

        // Labels and weights are chosen together along the DFS edge order: a
        // vertex is labeled when its first edge comes up, so every prune cuts
        // the whole joint subtree instead of one labeling at a time. lo_max
        // caps how many still-open leaves the remaining budget covers; it only
        // moves when a completed vertex spends degree, so the per-node check
        // is an integer compare.
        std::function<void(int, long long, long long, int, int)> rec =
            [&](int ei, long long used_degree, long long used_pool, int leaves_open,
                int lo_max) {
            if (ei == ne) {
                record(og, labels_of(), collect(), Rat(Int(used_degree), scale_));
                return;
            }
            const auto& e = og.edges[ei];
            const bool u_leaf = og.degree(e.u) == 1;
            const bool v_leaf = og.degree(e.v) == 1;

            auto try_entry = [&](const PairEntry& pe, const Face& support) {
                ++stat_nodes_;
                chosen[ei] = &pe;
                for (int k : support) {
                    sigma_acc[e.u][k] += pe.wl[k];
                    sigma_acc[e.v][k] -= pe.wl[k];
                }
                remaining[e.u] -= 1;
                remaining[e.v] -= 1;
                long long deg = used_degree;
                long long pl = used_pool;
                int lo = leaves_open;
                int lm = lo_max;
                bool ok = true;
                bool spent = false;
                for (int x : {e.u, e.v}) {
                    if (remaining[x] != 0) continue;
                    if ((x == e.u) ? u_leaf : v_leaf) {
                        // a leaf's sigma is its one edge weight, nonzero by
                        // construction, so its degree is already tabled
                        long long dv = (x == e.u) ? pe.sdeg_u : pe.sdeg_v;
                        if (dv == kInadmissible) {
                            ok = false;
                            break;
                        }
                        deg += dv;
                        spent = true;
                        if (deg > bound_s_) {
                            ok = false;
                            break;
                        }
                        --lo;
                        continue;
                    }
                    const auto& sl = sigma_acc[x];
                    long long contrib = h_.vertex_degree_units(c_.faces[label_idx[x]], sl);
                    if (contrib == kInadmissible) {
                        ok = false;
                        break;
                    }
                    deg += contrib;
                    spent = true;
                    if (deg > bound_s_) {
                        ok = false;
                        break;
                    }
                    if (og.degree(x) == 2) {
                        bool zero = true;
                        for (long long sv : sl)
                            if (sv != 0) {
                                zero = false;
                                break;
                            }
                        if (zero) {
                            pl += 1;  // will need genus or a mark for simplicity
                            if (pl > pool) {
                                ok = false;
                                break;
                            }
                        }
                    }
                }
                // every leaf not yet completed still has to pay at least the
                // minimal vertex degree: re-floor the allowance when degree
                // was spent, then the prune is lo > lm
                if (ok && spent && leaf_bound) {
                    long long f = (bound_s_ - deg) / mld_s_;
                    lm = f >= leaves_total ? leaves_total : (int)f;
                }
                if (ok && lo > lm) ok = false;
                if (ok && !fundamental[ei].empty()) {
                    std::vector<std::vector<long long>> dirs;
                    dirs.reserve(fundamental[ei].size());
                    for (auto [fe, sg] : fundamental[ei]) {
                        std::vector<long long> d = chosen[fe]->wl;
                        if (sg < 0)
                            for (long long& x : d) x = -x;
                        dirs.push_back(std::move(d));
                    }
                    if (!positively_closable(dirs)) ok = false;
                }
                if (ok) rec(ei + 1, deg, pl, lo, lm);
                remaining[e.u] += 1;
                remaining[e.v] += 1;
                for (int k : support) {
                    sigma_acc[e.u][k] -= pe.wl[k];
                    sigma_acc[e.v][k] += pe.wl[k];
                }
            };

            auto weight_step = [&]() {
                const PairData& pd = pair_data(label_idx[e.u], label_idx[e.v]);
                if (rng_) {
                    std::vector<int> order(pd.entries.size());
                    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
                    maybe_shuffle(order);
                    for (int i : order) try_entry(pd.entries[i], pd.support);
                    return;
                }
                if (u_leaf || v_leaf) {
                    // the completing leaf pays its tabled degree on the spot:
                    // walk candidates cheapest first and stop at the first
                    // that busts the budget, the rest only cost more
                    const auto& idxs = u_leaf ? pd.by_deg_u : pd.by_deg_v;
                    long long rem = bound_s_ - used_degree;
                    if (leaf_bound) {
                        rem -= leaf_floor[leaves_open - 1 - (u_leaf && v_leaf ? 1 : 0)];
                        if (u_leaf && v_leaf) rem -= mld_s_;
                    }
                    for (int i : idxs) {
                        const PairEntry& pe = pd.entries[i];
                        if ((u_leaf ? pe.sdeg_u : pe.sdeg_v) > rem) break;
                        try_entry(pe, pd.support);
                    }
                    return;
                }
                if (p_.sigma_norm_cost && leaf_bound &&
                    (remaining[e.u] == 1 || remaining[e.v] == 1)) {
                    // some endpoint closes an internal star here, and its
                    // final sigma costs at least min_leaf_degree * |sigma|_inf
                    long long rem = bound_s_ - used_degree;
                    if (leaves_open > 0) rem -= leaf_floor[leaves_open];
                    if (rem < 0) return;
                    long long radius = rem / mld_s_;

                    // feasible weights confine the closing sigma to a box:
                    // when the box undercuts the candidate list, probe its
                    // lattice points in the pair index instead of scanning
                    const int x = remaining[e.u] == 1 ? e.u : e.v;
                    const int s = (int)pd.support.size();
                    long long volume = 1;
                    bool boxed = true;
                    for (int i = 0; i + 1 < s; ++i) {
                        volume *= 2 * radius + 1;
                        if (volume > (long long)pd.entries.size()) {
                            boxed = false;
                            break;
                        }
                    }
                    if (boxed) {
                        int ptr = 0;
                        for (int j = 0; j < c_.num_vertices(); ++j) {
                            if (ptr < s && pd.support[ptr] == j) {
                                ++ptr;
                                continue;
                            }
                            long long a = sigma_acc[x][j];
                            if ((a < 0 ? -a : a) > radius) return;
                        }
                        std::vector<long long> target(s), key(s);
                        for (int i = 0; i < s; ++i) {
                            long long sv = sigma_acc[x][pd.support[i]];
                            target[i] = x == e.u ? -sv : sv;
                        }
                        std::function<void(int, long long)> probe = [&](int i, long long sum) {
                            if (i == s - 1) {
                                long long last = -sum;
                                if (last < target[i] - radius || last > target[i] + radius)
                                    return;
                                key[i] = last;
                                auto it = pd.index.find(key);
                                if (it != pd.index.end())
                                    try_entry(pd.entries[it->second], pd.support);
                                return;
                            }
                            for (long long w = target[i] - radius; w <= target[i] + radius; ++w) {
                                key[i] = w;
                                probe(i + 1, sum + w);
                            }
                        };
                        if (s > 0) probe(0, 0);
                        return;
                    }

                    // box too large: walk candidates by |w|_inf and stop once
                    // the closing cost alone busts the budget
                    long long cutoff = std::numeric_limits<long long>::max();
                    for (int y : {e.u, e.v}) {
                        if (remaining[y] != 1) continue;
                        long long prior = 0;
                        for (long long sv : sigma_acc[y]) {
                            if (sv < 0) sv = -sv;
                            if (sv > prior) prior = sv;
                        }
                        long long fy = radius + prior;
                        if (fy < cutoff) cutoff = fy;
                    }
                    for (int i : pd.by_norm) {
                        const PairEntry& pe = pd.entries[i];
                        if (pe.norm > cutoff) break;
                        try_entry(pe, pd.support);
                    }
                    return;
                }
                for (const PairEntry& pe : pd.entries) try_entry(pe, pd.support);
            };

            int fresh = label_idx[e.u] < 0 ? e.u : (label_idx[e.v] < 0 ? e.v : -1);
            if (fresh < 0) {
                weight_step();
                return;
            }
            for (int fi : face_order) {
                label_idx[fresh] = fi;
                weight_step();
            }
            label_idx[fresh] = -1;
        };

        int root_lm = leaves_total;
        if (leaf_bound) {
            long long f = bound_s_ / mld_s_;
            if (f < leaves_total) root_lm = (int)f;
        }
        int root = eo.vertex_seen[0];
        for (int fi : face_order) {
            label_idx[root] = fi;
            rec(0, 0, 0, leaves_total, root_lm);
        }
        label_idx[root] = -1;
    }

    void record(const MultiGraph& g, const std::vector<Face>& labels,
                const std::vector<WeightVector>& weights, const Rat& degree) {
        ++stat_records_;
        Core core;
        core.type.graph = g;
        core.type.face_label = labels;
        core.type.genus_label.assign(g.num_vertices, 0);
        core.type.weight_at_u = weights;
        core.degree = degree;
        CanonicalForm cf = canonical_form(core.type);
        cores_.emplace(cf.bytes, std::move(core));
    }

    void expand(const CombinatorialType& core, std::map<std::string, CombinatorialType>& sink) {
        const int nv = core.graph.num_vertices;
        const int spare = p_.genus - core.graph.b1();
        if (spare < 0) return;
        std::vector<int> comp(nv, 0);
        std::function<void(int, int)> genus_rec = [&](int v, int left) {
            if (v == nv - 1) {
                comp[v] = left;
                marks_rec(core, comp, sink);
                return;
            }
            for (int take = 0; take <= left; ++take) {
                comp[v] = take;
                genus_rec(v + 1, left - take);
            }
        };
        if (nv == 0) return;
        genus_rec(0, spare);
    }

    void marks_rec(const CombinatorialType& core, const std::vector<int>& genus_comp,
                   std::map<std::string, CombinatorialType>& sink) {
        std::vector<int> marks(p_.num_marks, 0);
        std::function<void(int)> rec = [&](int mi) {
            if (mi == p_.num_marks) {
                CombinatorialType t = core;
                t.genus_label = genus_comp;
                t.marks = marks;
                if (!is_simple(t, c_.num_vertices())) return;
                CanonicalForm cf = canonical_form(t);
                if (sink.count(cf.bytes)) return;
                sink.emplace(cf.bytes, relabel_canonical(t, cf));
                return;
            }
            for (int v = 0; v < core.graph.num_vertices; ++v) {
                marks[mi] = v;
                rec(mi + 1);
            }
        };
        rec(0);
    }
};

}  // namespace enum_detail

// All types admitted by the given limits and hooks: connected, simple, good,
// within the degree bound, pairwise distinct and canonically labeled, sorted
// by canonical form.
inline std::vector<CombinatorialType> enumerate_with(const ClemensComplex& c,
                                                     const EnumerationParams& p,
                                                     const EnumerationHooks& h,
                                                     const EnumerateOptions& opt = {}) {
    enum_detail::Search s(c, p, h, opt);
    return s.run();  // map iteration is already sorted by canonical bytes
}

// Edge weight candidates in a plain complex: supported in the union face,
// zero coordinate sum, nonzero, components bounded.
inline std::vector<WeightVector> base_weight_candidates(const ClemensComplex& c, const Face& f,
                                                        const Int& bound) {
    std::vector<WeightVector> out;
    if (bound <= 0 || f.size() < 2) return out;
    WeightVector w(c.num_vertices(), Int(0));
    std::function<void(size_t, Int)> rec = [&](size_t fi, Int sum) {
        if (fi == f.size()) {
            if (sum == 0 && !is_zero(w)) out.push_back(w);
            return;
        }
        for (Int x = -bound; x <= bound; ++x) {
            w[f[fi]] = x;
            rec(fi + 1, sum + x);
        }
        w[f[fi]] = 0;
    };
    rec(0, Int(0));
    return out;
}

// Density entry in 1/scale units; infinite entries become degree_rejected
// (with |sigma_j| > 0 they dominate the max and kill the vertex anyway).
inline long long density_units(const ExtRat& e, const Int& scale) {
    if (e.infinite) return degree_rejected;
    Rat q = e.value * scale;
    if (denominator(q) != 1)
        throw InternalError("degree scale leaves a fractional density entry");
    return numerator(q).convert_to<long long>();
}

inline EnumerationHooks base_hooks(const ClemensComplex& c, const SimpleDensity& d,
                                   const EnumerationBounds& b, const Int& scale) {
    // Per-face link sets and density columns, resolved once as integers in
    // 1/scale units: the degree hook runs on every completed vertex.
    struct FaceInfo {
        std::vector<long long> entry;  // by ambient vertex; -1 = not in link
    };
    auto cache = std::make_shared<std::map<Face, FaceInfo>>();
    auto info_for = [&c, &d, scale, cache](const Face& I) -> const FaceInfo& {
        auto it = cache->find(I);
        if (it != cache->end()) return it->second;
        FaceInfo fi;
        fi.entry.assign(c.num_vertices(), -1);
        for (int j : link_set(c, I)) fi.entry[j] = density_units(d.at(I, j), scale);
        return cache->emplace(I, std::move(fi)).first->second;
    };

    EnumerationHooks h;
    h.weight_candidates = [&c, bound = b.weight_bound](const Face& f) {
        return base_weight_candidates(c, f, bound);
    };
    h.vertex_degree_units = [info_for](const Face& I,
                                       const std::vector<long long>& sigma) -> long long {
        const FaceInfo& fi = info_for(I);
        long long best = 0;
        for (int j = 0; j < (int)sigma.size(); ++j) {
            if (sigma[j] == 0) continue;
            long long col = fi.entry[j];
            if (col < 0 || col == degree_rejected) return degree_rejected;
            long long v = col * (sigma[j] < 0 ? -sigma[j] : sigma[j]);
            if (v > best) best = v;
        }
        return best;
    };
    return h;
}

// Every vertex degree under density hooks is an integer multiple of some
// density entry, so the lcm of the entry denominators (and the bound's)
// clears all budget arithmetic to integers.
inline Int degree_scale_for(const SimpleDensity& d, const Rat& degree_bound) {
    Int L = denominator(degree_bound);
    for (const auto& [key, value] : d.entries) {
        (void)key;
        if (value.is_finite()) L = lcm(L, denominator(value.value));
    }
    return L;
}

inline std::vector<CombinatorialType> enumerate_types(const ClemensComplex& c,
                                                      const SimpleDensity& d, int genus,
                                                      int num_marks, const Rat& degree_bound,
                                                      const EnumerateOptions& opt = {}) {
    ViolationReport rep = validate_density(c, d);
    if (!rep.ok) throw DomainError(rep.message);
    if (degree_bound < 0) throw DomainError("degree bound must be nonnegative");
    EnumerationParams p;
    p.genus = genus;
    p.num_marks = num_marks;
    p.degree_bound = degree_bound;
    EnumerationBounds b;
    try {
        b = compute_bounds(d, genus, num_marks, degree_bound);
    } catch (const DomainError&) {
        // every density entry infinite: nonzero sigma is never affordable,
        // nonzero weights cannot occur, only point types remain
        b.n_a = 0;
        b.n0 = genus + num_marks;
        b.vertex_bound = 1;
        b.edge_bound = 0;
        b.weight_bound = 0;
    }
    p.type_a_cap = b.n_a;
    p.leaf_cap = b.n_a + 2 * Int(genus);
    p.vertex_bound = b.vertex_bound;
    p.edge_bound = b.edge_bound;
    p.min_leaf_degree = b.omega_min;
    p.sigma_norm_cost = true;  // plain complex: degree scales with |sigma|_inf
    p.degree_scale = degree_scale_for(d, degree_bound);
    return enumerate_with(c, p, base_hooks(c, d, b, p.degree_scale), opt);
}

}  // namespace clemens
