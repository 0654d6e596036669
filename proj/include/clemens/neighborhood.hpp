#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "clemens/bounds.hpp"
#include "clemens/degeneration.hpp"
#include "clemens/enumerate.hpp"
#include "clemens/subdivision.hpp"

namespace clemens {

// A subdivision together with an anchor type in its fine complex. The
// anchor's preceded strata form a basic neighborhood in the moduli space.
struct SubdivisionDatum {
    Subdivision subdivision;
    CombinatorialType anchor;
};

namespace nbhd_detail {

// How many fine cells a straight segment inside a d-dimensional base face
// can visit: bounded both by the count of cut hyperplanes and by the total
// cell count.
inline Int crossings_per_edge(int nu, int d) {
    if (d <= 0 || nu <= 1) return 0;
    Int by_planes = Int(d) * (nu - 1) + Int(d * (d - 1) / 2) * (2 * nu - 1);
    Int by_cells = 1;
    for (int j = 0; j < d; ++j) by_cells *= nu;
    by_cells -= 1;
    return by_planes < by_cells ? by_planes : by_cells;
}

}  // namespace nbhd_detail

// Enumeration hooks for a fine complex: edge weights are the unique integral
// lifts of base weight candidates, and a vertex's degree contribution is the
// local degree of its projected sigma at the projected face. Direction
// changes with zero projected sigma are free.
inline EnumerationHooks fine_hooks(const Subdivision& s, const SimpleDensity& d,
                                   const Int& weight_bound, const Int& scale) {
    // Per-fine-face projection data, resolved once as integers in 1/scale
    // units: the degree hook runs on every completed vertex of the search.
    struct FineFaceInfo {
        std::vector<long long> entry;  // by base vertex; -1 = not in link
    };
    auto cache = std::make_shared<std::map<Face, FineFaceInfo>>();
    auto info_for = [&s, &d, scale, cache](const Face& fine_label) -> const FineFaceInfo& {
        auto it = cache->find(fine_label);
        if (it != cache->end()) return it->second;
        FineFaceInfo fi;
        Face bf = base_face_of(s, fine_label);
        fi.entry.assign(s.base.num_vertices(), -1);
        for (int j : link_set(s.base, bf)) fi.entry[j] = density_units(d.at(bf, j), scale);
        return cache->emplace(fine_label, std::move(fi)).first->second;
    };

    EnumerationHooks h;
    h.weight_candidates = [&s, weight_bound](const Face& fine_face) {
        std::vector<WeightVector> out;
        Face bf = base_face_of(s, fine_face);
        for (const WeightVector& b : base_weight_candidates(s.base, bf, weight_bound)) {
            bool integral = true;
            auto lift = subdiv_detail::lift_on(s, fine_face, b, integral);
            if (lift) out.push_back(*lift);
        }
        return out;
    };
    h.vertex_degree_units = [&s, info_for](const Face& fine_label,
                                           const std::vector<long long>& sigma_bar)
        -> long long {
        const FineFaceInfo& fi = info_for(fine_label);
        WeightVector sig(sigma_bar.size());
        for (size_t i = 0; i < sigma_bar.size(); ++i) sig[i] = Int(sigma_bar[i]);
        WeightVector b = project_weight(s, sig);
        long long best = 0;
        for (int j = 0; j < (int)b.size(); ++j) {
            if (b[j] == 0) continue;
            long long col = fi.entry[j];
            if (col < 0 || col == degree_rejected) return degree_rejected;
            Int a = b[j] < 0 ? Int(-b[j]) : b[j];
            long long v = col * a.convert_to<long long>();
            if (v > best) best = v;
        }
        return best;
    };
    return h;
}

// All fine types of the moduli space over the fine complex (projected degree
// within the bound) whose strata the anchor precedes.
inline std::vector<CombinatorialType> xi_set(const SubdivisionDatum& datum, int genus,
                                             int num_marks, const Rat& degree_bound,
                                             const SimpleDensity& d) {
    const Subdivision& s = datum.subdivision;
    ViolationReport sub_ok = validate_subdivision(s);
    if (!sub_ok.ok) throw DomainError(sub_ok.message);
    ViolationReport anchor_ok = validate_type(s.fine, datum.anchor);
    if (!anchor_ok.ok) throw DomainError("anchor: " + anchor_ok.message);
    ViolationReport dens_ok = validate_density(s.base, d);
    if (!dens_ok.ok) throw DomainError(dens_ok.message);
    if (degree_bound < 0) throw DomainError("degree bound must be nonnegative");

    EnumerationBounds b;
    try {
        b = compute_bounds(d, genus, num_marks, degree_bound);
    } catch (const DomainError&) {
        b.n_a = 0;
        b.vertex_bound = 1;
        b.edge_bound = 0;
        b.weight_bound = 0;
    }
    int dmax = 0;
    for (const Face& f : s.base.faces) dmax = std::max(dmax, (int)f.size() - 1);
    Int walls = b.edge_bound * nbhd_detail::crossings_per_edge(s.nu, dmax);

    EnumerationParams p;
    p.genus = genus;
    p.num_marks = num_marks;
    p.degree_bound = degree_bound;
    p.type_a_cap = b.n_a + walls;
    p.leaf_cap = b.n_a + 2 * Int(genus);
    // a leaf is never a wall vertex: its sigma is one nonzero weight lift,
    // and the lattice matrix is injective on vectors supported in one face
    p.min_leaf_degree = b.omega_min;
    Int n0 = b.n_a + Int(genus) + Int(num_marks) + walls;
    Int vb = 3 * n0 + 2 * Int(genus) - 2;
    p.vertex_bound = vb > 1 ? vb : Int(1);
    p.edge_bound = p.vertex_bound + Int(genus) - 1;
    // projected degrees are integer multiples of base density entries
    p.degree_scale = degree_scale_for(d, degree_bound);

    std::vector<CombinatorialType> all =
        enumerate_with(s.fine, p, fine_hooks(s, d, b.weight_bound, p.degree_scale));
    std::vector<CombinatorialType> out;
    for (const CombinatorialType& t : all)
        if (precedes(s.fine, datum.anchor, t)) out.push_back(t);
    return out;
}

// Membership of the basic neighborhood U(datum): refine the curve into the
// fine complex and ask whether the anchor precedes its type.
inline bool in_U(const SubdivisionDatum& datum, const ParamTropCurve& k, int genus,
                 int num_marks, const Rat& degree_bound, const SimpleDensity& d) {
    const Subdivision& s = datum.subdivision;
    ViolationReport rep = validate_curve(s.base, k);
    if (!rep.ok) throw DomainError(rep.message);
    ParamTropCurve ks = simplify(k);
    CombinatorialType t = type_of(s.base, ks);
    if (clemens::genus(t) != genus || (int)t.marks.size() != num_marks)
        throw DomainError("not in moduli space");
    DegreeReport dr = degree(s.base, d, t);
    ExtRat bound{degree_bound};
    if (bound < dr.total) throw DomainError("not in moduli space");

    ParamTropCurve fine = refine_curve(s, ks);
    CombinatorialType fine_type = type_of(s.fine, fine);
    return precedes(s.fine, datum.anchor, fine_type);
}

}  // namespace clemens
