#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "clemens/complex.hpp"
#include "clemens/curves.hpp"
#include "clemens/lp.hpp"

namespace clemens {

// User-supplied generators of the effective cycle pairing image, per face.
// Verdicts are always relative to this list.
struct CycleClassData {
    std::map<Face, std::vector<WeightVector>> generators;
};

inline ViolationReport validate_cycle_data(const ClemensComplex& c, const CycleClassData& data) {
    for (const auto& [face, gens] : data.generators) {
        if (!c.is_face(face))
            return {false, "cycle data for non-face: " + face_to_string(c, face)};
        Face J = link_set(c, face);
        for (const WeightVector& g : gens) {
            if ((int)g.size() != c.num_vertices())
                return {false, "generator dimension mismatch at face " + face_to_string(c, face)};
            Int sum = 0;
            for (int j = 0; j < (int)g.size(); ++j) {
                if (g[j] == 0) continue;
                if (!std::binary_search(J.begin(), J.end(), j))
                    return {false, "generator has nonzero component outside link set at face " +
                                       face_to_string(c, face)};
                sum += g[j];
            }
            if (sum != 0)
                return {false, "generator components do not sum to zero at face " +
                                   face_to_string(c, face)};
        }
    }
    return {true, ""};
}

enum class BalanceVerdict { Balanced, Unbalanced, Unknown };

struct BalanceResult {
    BalanceVerdict verdict = BalanceVerdict::Unknown;
    std::vector<Int> certificate;  // nonempty iff Balanced with gens present
};

inline Int default_coeff_bound(const WeightVector& sigma) {
    Int mx = 0;
    for (const Int& x : sigma) {
        Int a = x < 0 ? -x : x;
        if (a > mx) mx = a;
    }
    return 16 * mx;
}

// Membership of sigma in the monoid generated by gens. Balanced comes with
// an exact nonnegative integer certificate; Unbalanced is refuted by the
// rational relaxation; Unknown means the relaxation is feasible but no
// certificate with coefficients <= coeff_bound exists.
inline BalanceResult is_balanced_at(const WeightVector& sigma,
                                    const std::vector<WeightVector>& gens,
                                    const Int& coeff_bound) {
    const int dim = (int)sigma.size();
    for (const auto& g : gens)
        if ((int)g.size() != dim) throw DomainError("generator dimension mismatch");
    const int K = (int)gens.size();

    if (is_zero(sigma)) return {BalanceVerdict::Balanced, std::vector<Int>(K, Int(0))};

    // rational relaxation: c >= 0 with sum c_k gen_k = sigma
    Polyhedron relax;
    relax.num_vars = K;
    for (int k = 0; k < K; ++k) {
        Constraint row;
        row.a.assign(K, Rat(0));
        row.a[k] = -1;
        row.rel = Rel::Le;
        row.b = 0;
        relax.rows.push_back(row);
    }
    for (int i = 0; i < dim; ++i) {
        Constraint row;
        row.a.assign(K, Rat(0));
        for (int k = 0; k < K; ++k) row.a[k] = Rat(gens[k][i]);
        row.rel = Rel::Eq;
        row.b = Rat(sigma[i]);
        relax.rows.push_back(row);
    }
    if (!fm_feasible(relax)) return {BalanceVerdict::Unbalanced, {}};
    if (coeff_bound <= 0) return {BalanceVerdict::Unknown, {}};

    // bounded integer search, pruned by the reachable interval of every
    // coordinate over the remaining coefficients
    std::vector<std::vector<Int>> suf_lo(K + 1, std::vector<Int>(dim, Int(0)));
    std::vector<std::vector<Int>> suf_hi(K + 1, std::vector<Int>(dim, Int(0)));
    for (int k = K - 1; k >= 0; --k)
        for (int i = 0; i < dim; ++i) {
            Int span = coeff_bound * gens[k][i];
            suf_lo[k][i] = suf_lo[k + 1][i] + (span < 0 ? span : Int(0));
            suf_hi[k][i] = suf_hi[k + 1][i] + (span > 0 ? span : Int(0));
        }

    std::vector<Int> need(sigma.begin(), sigma.end());
    std::vector<Int> cert(K, Int(0));
    std::function<bool(int)> dfs = [&](int k) -> bool {
        bool all_zero = true;
        for (int i = 0; i < dim; ++i) {
            if (need[i] < suf_lo[k][i] || need[i] > suf_hi[k][i]) return false;
            if (need[i] != 0) all_zero = false;
        }
        if (k == K) return all_zero;
        for (Int ck = 0; ck <= coeff_bound; ++ck) {
            cert[k] = ck;
            if (dfs(k + 1)) return true;
            for (int i = 0; i < dim; ++i) need[i] -= gens[k][i];
        }
        for (int i = 0; i < dim; ++i) need[i] += (coeff_bound + 1) * gens[k][i];
        cert[k] = 0;
        return false;
    };
    if (dfs(0)) return {BalanceVerdict::Balanced, cert};
    return {BalanceVerdict::Unknown, {}};
}

// Per-vertex balancing verdicts for a combinatorial type. coeff_bound <= 0
// selects the per-vertex default 16 * max|sigma^i|.
inline std::vector<BalanceResult> check_curve_balancing(const ClemensComplex& c,
                                                        const CombinatorialType& t,
                                                        const CycleClassData& data,
                                                        const Int& coeff_bound = 0) {
    std::vector<BalanceResult> out;
    for (int v = 0; v < t.graph.num_vertices; ++v) {
        const Face& I = t.face_label[v];
        auto it = data.generators.find(I);
        if (it == data.generators.end())
            throw DomainError("missing face data: " + face_to_string(c, I));
        WeightVector s = sigma(t, v, c.num_vertices());
        Int bound = coeff_bound > 0 ? coeff_bound : default_coeff_bound(s);
        out.push_back(is_balanced_at(s, it->second, bound));
    }
    return out;
}

inline std::vector<BalanceResult> check_curve_balancing(const ClemensComplex& c,
                                                        const ParamTropCurve& k,
                                                        const CycleClassData& data,
                                                        const Int& coeff_bound = 0) {
    return check_curve_balancing(c, type_of(c, k), data, coeff_bound);
}

}  // namespace clemens
