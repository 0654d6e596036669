#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clemens/complex.hpp"
#include "clemens/rational.hpp"

// Exact rational linear feasibility via Fourier-Motzkin elimination.
// Strict inequalities are first-class: eliminating a variable between a
// strict and a non-strict bound yields a strict bound, so open polyhedra
// (relative interiors of strata) are decided exactly, with a rational
// witness point reconstructed by back-substitution.

namespace clemens {

enum class Rel { Eq, Le, Lt };

struct Constraint {
    std::vector<Rat> a;  // coefficient per variable
    Rel rel = Rel::Le;
    Rat b{};

    bool evaluate(const std::vector<Rat>& x) const {
        Rat lhs = 0;
        for (size_t i = 0; i < a.size(); ++i) lhs += a[i] * x[i];
        switch (rel) {
            case Rel::Eq: return lhs == b;
            case Rel::Le: return lhs <= b;
            case Rel::Lt: return lhs < b;
        }
        return false;
    }
};

struct Polyhedron {
    int num_vars = 0;
    std::vector<Constraint> rows;
    std::vector<std::string> var_names;  // optional; sized num_vars when present

    static Polyhedron empty_canonical(int num_vars = 0) {
        Polyhedron p;
        p.num_vars = num_vars;
        Constraint c;
        c.a.assign(static_cast<size_t>(num_vars), Rat(0));
        c.rel = Rel::Lt;
        c.b = 0;  // 0 < 0, infeasible by construction
        p.rows.push_back(std::move(c));
        return p;
    }
};

struct LpResult {
    bool feasible = false;
    std::vector<Rat> witness;  // sized num_vars when feasible
    int dimension = -1;        // affine dimension of the closure when feasible
};

namespace fm_detail {

// Scale a row by a positive rational so coefficients become coprime integers.
inline void normalize_row(Constraint& c) {
    Int l = 1;
    for (const auto& q : c.a) l = lcm(l, denominator(q));
    l = lcm(l, denominator(c.b));
    Int g = 0;
    auto acc = [&g](const Rat& q, const Int& l2) {
        Int n = numerator(q) * (l2 / denominator(q));
        g = gcd(g, n);
        return n;
    };
    std::vector<Int> nums;
    nums.reserve(c.a.size());
    for (const auto& q : c.a) nums.push_back(acc(q, l));
    Int nb = acc(c.b, l);
    if (g == 0) g = 1;
    for (size_t i = 0; i < c.a.size(); ++i) c.a[i] = Rat(nums[i] / g);
    c.b = Rat(nb / g);
}

inline bool all_zero(const std::vector<Rat>& a) {
    for (const auto& q : a)
        if (q != 0) return false;
    return true;
}

// true when the constant row 0 REL b holds
inline bool constant_row_ok(const Constraint& c) {
    switch (c.rel) {
        case Rel::Eq: return c.b == 0;
        case Rel::Le: return c.b >= 0;
        case Rel::Lt: return c.b > 0;
    }
    return false;
}

struct Elimination {
    int var = -1;
    bool gauss = false;        // eliminated through an equality row
    Constraint gauss_row;      // defining equality when gauss
    std::vector<Constraint> snapshot;  // rows mentioning var at this step (FM only)
};

// Keep only the tightest row per normal vector; drop satisfied constant rows.
// Returns false on a contradictory constant row.
inline bool compact(std::vector<Constraint>& rows) {
    std::map<std::vector<std::string>, size_t> best;  // key: normalized coeffs
    std::vector<Constraint> out;
    for (auto& r : rows) {
        normalize_row(r);
        if (all_zero(r.a)) {
            if (!constant_row_ok(r)) return false;
            continue;
        }
        if (r.rel == Rel::Eq) {  // equalities are not subsumed against inequalities
            out.push_back(r);
            continue;
        }
        std::vector<std::string> key;
        key.reserve(r.a.size());
        for (const auto& q : r.a) key.push_back(numerator(q).str());
        auto it = best.find(key);
        if (it == best.end()) {
            best[key] = out.size();
            out.push_back(r);
        } else {
            Constraint& prev = out[it->second];
            bool replace = r.b < prev.b || (r.b == prev.b && r.rel == Rel::Lt);
            if (replace) prev = r;
        }
    }
    rows = std::move(out);
    return true;
}

struct FmRun {
    bool feasible = false;
    std::vector<Elimination> steps;  // chronological
};

constexpr size_t kRowCap = 200000;

// Eliminate the given variables (all of them when keep < 0 selects none to keep).
inline FmRun run_elimination(std::vector<Constraint> rows, int num_vars, int keep_var,
                             std::vector<Constraint>* final_rows) {
    FmRun run;
    if (!compact(rows)) return run;

    std::vector<bool> done(static_cast<size_t>(num_vars), false);
    if (keep_var >= 0) done[static_cast<size_t>(keep_var)] = true;

    // Gauss phase: substitute equalities away.
    for (;;) {
        int row_idx = -1, pivot = -1;
        for (size_t i = 0; i < rows.size() && row_idx < 0; ++i) {
            if (rows[i].rel != Rel::Eq) continue;
            for (int v = 0; v < num_vars; ++v) {
                if (!done[static_cast<size_t>(v)] && rows[i].a[static_cast<size_t>(v)] != 0) {
                    row_idx = static_cast<int>(i);
                    pivot = v;
                    break;
                }
            }
        }
        if (row_idx < 0) break;
        Constraint def = rows[static_cast<size_t>(row_idx)];
        rows.erase(rows.begin() + row_idx);
        const Rat& piv = def.a[static_cast<size_t>(pivot)];
        for (auto& r : rows) {
            const Rat& c = r.a[static_cast<size_t>(pivot)];
            if (c == 0) continue;
            Rat f = c / piv;
            for (int v = 0; v < num_vars; ++v)
                r.a[static_cast<size_t>(v)] -= f * def.a[static_cast<size_t>(v)];
            r.b -= f * def.b;
        }
        Elimination e;
        e.var = pivot;
        e.gauss = true;
        e.gauss_row = std::move(def);
        run.steps.push_back(std::move(e));
        done[static_cast<size_t>(pivot)] = true;
        if (!compact(rows)) return run;
    }

    // Any equality row left only involves kept variables (possible when keep_var
    // is set); treat it as two inequalities for the projection below.
    if (keep_var >= 0) {
        std::vector<Constraint> extra;
        for (auto& r : rows) {
            if (r.rel != Rel::Eq) continue;
            Constraint ge = r;
            for (auto& q : ge.a) q = -q;
            ge.b = -ge.b;
            ge.rel = Rel::Le;
            r.rel = Rel::Le;
            extra.push_back(std::move(ge));
        }
        rows.insert(rows.end(), extra.begin(), extra.end());
    }

    // FM phase.
    for (;;) {
        int best_var = -1;
        size_t best_cost = 0;
        for (int v = 0; v < num_vars; ++v) {
            if (done[static_cast<size_t>(v)]) continue;
            size_t lower = 0, upper = 0;
            for (const auto& r : rows) {
                const Rat& c = r.a[static_cast<size_t>(v)];
                if (c > 0) ++upper;
                else if (c < 0) ++lower;
            }
            size_t cost = lower * upper;
            if (best_var < 0 || cost < best_cost) {
                best_var = v;
                best_cost = cost;
            }
        }
        if (best_var < 0) break;

        Elimination e;
        e.var = best_var;
        std::vector<Constraint> keep, lower, upper;
        for (auto& r : rows) {
            const Rat& c = r.a[static_cast<size_t>(best_var)];
            if (c == 0) keep.push_back(std::move(r));
            else {
                e.snapshot.push_back(r);
                (c > 0 ? upper : lower).push_back(std::move(r));
            }
        }
        for (const auto& lo : lower) {
            for (const auto& up : upper) {
                Constraint nc;
                nc.a.assign(static_cast<size_t>(num_vars), Rat(0));
                const Rat& cl = lo.a[static_cast<size_t>(best_var)];  // < 0
                const Rat& cu = up.a[static_cast<size_t>(best_var)];  // > 0
                for (int v = 0; v < num_vars; ++v)
                    nc.a[static_cast<size_t>(v)] =
                        cu * lo.a[static_cast<size_t>(v)] - cl * up.a[static_cast<size_t>(v)];
                nc.b = cu * lo.b - cl * up.b;
                nc.rel = (lo.rel == Rel::Lt || up.rel == Rel::Lt) ? Rel::Lt : Rel::Le;
                keep.push_back(std::move(nc));
                if (keep.size() > kRowCap) throw InternalError("fourier-motzkin row cap exceeded");
            }
        }
        rows = std::move(keep);
        run.steps.push_back(std::move(e));
        done[static_cast<size_t>(best_var)] = true;
        if (!compact(rows)) return run;
    }

    run.feasible = true;
    if (final_rows) *final_rows = rows;
    return run;
}

struct Bound {
    bool present = false;
    Rat value{};
    bool strict = false;
};

inline void absorb_lower(Bound& lo, const Rat& v, bool strict) {
    if (!lo.present || v > lo.value || (v == lo.value && strict)) {
        lo.present = true;
        lo.value = v;
        lo.strict = strict;
    }
}

inline void absorb_upper(Bound& hi, const Rat& v, bool strict) {
    if (!hi.present || v < hi.value || (v == hi.value && strict)) {
        hi.present = true;
        hi.value = v;
        hi.strict = strict;
    }
}

inline Rat pick_in_interval(const Bound& lo, const Bound& hi) {
    if (lo.present && hi.present) {
        if (lo.value < hi.value) return (lo.value + hi.value) / 2;
        if (lo.value == hi.value && !lo.strict && !hi.strict) return lo.value;
        throw InternalError("empty interval during witness reconstruction");
    }
    if (lo.present) return lo.value + 1;
    if (hi.present) return hi.value - 1;
    return Rat(0);
}

}  // namespace fm_detail

// Feasibility plus exact witness; no dimension computation.
inline std::optional<std::vector<Rat>> fm_witness(const Polyhedron& p) {
    using namespace fm_detail;
    FmRun run = run_elimination(p.rows, p.num_vars, -1, nullptr);
    if (!run.feasible) return std::nullopt;

    std::vector<Rat> x(static_cast<size_t>(p.num_vars), Rat(0));
    for (auto it = run.steps.rbegin(); it != run.steps.rend(); ++it) {
        const Elimination& e = *it;
        if (e.gauss) {
            Rat rest = e.gauss_row.b;
            for (int v = 0; v < p.num_vars; ++v)
                if (v != e.var) rest -= e.gauss_row.a[static_cast<size_t>(v)] * x[static_cast<size_t>(v)];
            x[static_cast<size_t>(e.var)] = rest / e.gauss_row.a[static_cast<size_t>(e.var)];
        } else {
            Bound lo, hi;
            for (const auto& r : e.snapshot) {
                const Rat& c = r.a[static_cast<size_t>(e.var)];
                Rat rest = r.b;
                for (int v = 0; v < p.num_vars; ++v)
                    if (v != e.var) rest -= r.a[static_cast<size_t>(v)] * x[static_cast<size_t>(v)];
                Rat bound = rest / c;
                bool strict = r.rel == Rel::Lt;
                if (c > 0) absorb_upper(hi, bound, strict);
                else absorb_lower(lo, bound, strict);
            }
            x[static_cast<size_t>(e.var)] = pick_in_interval(lo, hi);
        }
    }
    for (const auto& r : p.rows)
        if (!r.evaluate(x)) throw InternalError("witness fails original constraint");
    return x;
}

inline bool fm_feasible(const Polyhedron& p) { return fm_witness(p).has_value(); }

// Full contract: feasibility, witness, and affine dimension of the closure.
// The closure of a non-empty system equals its non-strict relaxation; its
// affine hull is cut out by the explicit equalities plus every inequality
// whose strict version is unsatisfiable over the relaxation.
inline LpResult lp_feasibility(const Polyhedron& p) {
    LpResult res;
    auto w = fm_witness(p);
    if (!w) return res;
    res.feasible = true;
    res.witness = *w;

    Polyhedron closure = p;
    for (auto& r : closure.rows)
        if (r.rel == Rel::Lt) r.rel = Rel::Le;

    std::vector<std::vector<Rat>> eq_normals;
    for (const auto& r : closure.rows)
        if (r.rel == Rel::Eq) eq_normals.push_back(r.a);
    for (size_t i = 0; i < closure.rows.size(); ++i) {
        if (closure.rows[i].rel != Rel::Le) continue;
        Polyhedron probe = closure;
        probe.rows[i].rel = Rel::Lt;
        if (!fm_feasible(probe)) eq_normals.push_back(closure.rows[i].a);
    }

    // rank over Q
    int rank = 0;
    std::vector<std::vector<Rat>> basis;
    for (auto v : eq_normals) {
        for (const auto& b : basis) {
            int lead = -1;
            for (int j = 0; j < p.num_vars; ++j)
                if (b[static_cast<size_t>(j)] != 0) { lead = j; break; }
            if (lead < 0) continue;
            Rat f = v[static_cast<size_t>(lead)] / b[static_cast<size_t>(lead)];
            if (f != 0)
                for (int j = 0; j < p.num_vars; ++j) v[static_cast<size_t>(j)] -= f * b[static_cast<size_t>(j)];
        }
        if (!fm_detail::all_zero(v)) {
            basis.push_back(std::move(v));
            ++rank;
        }
    }
    res.dimension = p.num_vars - rank;
    return res;
}

struct Interval1D {
    bool feasible = false;
    fm_detail::Bound lo, hi;  // absent side means unbounded
};

// Project the solution set onto one variable; exact interval with strictness.
inline Interval1D fm_project(const Polyhedron& p, int var) {
    using namespace fm_detail;
    Interval1D out;
    std::vector<Constraint> final_rows;
    FmRun run = run_elimination(p.rows, p.num_vars, var, &final_rows);
    if (!run.feasible) return out;
    out.feasible = true;
    for (const auto& r : final_rows) {
        const Rat& c = r.a[static_cast<size_t>(var)];
        if (c == 0) continue;  // satisfied constant rows were compacted away
        Rat bound = r.b / c;
        bool strict = r.rel == Rel::Lt;
        if (c > 0) absorb_upper(out.hi, bound, strict);
        else absorb_lower(out.lo, bound, strict);
    }
    if (out.lo.present && out.hi.present) {
        if (out.lo.value > out.hi.value ||
            (out.lo.value == out.hi.value && (out.lo.strict || out.hi.strict))) {
            out.feasible = false;
        }
    }
    return out;
}

}  // namespace clemens
