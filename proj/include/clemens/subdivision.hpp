#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clemens/complex.hpp"
#include "clemens/curves.hpp"
#include "clemens/lp.hpp"

namespace clemens {

// A nu-fold subdivision of a base complex. Fine vertices carry exact
// positions in the base (barycentric, denominators dividing nu); the lattice
// column of a fine vertex is nu times its position, an integer vector.
struct Subdivision {
    ClemensComplex base;
    int nu = 1;
    ClemensComplex fine;
    std::vector<RationalPoint> pos;
    std::vector<std::vector<Int>> lattice;
};

namespace subdiv_detail {

// Exact solve of A x = rhs for small dense rational systems. Returns nullopt
// when inconsistent; throws when the solution is not unique (never the case
// for simplex vertex matrices).
inline std::optional<std::vector<Rat>> solve_unique(std::vector<std::vector<Rat>> a,
                                                    std::vector<Rat> rhs) {
    const int rows = (int)a.size();
    const int cols = rows == 0 ? 0 : (int)a[0].size();
    std::vector<int> pivot_col;
    int r = 0;
    for (int col = 0; col < cols && r < rows; ++col) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[r], a[piv]);
        std::swap(rhs[r], rhs[piv]);
        Rat lead = a[r][col];
        for (int j = 0; j < cols; ++j) a[r][j] /= lead;
        rhs[r] /= lead;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][col] == 0) continue;
            Rat f = a[i][col];
            for (int j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivot_col.push_back(col);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (rhs[i] != 0) return std::nullopt;
    if (r < cols) throw InternalError("underdetermined barycentric system");
    std::vector<Rat> x(cols, Rat(0));
    for (int i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
    return x;
}

// Barycentric coordinates of base point p on the given fine face, if p lies
// in its affine span.
inline std::optional<std::vector<Rat>> coords_on(const Subdivision& s, const Face& fine_face,
                                                 const RationalPoint& p) {
    const int m = s.base.num_vertices();
    std::vector<std::vector<Rat>> a(m + 1, std::vector<Rat>(fine_face.size(), Rat(0)));
    std::vector<Rat> rhs(m + 1, Rat(0));
    for (size_t j = 0; j < fine_face.size(); ++j) {
        for (int i = 0; i < m; ++i) a[i][j] = s.pos[fine_face[j]][i];
        a[m][j] = 1;
    }
    for (int i = 0; i < m; ++i) rhs[i] = p[i];
    rhs[m] = 1;
    return solve_unique(std::move(a), std::move(rhs));
}

// The unique integral zero-sum vector on the fine face projecting to b, if
// one exists.
inline std::optional<WeightVector> lift_on(const Subdivision& s, const Face& fine_face,
                                           const WeightVector& b, bool& integral) {
    const int m = s.base.num_vertices();
    integral = true;
    std::vector<std::vector<Rat>> a(m + 1, std::vector<Rat>(fine_face.size(), Rat(0)));
    std::vector<Rat> rhs(m + 1, Rat(0));
    for (size_t j = 0; j < fine_face.size(); ++j) {
        for (int i = 0; i < m; ++i) a[i][j] = Rat(s.lattice[fine_face[j]][i]);
        a[m][j] = 1;
    }
    for (int i = 0; i < m; ++i) rhs[i] = Rat(b[i]);
    rhs[m] = 0;
    auto x = solve_unique(std::move(a), std::move(rhs));
    if (!x) return std::nullopt;
    WeightVector w(s.fine.num_vertices(), Int(0));
    for (size_t j = 0; j < fine_face.size(); ++j) {
        if (denominator((*x)[j]) != 1) {
            integral = false;
            return std::nullopt;
        }
        w[fine_face[j]] = numerator((*x)[j]);
    }
    return w;
}

}  // namespace subdiv_detail

// Minimal base face containing a fine face, via position supports.
inline Face base_face_of(const Subdivision& s, const Face& fine_face) {
    Face out;
    for (int v : fine_face) out = face_union(out, support(s.pos[v]));
    return out;
}

// The fine face whose relative interior contains the base point, with the
// point's barycentric coordinates on it.
struct FineCarrier {
    Face face;
    std::vector<Rat> coords;
};

inline FineCarrier fine_carrier(const Subdivision& s, const RationalPoint& p) {
    check_point_shape(s.base, p);
    for (const Face& f : s.fine.faces) {
        auto x = subdiv_detail::coords_on(s, f, p);
        if (!x) continue;
        bool strict = true;
        for (const Rat& v : *x)
            if (v <= 0) {
                strict = false;
                break;
            }
        if (strict) return {f, *x};
    }
    throw DomainError("point not covered by the subdivision");
}

// Base point as a fine barycentric point.
inline RationalPoint fine_point(const Subdivision& s, const RationalPoint& p) {
    FineCarrier fc = fine_carrier(s, p);
    RationalPoint out(s.fine.num_vertices(), Rat(0));
    for (size_t j = 0; j < fc.face.size(); ++j) out[fc.face[j]] = fc.coords[j];
    return out;
}

inline RationalPoint project_point(const Subdivision& s, const RationalPoint& xbar) {
    check_point_shape(s.fine, xbar);
    RationalPoint p(s.base.num_vertices(), Rat(0));
    for (int v = 0; v < s.fine.num_vertices(); ++v)
        for (int i = 0; i < s.base.num_vertices(); ++i) p[i] += xbar[v] * s.pos[v][i];
    return p;
}

inline WeightVector project_weight(const Subdivision& s, const WeightVector& wbar) {
    if ((int)wbar.size() != s.fine.num_vertices())
        throw DomainError("fine weight dimension mismatch");
    WeightVector b(s.base.num_vertices(), Int(0));
    for (int v = 0; v < s.fine.num_vertices(); ++v) {
        if (wbar[v] == 0) continue;
        for (int i = 0; i < s.base.num_vertices(); ++i) b[i] += wbar[v] * s.lattice[v][i];
    }
    return b;
}

inline ViolationReport validate_subdivision(const Subdivision& s) {
    if (s.nu < 1) return {false, "nu must be positive"};
    ViolationReport base_ok = validate_complex(s.base);
    if (!base_ok.ok) return {false, "base complex invalid: " + base_ok.message};
    ViolationReport fine_ok = validate_complex(s.fine);
    if (!fine_ok.ok) return {false, "fine complex invalid: " + fine_ok.message};
    if ((int)s.pos.size() != s.fine.num_vertices() ||
        (int)s.lattice.size() != s.fine.num_vertices())
        return {false, "position table size mismatch"};

    const int m = s.base.num_vertices();
    for (int v = 0; v < s.fine.num_vertices(); ++v) {
        try {
            check_point_shape(s.base, s.pos[v]);
        } catch (const DomainError& e) {
            return {false, "fine vertex " + s.fine.vertex_names[v] + ": " + e.what()};
        }
        if ((int)s.lattice[v].size() != m) return {false, "lattice column size mismatch"};
        for (int i = 0; i < m; ++i) {
            Rat scaled = s.pos[v][i] * s.nu;
            if (denominator(scaled) != 1)
                return {false, "not in lattice: fine vertex " + s.fine.vertex_names[v]};
            if (Rat(s.lattice[v][i]) != scaled)
                return {false, "lattice column disagrees with position at fine vertex " +
                                   s.fine.vertex_names[v]};
        }
    }

    for (const Face& f : s.fine.faces) {
        Face bf = base_face_of(s, f);
        if (!s.base.is_face(bf))
            return {false,
                    "fine face not inside a base face: " + face_to_string(s.fine, f)};
    }

    // maximal fine faces must triangulate their base face unimodularly
    std::map<std::string, int> max_cells_per_face;
    for (const Face& f : s.fine.faces) {
        bool maximal = true;
        for (const Face& g : s.fine.faces)
            if (f != g && face_subset(f, g)) {
                maximal = false;
                break;
            }
        if (!maximal) continue;
        Face bf = base_face_of(s, f);
        if (f.size() != bf.size())
            return {false, "maximal fine simplex has wrong dimension: " +
                               face_to_string(s.fine, f)};
        const int d = (int)bf.size() - 1;
        if (d > 0) {
            // determinant of scaled edge vectors, coordinates bf[1..d]
            std::vector<std::vector<Rat>> mat(d, std::vector<Rat>(d, Rat(0)));
            for (int j = 1; j <= d; ++j)
                for (int k = 1; k <= d; ++k)
                    mat[j - 1][k - 1] =
                        Rat(s.lattice[f[j]][bf[k]] - s.lattice[f[0]][bf[k]]);
            Rat det = 1;
            for (int col = 0; col < d; ++col) {
                int piv = -1;
                for (int i = col; i < d; ++i)
                    if (mat[i][col] != 0) {
                        piv = i;
                        break;
                    }
                if (piv < 0) {
                    det = 0;
                    break;
                }
                if (piv != col) {
                    std::swap(mat[piv], mat[col]);
                    det = -det;
                }
                det *= mat[col][col];
                for (int i = col + 1; i < d; ++i) {
                    Rat fac = mat[i][col] / mat[col][col];
                    for (int j = col; j < d; ++j) mat[i][j] -= fac * mat[col][j];
                }
            }
            if (det != 1 && det != -1)
                return {false, "not unimodular: " + face_to_string(s.fine, f)};
        }
        max_cells_per_face[face_key(bf)] += 1;
    }
    // covering count: a unimodular subdivision of a d-face has nu^d cells
    for (const Face& bf : s.base.faces) {
        bool base_maximal = true;
        for (const Face& other : s.base.faces)
            if (bf != other && face_subset(bf, other)) {
                base_maximal = false;
                break;
            }
        if (!base_maximal) continue;
        Int expect = 1;
        for (size_t j = 1; j < bf.size(); ++j) expect *= s.nu;
        Int got = max_cells_per_face.count(face_key(bf)) ? max_cells_per_face[face_key(bf)]
                                                         : Int(0);
        if (got != expect)
            return {false, "wrong number of maximal cells in face " +
                               face_to_string(s.base, bf)};
    }
    return {true, ""};
}

// Standard nu-fold edgewise subdivision: fine vertices at all lattice points
// of faces, each d-face split into nu^d unimodular simplices.
inline Subdivision edgewise_subdivide(const ClemensComplex& c, int nu) {
    if (nu < 1) throw DomainError("nu must be positive");
    Subdivision s;
    s.base = c;
    s.nu = nu;
    const int m = c.num_vertices();

    // all lattice points: compositions of nu over the coordinates of a face
    std::map<std::vector<Int>, int> vertex_of;
    std::vector<std::vector<Int>> points;
    for (const Face& f : c.faces) {
        std::vector<Int> z(m, Int(0));
        std::function<void(size_t, int)> rec = [&](size_t fi, int left) {
            if (fi + 1 == f.size()) {
                z[f[fi]] = left;
                if (!vertex_of.count(z)) {
                    vertex_of[z] = 0;
                    points.push_back(z);
                }
                z[f[fi]] = 0;
                return;
            }
            for (int take = 0; take <= left; ++take) {
                z[f[fi]] = take;
                rec(fi + 1, left - take);
                z[f[fi]] = 0;
            }
        };
        rec(0, nu);
    }
    std::sort(points.begin(), points.end());
    for (int idx = 0; idx < (int)points.size(); ++idx) vertex_of[points[idx]] = idx;

    for (const auto& z : points) {
        s.lattice.push_back(z);
        RationalPoint p(m, Rat(0));
        for (int i = 0; i < m; ++i) p[i] = Rat(z[i], nu);
        s.pos.push_back(p);
        // name: plain base vertex, or the multiset of base vertices summing
        // to the point, joined by '+'
        std::string name;
        bool plain = false;
        for (int i = 0; i < m; ++i)
            if (z[i] == Int(nu)) {
                name = c.vertex_names[i];
                plain = true;
            }
        if (!plain) {
            bool first = true;
            for (int i = 0; i < m; ++i)
                for (Int t = 0; t < z[i]; ++t) {
                    if (!first) name += "+";
                    name += c.vertex_names[i];
                    first = false;
                }
        }
        s.fine.vertex_names.push_back(name);
    }

    // maximal cells per base face via the staircase chart
    std::set<Face> faces;
    for (const Face& f : c.faces) {
        const int d = (int)f.size() - 1;
        std::vector<Face> cells;
        if (d == 0) {
            std::vector<Int> z(m, Int(0));
            z[f[0]] = nu;
            cells.push_back({vertex_of[z]});
        } else {
            auto y_to_z = [&](const std::vector<int>& y) {
                std::vector<Int> z(m, Int(0));
                z[f[0]] = nu - y[0];
                for (int j = 1; j < d; ++j) z[f[j]] = y[j - 1] - y[j];
                z[f[d]] = y[d - 1];
                return z;
            };
            auto in_region = [&](const std::vector<int>& y) {
                if (y[0] > nu || y[d - 1] < 0) return false;
                for (int j = 0; j + 1 < d; ++j)
                    if (y[j] < y[j + 1]) return false;
                return true;
            };
            std::vector<int> corner(d, 0);
            std::function<void(int)> corners = [&](int idx) {
                if (idx == d) {
                    std::vector<int> perm(d);
                    for (int j = 0; j < d; ++j) perm[j] = j;
                    do {
                        std::vector<std::vector<int>> verts{corner};
                        for (int step = 0; step < d; ++step) {
                            auto next = verts.back();
                            next[perm[step]] += 1;
                            verts.push_back(next);
                        }
                        bool ok = true;
                        for (const auto& y : verts)
                            if (!in_region(y)) {
                                ok = false;
                                break;
                            }
                        if (ok) {
                            Face cell;
                            for (const auto& y : verts) cell.push_back(vertex_of[y_to_z(y)]);
                            std::sort(cell.begin(), cell.end());
                            cells.push_back(cell);
                        }
                    } while (std::next_permutation(perm.begin(), perm.end()));
                    return;
                }
                for (int v = 0; v < nu; ++v) {
                    corner[idx] = v;
                    corners(idx + 1);
                }
            };
            corners(0);
        }
        // downward closure
        for (const Face& cell : cells) {
            const int n = (int)cell.size();
            for (int mask = 1; mask < (1 << n); ++mask) {
                Face sub;
                for (int b = 0; b < n; ++b)
                    if (mask & (1 << b)) sub.push_back(cell[b]);
                faces.insert(sub);
            }
        }
    }
    s.fine.faces.assign(faces.begin(), faces.end());
    s.fine.normalize();
    return s;
}

// Projection of a fine curve to the base: positions evaluate, weights map
// through the lattice, removable direction-preserving vertices merge away.
inline ParamTropCurve project_curve(const Subdivision& s, const ParamTropCurve& kbar) {
    ParamTropCurve k;
    k.graph = kbar.graph;
    k.genus_label = kbar.genus_label;
    k.marks = kbar.marks;
    for (const auto& x : kbar.positions) k.positions.push_back(project_point(s, x));
    for (const auto& w : kbar.weight_at_u) k.weight_at_u.push_back(project_weight(s, w));
    return simplify(k);
}

// Refinement of a base curve into the fine complex: edges split where they
// cross fine walls, pieces carry the unique integral lifted weights,
// consecutive pieces with equal lifts merge.
inline ParamTropCurve refine_curve(const Subdivision& s, const ParamTropCurve& k) {
    ViolationReport rep = validate_curve(s.base, k);
    if (!rep.ok) throw DomainError(rep.message);
    const int nv = k.graph.num_vertices;

    ParamTropCurve out;
    out.graph.num_vertices = nv;
    out.genus_label = k.genus_label;
    out.marks = k.marks;
    out.positions.assign(nv, RationalPoint());
    for (int v = 0; v < nv; ++v) out.positions[v] = fine_point(s, k.positions[v]);

    for (int ei = 0; ei < (int)k.graph.edges.size(); ++ei) {
        const int u = k.graph.edges[ei].u;
        const int v = k.graph.edges[ei].v;
        const WeightVector& w = k.weight_at_u[ei];
        const RationalPoint& pu = k.positions[u];
        const RationalPoint& pv = k.positions[v];

        // breakpoints: endpoints of the segment's residence interval in each
        // maximal fine cell of the ambient base face
        Face ambient = face_union(support(pu), support(pv));
        std::set<Rat> cuts;
        for (const Face& cell : s.fine.faces) {
            Face bf = base_face_of(s, cell);
            if (!face_subset(bf, ambient)) continue;
            // interval of t with pu + t(pv-pu) in the closed cell
            const int m = s.base.num_vertices();
            const int k_sz = (int)cell.size();
            Polyhedron poly;
            poly.num_vars = 1 + k_sz;  // t, lambdas
            for (int i = 0; i < m; ++i) {
                Constraint row;
                row.a.assign(poly.num_vars, Rat(0));
                row.a[0] = pu[i] - pv[i];
                for (int j = 0; j < k_sz; ++j) row.a[1 + j] = s.pos[cell[j]][i];
                row.rel = Rel::Eq;
                row.b = pu[i];
                poly.rows.push_back(row);
            }
            Constraint sum_row;
            sum_row.a.assign(poly.num_vars, Rat(0));
            for (int j = 0; j < k_sz; ++j) sum_row.a[1 + j] = 1;
            sum_row.rel = Rel::Eq;
            sum_row.b = 1;
            poly.rows.push_back(sum_row);
            for (int j = 0; j < k_sz; ++j) {
                Constraint nn;
                nn.a.assign(poly.num_vars, Rat(0));
                nn.a[1 + j] = -1;
                nn.rel = Rel::Le;
                nn.b = 0;
                poly.rows.push_back(nn);
            }
            for (int sgn = 0; sgn < 2; ++sgn) {
                Constraint tb;
                tb.a.assign(poly.num_vars, Rat(0));
                tb.a[0] = sgn ? Rat(1) : Rat(-1);
                tb.rel = Rel::Le;
                tb.b = sgn ? Rat(1) : Rat(0);
                poly.rows.push_back(tb);
            }
            Interval1D iv = fm_project(poly, 0);
            if (!iv.feasible) continue;
            if (iv.lo.present && iv.lo.value > 0 && iv.lo.value < 1) cuts.insert(iv.lo.value);
            if (iv.hi.present && iv.hi.value > 0 && iv.hi.value < 1) cuts.insert(iv.hi.value);
        }

        std::vector<Rat> ts{Rat(0)};
        for (const Rat& t : cuts) ts.push_back(t);
        ts.push_back(Rat(1));

        // carrier and lifted weight per piece
        std::vector<Face> piece_face(ts.size() - 1);
        std::vector<WeightVector> piece_w(ts.size() - 1);
        for (size_t pi = 0; pi + 1 < ts.size(); ++pi) {
            Rat tm = (ts[pi] + ts[pi + 1]) / 2;
            RationalPoint mid(s.base.num_vertices(), Rat(0));
            for (int i = 0; i < s.base.num_vertices(); ++i)
                mid[i] = pu[i] + tm * (pv[i] - pu[i]);
            FineCarrier fc = fine_carrier(s, mid);
            bool integral = true;
            auto lift = subdiv_detail::lift_on(s, fc.face, w, integral);
            if (!lift) {
                if (!integral) throw DomainError("non-integral lift");
                throw InternalError("refinement direction outside carrier");
            }
            piece_face[pi] = fc.face;
            piece_w[pi] = *lift;
        }

        // merge equal consecutive lifts, then emit chain vertices and edges
        std::vector<size_t> kept_cuts;  // indices into ts, strictly inside
        for (size_t pi = 0; pi + 1 < piece_w.size(); ++pi)
            if (piece_w[pi] != piece_w[pi + 1]) kept_cuts.push_back(pi + 1);
        int prev = u;
        for (size_t ci = 0; ci <= kept_cuts.size(); ++ci) {
            int nxt;
            WeightVector wseg;
            if (ci < kept_cuts.size()) {
                Rat t = ts[kept_cuts[ci]];
                RationalPoint bp(s.base.num_vertices(), Rat(0));
                for (int i = 0; i < s.base.num_vertices(); ++i)
                    bp[i] = pu[i] + t * (pv[i] - pu[i]);
                nxt = out.graph.num_vertices;
                out.graph.num_vertices += 1;
                out.positions.push_back(fine_point(s, bp));
                out.genus_label.push_back(0);
            } else {
                nxt = v;
            }
            // weight of the piece right before this cut (pieces between
            // kept cuts share their lift)
            size_t piece_idx = ci < kept_cuts.size() ? kept_cuts[ci] - 1 : piece_w.size() - 1;
            wseg = piece_w[piece_idx];
            out.graph.edges.push_back({prev, nxt});
            out.weight_at_u.push_back(wseg);
            prev = nxt;
        }
    }

    ViolationReport check = validate_curve(s.fine, out);
    if (!check.ok) throw InternalError("refined curve invalid: " + check.message);
    return out;
}

}  // namespace clemens
