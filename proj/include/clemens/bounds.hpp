#pragma once

#include <algorithm>

#include "clemens/density.hpp"
#include "clemens/rational.hpp"

namespace clemens {

// Finiteness bounds for the enumeration of types of degree at most A with
// genus g and n marks. All quantities are integers; degrees themselves are
// rational.
struct EnumerationBounds {
    Int n_a = 0;          // bound on the total count of path pieces
    Int n0 = 0;           // n_a + g + n
    Int vertex_bound = 1;
    Int edge_bound = 0;
    Int weight_bound = 0;  // per-coordinate bound on edge weights
    Rat omega_min;         // smallest finite density entry
};

inline EnumerationBounds compute_bounds(const SimpleDensity& d, int genus, int num_marks,
                                        const Rat& degree_bound) {
    if (degree_bound < 0) throw DomainError("degree bound must be nonnegative");
    auto omin = omega_min(d);
    if (!omin) throw DomainError("no finite density entry");
    EnumerationBounds b;
    b.omega_min = *omin;
    // floor(A / omega_min)
    Rat q = degree_bound / *omin;
    b.n_a = numerator(q) / denominator(q);
    if (q < 0 && b.n_a * denominator(q) != numerator(q)) b.n_a -= 1;
    b.n0 = b.n_a + genus + num_marks;
    Int vb = 3 * b.n0 + 2 * genus - 2;
    b.vertex_bound = vb > 1 ? vb : Int(1);
    b.edge_bound = b.vertex_bound + genus - 1;
    b.weight_bound = b.n_a;
    return b;
}

}  // namespace clemens
