#pragma once

#include "clemens/complex.hpp"
#include "clemens/curves.hpp"
#include "clemens/density.hpp"

// Shared test fixtures: the three standard complexes, the all-ones density,
// and a small stock of hand-checked curves.

namespace fixtures {

inline clemens::ClemensComplex fix_seg() {
    clemens::ClemensComplex c;
    c.vertex_names = {"0", "1"};
    c.faces = {{0}, {1}, {0, 1}};
    return c;
}

inline clemens::ClemensComplex fix_path2() {
    clemens::ClemensComplex c;
    c.vertex_names = {"0", "1", "2"};
    c.faces = {{0}, {1}, {2}, {0, 1}, {1, 2}};
    return c;
}

inline clemens::ClemensComplex fix_tri() {
    clemens::ClemensComplex c;
    c.vertex_names = {"0", "1", "2"};
    c.faces = {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    return c;
}

// Every admissible entry equal to 1.
inline clemens::SimpleDensity omega1(const clemens::ClemensComplex& c) {
    clemens::SimpleDensity d;
    for (const clemens::Face& I : c.faces)
        for (int j : clemens::link_set(c, I)) d.entries[{I, j}] = clemens::ExtRat(clemens::Rat(1));
    return d;
}

// One edge spanning the whole segment of fix_seg, weight (-1, 1) at the
// vertex sitting on "0". Degree 2 under omega1.
inline clemens::ParamTropCurve seg_full_curve() {
    clemens::ParamTropCurve k;
    k.graph.num_vertices = 2;
    k.graph.edges = {{0, 1}};
    k.genus_label = {0, 0};
    k.positions = {{clemens::Rat(1), clemens::Rat(0)}, {clemens::Rat(0), clemens::Rat(1)}};
    k.weight_at_u = {{clemens::Int(-1), clemens::Int(1)}};
    return k;
}

// An edge strictly inside the open segment of fix_seg.
inline clemens::ParamTropCurve seg_interior_curve() {
    clemens::ParamTropCurve k;
    k.graph.num_vertices = 2;
    k.graph.edges = {{0, 1}};
    k.genus_label = {0, 0};
    k.positions = {{clemens::Rat(3, 4), clemens::Rat(1, 4)},
                   {clemens::Rat(1, 4), clemens::Rat(3, 4)}};
    k.weight_at_u = {{clemens::Int(-1), clemens::Int(1)}};
    return k;
}

inline clemens::ParamTropCurve seg_point_curve(const clemens::Rat& x0) {
    clemens::ParamTropCurve k;
    k.graph.num_vertices = 1;
    k.genus_label = {0};
    k.positions = {{x0, clemens::Rat(1) - x0}};
    return k;
}

// The interior one-edge type of fix_seg: both labels {0,1}, weight (-1, 1).
inline clemens::CombinatorialType seg_interior_type() {
    clemens::CombinatorialType t;
    t.graph.num_vertices = 2;
    t.graph.edges = {{0, 1}};
    t.genus_label = {0, 0};
    t.face_label = {{0, 1}, {0, 1}};
    t.weight_at_u = {{clemens::Int(-1), clemens::Int(1)}};
    return t;
}

}  // namespace fixtures
