#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clemens/rational.hpp"

namespace clemens {

// A face is a sorted list of distinct vertex indices.
using Face = std::vector<int>;

inline Face sorted_face(Face f) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
}

inline bool face_subset(const Face& a, const Face& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline Face face_union(const Face& a, const Face& b) {
    Face out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline Face face_intersect(const Face& a, const Face& b) {
    Face out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

struct ViolationReport {
    bool ok = true;
    std::string message;  // first violation found, empty when ok
};

// Abstract simplicial complex on named vertices, realized inside the unit
// simplex of R^n: every face {i0,...,id} is the simplex conv{e_i0,...,e_id},
// so points carry barycentric coordinates that sum to 1.
struct ClemensComplex {
    std::vector<std::string> vertex_names;
    std::vector<Face> faces;  // each sorted; the set is expected downward closed

    int num_vertices() const { return static_cast<int>(vertex_names.size()); }

    std::optional<int> vertex_index(const std::string& name) const {
        for (int i = 0; i < num_vertices(); ++i)
            if (vertex_names[i] == name) return i;
        return std::nullopt;
    }

    bool is_face(const Face& f) const {
        return std::find(faces.begin(), faces.end(), f) != faces.end();
    }

    // Canonical face order: by dimension, then lexicographic.
    void normalize() {
        for (auto& f : faces) f = sorted_face(f);
        std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        });
        faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    }
};

inline ViolationReport validate_complex(const ClemensComplex& c) {
    std::set<std::string> names(c.vertex_names.begin(), c.vertex_names.end());
    if (static_cast<int>(names.size()) != c.num_vertices())
        return {false, "duplicate vertex names"};
    std::set<Face> fs(c.faces.begin(), c.faces.end());
    if (fs.size() != c.faces.size()) return {false, "duplicate faces"};
    for (const auto& f : c.faces) {
        if (f.empty()) return {false, "empty face"};
        if (!std::is_sorted(f.begin(), f.end())) return {false, "unsorted face"};
        for (int v : f)
            if (v < 0 || v >= c.num_vertices()) return {false, "face references unknown vertex"};
        if (std::adjacent_find(f.begin(), f.end()) != f.end())
            return {false, "repeated vertex in face"};
        // downward closure: every non-empty proper subset must be present
        if (f.size() > 1) {
            for (size_t skip = 0; skip < f.size(); ++skip) {
                Face sub;
                for (size_t i = 0; i < f.size(); ++i)
                    if (i != skip) sub.push_back(f[i]);
                if (!fs.count(sub)) return {false, "not downward closed"};
            }
        }
    }
    for (int v = 0; v < c.num_vertices(); ++v) {
        if (!fs.count(Face{v})) return {false, "vertex missing as a face"};
    }
    return {true, ""};
}

// Barycentric point: coordinates over all complex vertices, >= 0, summing to 1.
using RationalPoint = std::vector<Rat>;

inline void check_point_shape(const ClemensComplex& c, const RationalPoint& p) {
    if (static_cast<int>(p.size()) != c.num_vertices())
        throw DomainError("point has wrong coordinate count");
    Rat sum = 0;
    for (const auto& x : p) {
        if (x < 0) throw DomainError("point has negative coordinate");
        sum += x;
    }
    if (sum != 1) throw DomainError("point coordinates do not sum to 1");
}

inline Face support(const RationalPoint& p) {
    Face s;
    for (int i = 0; i < static_cast<int>(p.size()); ++i)
        if (p[i] != 0) s.push_back(i);
    return s;
}

// Minimal face whose relative interior contains p.
inline Face carrier(const ClemensComplex& c, const RationalPoint& p) {
    check_point_shape(c, p);
    Face s = support(p);
    if (!c.is_face(s)) throw DomainError("not in complex");
    return s;
}

// J_I: vertices j such that I u {j} is again a face. Contains I itself.
inline Face link_set(const ClemensComplex& c, const Face& I) {
    if (!c.is_face(I)) throw DomainError("not a face");
    Face out;
    for (int j = 0; j < c.num_vertices(); ++j) {
        Face f = face_union(I, Face{j});
        if (c.is_face(f)) out.push_back(j);
    }
    return out;
}

inline std::string face_to_string(const ClemensComplex& c, const Face& f) {
    std::string s = "{";
    for (size_t i = 0; i < f.size(); ++i) {
        if (i) s += ",";
        s += c.vertex_names[f[i]];
    }
    return s + "}";
}

// Name-independent face key (vertex indices); used for canonical forms and
// cache keys.
inline std::string face_key(const Face& f) {
    std::string s = "{";
    for (size_t i = 0; i < f.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(f[i]);
    }
    return s + "}";
}

}  // namespace clemens
