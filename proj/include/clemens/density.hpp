#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "clemens/complex.hpp"
#include "clemens/rational.hpp"

namespace clemens {

// Density data: one positive (possibly infinite) value per pair (face I,
// direction j in link_set(I)). Monotone under face inclusion: bigger faces
// carry bigger-or-equal values wherever both are defined.
struct SimpleDensity {
    std::map<std::pair<Face, int>, ExtRat> entries;

    bool has(const Face& I, int j) const { return entries.count({I, j}) > 0; }

    const ExtRat& at(const Face& I, int j) const {
        auto it = entries.find({I, j});
        if (it == entries.end()) {
            std::ostringstream os;
            os << "density incomplete: no entry for (" << face_key(I) << ", " << j << ")";
            throw DomainError(os.str());
        }
        return it->second;
    }
};

inline ViolationReport validate_density(const ClemensComplex& c, const SimpleDensity& d) {
    // Extraneous or malformed entries first.
    for (const auto& [key, value] : d.entries) {
        const auto& [I, j] = key;
        if (!c.is_face(I))
            return {false, "density entry for non-face " + face_to_string(c, I)};
        Face J = link_set(c, I);
        bool in_link = std::binary_search(J.begin(), J.end(), j);
        if (!in_link) {
            std::ostringstream os;
            os << "density entry (" << face_to_string(c, I) << ", " << j
               << ") outside link set";
            return {false, os.str()};
        }
        if (value.is_finite() && value.value <= 0) {
            std::ostringstream os;
            os << "density entry (" << face_to_string(c, I) << ", " << j << ") not positive";
            return {false, os.str()};
        }
    }
    // Completeness: every face needs every link direction.
    for (const auto& I : c.faces) {
        Face J = link_set(c, I);
        for (int j : J) {
            if (!d.has(I, j)) {
                std::ostringstream os;
                os << "density incomplete: missing entry (" << face_to_string(c, I) << ", " << j
                   << ")";
                return {false, os.str()};
            }
        }
    }
    // Monotonicity: omega_{I,j} >= omega_{I',j} whenever I' is a subface of I
    // and j lies in link_set(I) (which is contained in link_set(I')).
    for (const auto& I : c.faces) {
        Face J = link_set(c, I);
        for (const auto& Isub : c.faces) {
            if (Isub == I || !face_subset(Isub, I)) continue;
            for (int j : J) {
                const ExtRat& big = d.at(I, j);
                const ExtRat& small = d.at(Isub, j);
                if (big < small) {
                    std::ostringstream os;
                    os << "density not monotone: (" << face_to_string(c, I) << ", " << j
                       << ") < (" << face_to_string(c, Isub) << ", " << j << ")";
                    return {false, os.str()};
                }
            }
        }
    }
    return {true, ""};
}

// Smallest finite density value, if any entry is finite.
inline std::optional<Rat> omega_min(const SimpleDensity& d) {
    std::optional<Rat> best;
    for (const auto& [key, value] : d.entries) {
        if (!value.is_finite()) continue;
        if (!best || value.value < *best) best = value.value;
    }
    return best;
}

// Local degree of an integer vector sigma at a face I:
//   max over j in link_set(I) of omega_{I,j} * |sigma^j|,  with inf * 0 = 0.
// sigma must vanish outside link_set(I).
inline ExtRat local_degree(const ClemensComplex& c, const SimpleDensity& d, const Face& I,
                           const std::vector<Int>& sigma) {
    if ((int)sigma.size() != c.num_vertices())
        throw DomainError("local_degree: sigma has wrong dimension");
    Face J = link_set(c, I);
    for (int i = 0; i < c.num_vertices(); ++i) {
        if (sigma[i] != 0 && !std::binary_search(J.begin(), J.end(), i)) {
            std::ostringstream os;
            os << "sigma outside J: component " << c.vertex_names[i] << " nonzero at face "
               << face_to_string(c, I);
            throw DomainError(os.str());
        }
    }
    ExtRat best(Rat(0));
    for (int j : J) {
        ExtRat term = d.at(I, j).scaled_by_abs(sigma[j]);
        if (best < term) best = term;
    }
    return best;
}

// One dual-cone generator attached to a face: its pairing numbers with the
// boundary divisors (indexed by complex vertices) and its positive pairing
// with the chosen ample class.
struct ConeGenerator {
    std::vector<Int> pairings;
    Rat value;
};

struct ConeData {
    std::map<Face, std::vector<ConeGenerator>> generators;
};

// Density induced by cone data: omega_{I,j} is the minimum ample value over
// the face's generators pairing to exactly 1 with divisor j; +infinity when
// no generator does. The result must be a valid simple density, otherwise the
// cone data is inconsistent.
inline SimpleDensity induced_density(const ClemensComplex& c, const ConeData& data) {
    SimpleDensity d;
    for (const auto& I : c.faces) {
        auto it = data.generators.find(I);
        if (it == data.generators.end() || it->second.empty())
            throw DomainError("induced_density: face " + face_to_string(c, I) +
                              " has no generators");
        for (const auto& gen : it->second) {
            if ((int)gen.pairings.size() != c.num_vertices())
                throw DomainError("induced_density: generator pairing vector has wrong size");
            if (gen.value <= 0)
                throw DomainError("induced_density: nonpositive ample pairing value");
        }
        Face J = link_set(c, I);
        for (int j : J) {
            ExtRat entry = ExtRat::inf();
            for (const auto& gen : it->second) {
                if (gen.pairings[j] == 1) {
                    ExtRat v(gen.value);
                    if (v < entry) entry = v;
                }
            }
            d.entries[{I, j}] = entry;
        }
    }
    ViolationReport rep = validate_density(c, d);
    if (!rep.ok) throw DomainError("inconsistent cone data: " + rep.message);
    return d;
}

}  // namespace clemens
