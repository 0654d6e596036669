#pragma once

#include <optional>
#include <vector>

#include "clemens/rational.hpp"

namespace clemens {

// One monomial of a Laurent-series leading-term analysis: exponent m with
// valuation v. The series is |a_m| t^{v_m + m s} in the additive variable s.
struct LaurentTerm {
    Int m;
    Rat v;
};

// Term data over an open interval (a, b) of the additive valuation
// parameter. b absent means +infinity, which is allowed only when every
// exponent is non-negative.
struct LaurentData {
    std::vector<LaurentTerm> terms;
    Rat a;
    std::optional<Rat> b;
};

// Returns the exponent whose term strictly dominates all others on the whole
// open interval, i.e. v_m + m s < v_{m'} + m' s for every s in (a, b) and
// every other exponent m'. Distinct exponents make the difference a
// non-constant affine function, so weak inequality at both endpoints is
// equivalent to strict inequality inside.
inline Int dominant_exponent(const LaurentData& data) {
    if (data.terms.empty()) throw DomainError("dominant_exponent: no terms");
    for (size_t i = 0; i < data.terms.size(); ++i)
        for (size_t j = i + 1; j < data.terms.size(); ++j)
            if (data.terms[i].m == data.terms[j].m)
                throw DomainError("dominant_exponent: duplicate exponents");
    if (data.b) {
        if (!(data.a < *data.b)) throw DomainError("dominant_exponent: empty interval");
    } else {
        for (const auto& t : data.terms)
            if (t.m < 0)
                throw DomainError(
                    "dominant_exponent: unbounded interval requires non-negative exponents");
    }

    for (const auto& cand : data.terms) {
        bool dominates = true;
        for (const auto& other : data.terms) {
            if (other.m == cand.m) continue;
            // f(s) = (v_c + m_c s) - (v_o + m_o s) must be <= 0 at both ends.
            Rat dm = Rat(cand.m) - Rat(other.m);
            Rat dv = cand.v - other.v;
            if (dv + dm * data.a > 0) { dominates = false; break; }
            if (data.b) {
                if (dv + dm * (*data.b) > 0) { dominates = false; break; }
            } else {
                // At +infinity the smaller exponent wins.
                if (cand.m > other.m) { dominates = false; break; }
            }
        }
        if (dominates) return cand.m;
    }
    throw DomainError("not invertible on annulus");
}

}  // namespace clemens
