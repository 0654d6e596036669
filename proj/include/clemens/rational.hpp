#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace clemens {

using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

// Domain-contract violations (bad curve data, unrealizable requests). CLI exit code 1.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed external input (JSON shape, unparsable rationals). CLI exit code 2.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant; reaching one of these is a bug, not bad input.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline Rat parse_rational(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + s + "'");
        return Rat(num, den);
    } catch (const std::runtime_error& e) {
        throw ParseError("bad rational literal '" + s + "'");
    }
}

// Canonical form: "p" when the denominator is 1, otherwise "p/q" with q > 0.
inline std::string format_rational(const Rat& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

// Value in (0, +inf]; +inf entries follow the conventions inf*0 = 0 and
// inf*n = inf for n >= 1, and dominate every finite value in max().
struct ExtRat {
    bool infinite = false;
    Rat value{};

    ExtRat() = default;
    ExtRat(const Rat& v) : infinite(false), value(v) {}  // NOLINT: implicit by design
    static ExtRat inf() { ExtRat e; e.infinite = true; return e; }

    bool is_finite() const { return !infinite; }

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.infinite != b.infinite) return false;
        return a.infinite || a.value == b.value;
    }
    friend bool operator<(const ExtRat& a, const ExtRat& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value;
    }
    friend bool operator<=(const ExtRat& a, const ExtRat& b) { return a < b || a == b; }

    ExtRat scaled_by_abs(const Int& n) const {  // |n| * this, with inf*0 = 0
        Int m = n < 0 ? Int(-n) : n;
        if (m == 0) return ExtRat(Rat(0));
        if (infinite) return inf();
        return ExtRat(Rat(value * m));
    }
    ExtRat operator+(const ExtRat& o) const {
        if (infinite || o.infinite) return inf();
        return ExtRat(value + o.value);
    }
};

inline ExtRat parse_ext_rational(const std::string& s) {
    if (s == "inf" || s == "+inf") return ExtRat::inf();
    return ExtRat(parse_rational(s));
}

inline std::string format_ext_rational(const ExtRat& e) {
    return e.infinite ? "inf" : format_rational(e.value);
}

inline std::int64_t to_int64(const Int& v) {
    return v.convert_to<std::int64_t>();
}

}  // namespace clemens
