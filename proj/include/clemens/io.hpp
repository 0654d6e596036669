#pragma once

#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clemens/balancing.hpp"
#include "clemens/moduli.hpp"
#include "clemens/subdivision.hpp"

// JSON serialization for every file schema the tool reads or writes, plus the
// poset text rendering. All numbers that can be non-integral travel as
// decimal-free strings "p/q"; writes go through a temp file and a rename so a
// crash never leaves a half-written artifact.

namespace clemens {

using ojson = nlohmann::ordered_json;

inline std::string rat_string(const Rat& r) { return r.str(); }

inline Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational");
    size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator: " + s);
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw ParseError("not a rational: " + s);
    }
}

inline std::string ext_string(const ExtRat& v) { return v.infinite ? "inf" : rat_string(v.value); }

inline ExtRat ext_from_string(const std::string& s) {
    if (s == "inf") return ExtRat::inf();
    return ExtRat(rat_from_string(s));
}

namespace io_detail {

inline const ojson& member(const ojson& j, const char* key) {
    if (!j.is_object()) throw ParseError(std::string("expected object with key \"") + key + "\"");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing key \"") + key + "\"");
    return *it;
}

inline std::string jstring(const ojson& j, const char* what) {
    if (!j.is_string()) throw ParseError(std::string("expected string for ") + what);
    return j.get<std::string>();
}

inline int jint(const ojson& j, const char* what) {
    if (!j.is_number_integer()) throw ParseError(std::string("expected integer for ") + what);
    return j.get<int>();
}

inline const ojson& jarray(const ojson& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string("expected array for ") + what);
    return j;
}

// Rationals are accepted as strings "p/q" or plain JSON integers.
inline Rat jrat(const ojson& j, const char* what) {
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
    throw ParseError(std::string("expected rational string for ") + what);
}

inline Int jbig(const ojson& j, const char* what) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::runtime_error&) {
            throw ParseError(std::string("not an integer for ") + what);
        }
    }
    throw ParseError(std::string("expected integer for ") + what);
}

inline ojson big_json(const Int& v) {
    if (v <= Int(std::numeric_limits<long long>::max()) &&
        v >= Int(std::numeric_limits<long long>::min()))
        return ojson(v.convert_to<long long>());
    return ojson(v.str());
}

inline int vertex_by_name(const ClemensComplex& c, const std::string& name) {
    auto idx = c.vertex_index(name);
    if (!idx) throw ParseError("unknown vertex name: " + name);
    return *idx;
}

}  // namespace io_detail

inline ojson point_to_json(const RationalPoint& p) {
    ojson a = ojson::array();
    for (const Rat& x : p) a.push_back(rat_string(x));
    return a;
}

inline RationalPoint point_from_json(const ojson& j) {
    RationalPoint p;
    for (const ojson& x : io_detail::jarray(j, "point")) p.push_back(io_detail::jrat(x, "coordinate"));
    return p;
}

inline ojson face_to_json(const ClemensComplex& c, const Face& f) {
    ojson a = ojson::array();
    for (int v : f) {
        if (v < 0 || v >= c.num_vertices()) throw ParseError("face vertex out of range");
        a.push_back(c.vertex_names[v]);
    }
    return a;
}

inline Face face_from_json(const ClemensComplex& c, const ojson& j) {
    Face f;
    for (const ojson& n : io_detail::jarray(j, "face"))
        f.push_back(io_detail::vertex_by_name(c, io_detail::jstring(n, "vertex name")));
    return sorted_face(f);
}

inline ojson complex_to_json(const ClemensComplex& c) {
    ojson j;
    j["vertices"] = ojson::array();
    for (const std::string& n : c.vertex_names) j["vertices"].push_back(n);
    j["faces"] = ojson::array();
    for (const Face& f : c.faces) j["faces"].push_back(face_to_json(c, f));
    return j;
}

inline ClemensComplex complex_from_json(const ojson& j) {
    ClemensComplex c;
    for (const ojson& n : io_detail::jarray(io_detail::member(j, "vertices"), "vertices"))
        c.vertex_names.push_back(io_detail::jstring(n, "vertex name"));
    for (const ojson& f : io_detail::jarray(io_detail::member(j, "faces"), "faces"))
        c.faces.push_back(face_from_json(c, f));
    return c;
}

inline ojson density_to_json(const ClemensComplex& c, const SimpleDensity& d) {
    ojson entries = ojson::array();
    for (const auto& [key, value] : d.entries) {
        ojson e;
        e["face"] = face_to_json(c, key.first);
        e["j"] = c.vertex_names.at(key.second);
        e["value"] = ext_string(value);
        entries.push_back(e);
    }
    ojson j;
    j["entries"] = entries;
    return j;
}

inline SimpleDensity density_from_json(const ClemensComplex& c, const ojson& j) {
    SimpleDensity d;
    for (const ojson& e : io_detail::jarray(io_detail::member(j, "entries"), "entries")) {
        Face I = face_from_json(c, io_detail::member(e, "face"));
        int jv = io_detail::vertex_by_name(c, io_detail::jstring(io_detail::member(e, "j"), "j"));
        const ojson& val = io_detail::member(e, "value");
        ExtRat v = val.is_string() ? ext_from_string(val.get<std::string>())
                                   : ExtRat(io_detail::jrat(val, "value"));
        d.entries[{I, jv}] = v;
    }
    return d;
}

namespace io_detail {

// Shared emitter for types and curves; curves add "pos" and derive "face"
// from the position's carrier.
template <class T>
ojson vertices_edges_json(const ClemensComplex& c, const T& t, const RationalPoint* positions_of,
                          const std::vector<Face>& faces_of) {
    ojson j;
    j["vertices"] = ojson::array();
    for (int v = 0; v < t.graph.num_vertices; ++v) {
        ojson jv;
        jv["id"] = v;
        jv["face"] = face_to_json(c, faces_of[v]);
        jv["genus"] = t.genus_label[v];
        if (positions_of) jv["pos"] = point_to_json(positions_of[v]);
        j["vertices"].push_back(jv);
    }
    j["edges"] = ojson::array();
    for (size_t e = 0; e < t.graph.edges.size(); ++e) {
        ojson je;
        je["u"] = t.graph.edges[e].u;
        je["v"] = t.graph.edges[e].v;
        ojson w = ojson::array();
        for (const Int& x : t.weight_at_u[e]) w.push_back(big_json(x));
        je["weight_at_u"] = w;
        j["edges"].push_back(je);
    }
    j["marks"] = ojson::array();
    for (int m : t.marks) j["marks"].push_back(m);
    return j;
}

template <class T>
void vertices_edges_from_json(const ClemensComplex& c, const ojson& j, T& t, bool want_positions,
                              std::vector<RationalPoint>* positions,
                              std::vector<Face>* faces) {
    const ojson& verts = jarray(member(j, "vertices"), "vertices");
    const int nv = (int)verts.size();
    t.graph.num_vertices = nv;
    t.genus_label.assign(nv, 0);
    if (positions) positions->assign(nv, RationalPoint());
    if (faces) faces->assign(nv, Face());
    std::vector<char> seen(nv, 0);
    for (const ojson& jv : verts) {
        int id = jint(member(jv, "id"), "vertex id");
        if (id < 0 || id >= nv || seen[id]) throw ParseError("vertex ids must be 0..V-1 without repeats");
        seen[id] = 1;
        t.genus_label[id] = jint(member(jv, "genus"), "genus");
        if (faces) (*faces)[id] = face_from_json(c, member(jv, "face"));
        if (want_positions) {
            if (!positions) throw InternalError("positions sink missing");
            (*positions)[id] = point_from_json(member(jv, "pos"));
        }
    }
    for (const ojson& je : jarray(member(j, "edges"), "edges")) {
        MultiGraph::Edge e;
        e.u = jint(member(je, "u"), "edge endpoint");
        e.v = jint(member(je, "v"), "edge endpoint");
        t.graph.edges.push_back(e);
        WeightVector w;
        for (const ojson& x : jarray(member(je, "weight_at_u"), "weight_at_u"))
            w.push_back(jbig(x, "weight component"));
        t.weight_at_u.push_back(w);
    }
    for (const ojson& m : jarray(member(j, "marks"), "marks"))
        t.marks.push_back(jint(m, "mark vertex"));
}

}  // namespace io_detail

inline ojson type_to_json(const ClemensComplex& c, const CombinatorialType& t) {
    return io_detail::vertices_edges_json(c, t, nullptr, t.face_label);
}

inline CombinatorialType type_from_json(const ClemensComplex& c, const ojson& j) {
    CombinatorialType t;
    io_detail::vertices_edges_from_json(c, j, t, false, nullptr, &t.face_label);
    return t;
}

inline ojson curve_to_json(const ClemensComplex& c, const ParamTropCurve& k) {
    std::vector<Face> faces(k.graph.num_vertices);
    for (int v = 0; v < k.graph.num_vertices; ++v) faces[v] = carrier(c, k.positions[v]);
    return io_detail::vertices_edges_json(c, k, k.positions.data(), faces);
}

inline ParamTropCurve curve_from_json(const ClemensComplex& c, const ojson& j) {
    ParamTropCurve k;
    io_detail::vertices_edges_from_json<ParamTropCurve>(c, j, k, true, &k.positions, nullptr);
    return k;
}

inline ojson subdivision_to_json(const Subdivision& s) {
    ojson j;
    j["nu"] = s.nu;
    j["base"] = complex_to_json(s.base);
    j["fine"] = complex_to_json(s.fine);
    j["positions"] = ojson::array();
    for (const RationalPoint& p : s.pos) j["positions"].push_back(point_to_json(p));
    j["lattice"] = ojson::array();
    for (const auto& row : s.lattice) {
        ojson r = ojson::array();
        for (const Int& x : row) r.push_back(io_detail::big_json(x));
        j["lattice"].push_back(r);
    }
    return j;
}

inline Subdivision subdivision_from_json(const ojson& j) {
    Subdivision s;
    s.nu = io_detail::jint(io_detail::member(j, "nu"), "nu");
    s.base = complex_from_json(io_detail::member(j, "base"));
    s.fine = complex_from_json(io_detail::member(j, "fine"));
    for (const ojson& p : io_detail::jarray(io_detail::member(j, "positions"), "positions"))
        s.pos.push_back(point_from_json(p));
    for (const ojson& r : io_detail::jarray(io_detail::member(j, "lattice"), "lattice")) {
        std::vector<Int> row;
        for (const ojson& x : r) row.push_back(io_detail::jbig(x, "lattice entry"));
        s.lattice.push_back(row);
    }
    return s;
}

inline ojson cycle_data_to_json(const ClemensComplex& c, const CycleClassData& d) {
    ojson j = ojson::array();
    for (const auto& [face, gens] : d.generators) {
        ojson e;
        e["face"] = face_to_json(c, face);
        e["generators"] = ojson::array();
        for (const WeightVector& g : gens) {
            ojson row = ojson::array();
            for (const Int& x : g) row.push_back(io_detail::big_json(x));
            e["generators"].push_back(row);
        }
        j.push_back(e);
    }
    return j;
}

inline CycleClassData cycle_data_from_json(const ClemensComplex& c, const ojson& j) {
    CycleClassData d;
    for (const ojson& e : io_detail::jarray(j, "cycle data")) {
        Face f = face_from_json(c, io_detail::member(e, "face"));
        std::vector<WeightVector> gens;
        for (const ojson& g : io_detail::jarray(io_detail::member(e, "generators"), "generators")) {
            WeightVector w;
            for (const ojson& x : g) w.push_back(io_detail::jbig(x, "generator component"));
            gens.push_back(w);
        }
        d.generators[f] = gens;
    }
    return d;
}

inline ojson polyhedron_to_json(const Polyhedron& p) {
    ojson j;
    j["vars"] = ojson::array();
    for (const std::string& n : p.var_names) j["vars"].push_back(n);
    j["rows"] = ojson::array();
    for (const Constraint& row : p.rows) {
        ojson r;
        r["a"] = ojson::array();
        for (const Rat& x : row.a) r["a"].push_back(rat_string(x));
        r["rel"] = row.rel == Rel::Eq ? "eq" : row.rel == Rel::Le ? "le" : "lt";
        r["b"] = rat_string(row.b);
        j["rows"].push_back(r);
    }
    return j;
}

inline Polyhedron polyhedron_from_json(const ojson& j) {
    Polyhedron p;
    for (const ojson& n : io_detail::jarray(io_detail::member(j, "vars"), "vars"))
        p.var_names.push_back(io_detail::jstring(n, "variable name"));
    p.num_vars = (int)p.var_names.size();
    for (const ojson& r : io_detail::jarray(io_detail::member(j, "rows"), "rows")) {
        Constraint row;
        for (const ojson& x : io_detail::jarray(io_detail::member(r, "a"), "coefficients"))
            row.a.push_back(io_detail::jrat(x, "coefficient"));
        if ((int)row.a.size() != p.num_vars) throw ParseError("coefficient row length mismatch");
        std::string rel = io_detail::jstring(io_detail::member(r, "rel"), "rel");
        if (rel == "eq")
            row.rel = Rel::Eq;
        else if (rel == "le")
            row.rel = Rel::Le;
        else if (rel == "lt")
            row.rel = Rel::Lt;
        else
            throw ParseError("unknown relation: " + rel);
        row.b = io_detail::jrat(io_detail::member(r, "b"), "rhs");
        p.rows.push_back(row);
    }
    return p;
}

inline ojson poset_to_json(const Poset& p) {
    ojson j;
    j["covers"] = ojson::array();
    for (const auto& [lo, hi] : p.covers) j["covers"].push_back(ojson::array({lo, hi}));
    j["leq"] = ojson::array();
    for (const auto& row : p.leq) {
        std::string bits(row.size(), '0');
        for (size_t i = 0; i < row.size(); ++i) bits[i] = row[i] ? '1' : '0';
        j["leq"].push_back(bits);
    }
    return j;
}

inline Poset poset_from_json(const ojson& j) {
    Poset p;
    for (const ojson& c : io_detail::jarray(io_detail::member(j, "covers"), "covers")) {
        const ojson& a = io_detail::jarray(c, "cover pair");
        if (a.size() != 2) throw ParseError("cover pair must have two entries");
        p.covers.emplace_back(io_detail::jint(a[0], "cover"), io_detail::jint(a[1], "cover"));
    }
    for (const ojson& r : io_detail::jarray(io_detail::member(j, "leq"), "leq")) {
        std::string bits = io_detail::jstring(r, "leq row");
        std::vector<char> row(bits.size(), 0);
        for (size_t i = 0; i < bits.size(); ++i) row[i] = bits[i] == '1';
        p.leq.push_back(row);
    }
    return p;
}

// One cover relation per line, low type before the type it degenerates from.
inline std::string poset_to_text(const Poset& p) {
    std::ostringstream os;
    for (const auto& [lo, hi] : p.covers) os << lo << " -> " << hi << "\n";
    return os.str();
}

inline ojson moduli_to_json(const ClemensComplex& c, const ModuliSpace& m) {
    ojson j;
    j["params"] = ojson();
    j["params"]["genus"] = m.params.genus;
    j["params"]["num_marks"] = m.params.num_marks;
    j["params"]["degree_bound"] = rat_string(m.params.degree_bound);
    j["strata"] = ojson::array();
    for (const Stratum& s : m.strata) {
        ojson js;
        js["type"] = type_to_json(c, s.type);
        js["dim"] = s.dim;
        auto w = fm_witness(s.interior.poly);
        if (!w) throw InternalError("stratum of the moduli space has no witness");
        js["witness"] = ojson::array();
        for (const Rat& x : *w) js["witness"].push_back(rat_string(x));
        js["interior"] = polyhedron_to_json(s.interior.poly);
        js["closure"] = polyhedron_to_json(s.closure.poly);
        j["strata"].push_back(js);
    }
    j["poset"] = poset_to_json(m.poset);
    return j;
}

inline ModuliSpace moduli_from_json(const ClemensComplex& c, const ojson& j) {
    ModuliSpace m;
    const ojson& params = io_detail::member(j, "params");
    m.params.genus = io_detail::jint(io_detail::member(params, "genus"), "genus");
    m.params.num_marks = io_detail::jint(io_detail::member(params, "num_marks"), "num_marks");
    m.params.degree_bound = io_detail::jrat(io_detail::member(params, "degree_bound"), "degree_bound");
    for (const ojson& js : io_detail::jarray(io_detail::member(j, "strata"), "strata")) {
        Stratum s;
        s.type = type_from_json(c, io_detail::member(js, "type"));
        s.dim = io_detail::jint(io_detail::member(js, "dim"), "dim");
        s.interior.poly = polyhedron_from_json(io_detail::member(js, "interior"));
        s.closure.poly = polyhedron_from_json(io_detail::member(js, "closure"));
        s.canonical_bytes = canonical_form(s.type).bytes;
        m.strata.push_back(s);
    }
    m.poset = poset_from_json(io_detail::member(j, "poset"));
    return m;
}

inline ojson load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    try {
        return ojson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
}

inline void save_text(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write file: " + tmp);
        out << content;
        if (!out.flush()) throw DomainError("cannot write file: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline void save_json(const std::string& path, const ojson& j) { save_text(path, j.dump(2) + "\n"); }

}  // namespace clemens
