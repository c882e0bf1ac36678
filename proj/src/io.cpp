#include "hodgeforge/io.hpp"

#include "hodgeforge/error.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace hodgeforge {

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& msg)
{
    throw Error("SchemaError", "field '" + field + "': " + msg);
}

const Json& member(const Json& j, const std::string& key, const std::string& field)
{
    if (!j.is_object())
        schema(field, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        schema(field.empty() ? key : field + "." + key, "missing");
    return *it;
}

long int_from_json(const Json& j, const std::string& field)
{
    if (!j.is_number_integer())
        schema(field, "expected an integer");
    return j.get<long>();
}

IVec ivec_from_json(const Json& j, const std::string& field, std::size_t dim)
{
    if (!j.is_array() || (dim && j.size() != dim))
        schema(field, dim ? "expected an integer " + std::to_string(dim) + "-vector" : "expected an integer list");
    IVec v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(int_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    return v;
}

std::vector<int> index_list(const Json& j, const std::string& field)
{
    IVec v = ivec_from_json(j, field, 0);
    return {v.begin(), v.end()};
}

template <class T, class F>
std::map<int, T> degree_map(const Json& j, const std::string& field, F parse)
{
    std::map<int, T> out;
    if (!j.is_object())
        schema(field, "expected an object keyed by degree");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string sub = field + "." + it.key();
        int deg = 0;
        try {
            std::size_t used = 0;
            deg = std::stoi(it.key(), &used);
            if (used != it.key().size())
                throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            schema(sub, "degree key is not an integer");
        }
        out[deg] = parse(it.value(), sub);
    }
    return out;
}

template <class T, class F>
Json degree_json(const std::map<int, T>& m, F emit)
{
    Json j = Json::object();
    for (const auto& [k, v] : m)
        j[std::to_string(k)] = emit(v);
    return j;
}

} // namespace

Json parse_json_text(const std::string& text, const std::string& source)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            line += text[i] == '\n';
        throw Error("SchemaError", source + ":" + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
    }
}

Json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("IOError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

Json rational_json(const Rational& q)
{
    Rational c = q;
    c.canonicalize();
    return to_string(c);
}

Rational rational_from_json(const Json& j, const std::string& field)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (!j.is_string())
        schema(field, "expected a rational string \"num/den\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
        schema(field, e.what());
    }
}

Json matrix_json(const Matrix& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(rational_json(m(i, c)));
        rows.push_back(row);
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

Matrix matrix_from_json(const Json& j, const std::string& field)
{
    const long r = int_from_json(member(j, "rows", field), field + ".rows");
    const long c = int_from_json(member(j, "cols", field), field + ".cols");
    if (r < 0 || c < 0)
        schema(field, "negative shape");
    const Json& e = member(j, "entries", field);
    if (!e.is_array() || e.size() != static_cast<std::size_t>(r))
        schema(field + ".entries", "expected " + std::to_string(r) + " rows");
    Matrix m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const std::string rf = field + ".entries[" + std::to_string(i) + "]";
        if (!e[i].is_array() || e[i].size() != m.cols())
            schema(rf, "expected " + std::to_string(c) + " entries");
        for (std::size_t k = 0; k < m.cols(); ++k)
            m(i, k) = rational_from_json(e[i][k], rf + "[" + std::to_string(k) + "]");
    }
    return m;
}

Json strata_json(const StrataComplex& s)
{
    Json j;
    j["label"] = s.label;
    j["n"] = s.n;
    Json strata = Json::array();
    for (const auto& level : s.strata) {
        Json comps = Json::array();
        for (const auto& c : level) {
            Json cj;
            cj["index"] = c.index;
            cj["label"] = c.label;
            cj["dim"] = c.dim;
            cj["betti"] = degree_json(c.betti, [](std::size_t b) { return Json(b); });
            if (!c.weights.empty())
                cj["weights"] = degree_json(c.weights, [](int w) { return Json(w); });
            if (!c.tate.empty())
                cj["tate"] = degree_json(c.tate, [](bool t) { return Json(t); });
            cj["lefschetz"] = degree_json(c.lefschetz, matrix_json);
            cj["pairing"] = degree_json(c.pairing, matrix_json);
            comps.push_back(cj);
        }
        strata.push_back(comps);
    }
    j["strata"] = strata;
    Json res = Json::array();
    for (const auto& r : s.restrictions) {
        Json rj;
        rj["m"] = r.m;
        rj["from"] = r.from;
        rj["to"] = r.to;
        rj["maps"] = degree_json(r.maps, matrix_json);
        if (!r.gysin.empty())
            rj["gysin"] = degree_json(r.gysin, matrix_json);
        res.push_back(rj);
    }
    j["restrictions"] = res;
    return j;
}

StrataComplex strata_from_json(const Json& j)
{
    StrataComplex s;
    if (j.contains("label")) {
        if (!j["label"].is_string())
            schema("label", "expected a string");
        s.label = j["label"].get<std::string>();
    }
    s.n = static_cast<int>(int_from_json(member(j, "n", ""), "n"));
    const Json& st = member(j, "strata", "");
    if (!st.is_array())
        schema("strata", "expected a list of strata levels");
    for (std::size_t m = 0; m < st.size(); ++m) {
        const std::string lf = "strata[" + std::to_string(m) + "]";
        if (!st[m].is_array())
            schema(lf, "expected a list of components");
        std::vector<StratumComponent> level;
        for (std::size_t c = 0; c < st[m].size(); ++c) {
            const Json& cj = st[m][c];
            const std::string f = lf + "[" + std::to_string(c) + "]";
            StratumComponent comp;
            comp.index = index_list(member(cj, "index", f), f + ".index");
            if (cj.contains("label"))
                comp.label = static_cast<int>(int_from_json(cj["label"], f + ".label"));
            comp.dim = static_cast<int>(int_from_json(member(cj, "dim", f), f + ".dim"));
            comp.betti = degree_map<std::size_t>(member(cj, "betti", f), f + ".betti", [](const Json& v, const std::string& sf) {
                long b = int_from_json(v, sf);
                if (b < 0)
                    schema(sf, "negative Betti number");
                return static_cast<std::size_t>(b);
            });
            if (cj.contains("weights"))
                comp.weights = degree_map<int>(cj["weights"], f + ".weights", [](const Json& v, const std::string& sf) {
                    return static_cast<int>(int_from_json(v, sf));
                });
            if (cj.contains("tate"))
                comp.tate = degree_map<bool>(cj["tate"], f + ".tate", [](const Json& v, const std::string& sf) {
                    if (!v.is_boolean())
                        schema(sf, "expected a boolean");
                    return v.get<bool>();
                });
            if (cj.contains("lefschetz"))
                comp.lefschetz = degree_map<Matrix>(cj["lefschetz"], f + ".lefschetz", matrix_from_json);
            comp.pairing = degree_map<Matrix>(member(cj, "pairing", f), f + ".pairing", matrix_from_json);
            level.push_back(std::move(comp));
        }
        s.strata.push_back(std::move(level));
    }
    if (j.contains("restrictions")) {
        const Json& rs = j["restrictions"];
        if (!rs.is_array())
            schema("restrictions", "expected a list");
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const std::string f = "restrictions[" + std::to_string(i) + "]";
            const Json& rj = rs[i];
            StratumRestriction r;
            r.m = static_cast<int>(int_from_json(member(rj, "m", f), f + ".m"));
            const long from = int_from_json(member(rj, "from", f), f + ".from");
            const long to = int_from_json(member(rj, "to", f), f + ".to");
            if (from < 0 || to < 0)
                schema(f, "negative component index");
            r.from = static_cast<std::size_t>(from);
            r.to = static_cast<std::size_t>(to);
            r.maps = degree_map<Matrix>(member(rj, "maps", f), f + ".maps", matrix_from_json);
            if (rj.contains("gysin"))
                r.gysin = degree_map<Matrix>(rj["gysin"], f + ".gysin", matrix_from_json);
            s.restrictions.push_back(std::move(r));
        }
    }
    return make_strata(std::move(s));
}

std::vector<IVec> polytope_from_json(const Json& j)
{
    const Json& v = member(j, "vertices", "");
    if (!v.is_array() || v.empty())
        schema("vertices", "expected a nonempty list");
    std::vector<IVec> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(ivec_from_json(v[i], "vertices[" + std::to_string(i) + "]", 3));
    return out;
}

LaurentData laurent_from_json(const Json& j)
{
    const Json& t = member(j, "terms", "");
    if (!t.is_array())
        schema("terms", "expected a list");
    LaurentData l;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string f = "terms[" + std::to_string(i) + "]";
        IVec e = ivec_from_json(member(t[i], "exponent", f), f + ".exponent", 0);
        Rational c = rational_from_json(member(t[i], "coefficient", f), f + ".coefficient");
        if (l.support.count(e))
            schema(f + ".exponent", "repeated exponent");
        l.support[e] = c;
    }
    return l;
}

Json laurent_json(const LaurentData& l)
{
    Json t = Json::array();
    for (const auto& [e, c] : l.support)
        t.push_back(Json{{"exponent", e}, {"coefficient", rational_json(c)}});
    return Json{{"terms", t}};
}

Fan fan_from_json(const Json& j)
{
    const int dim = static_cast<int>(int_from_json(member(j, "dim", ""), "dim"));
    if (dim < 1)
        schema("dim", "must be positive");
    const Json& r = member(j, "rays", "");
    const Json& c = member(j, "cones", "");
    if (!r.is_array() || !c.is_array())
        schema("rays", "rays and cones must be lists");
    std::vector<IVec> rays;
    for (std::size_t i = 0; i < r.size(); ++i)
        rays.push_back(ivec_from_json(r[i], "rays[" + std::to_string(i) + "]", static_cast<std::size_t>(dim)));
    std::vector<std::vector<int>> cones;
    for (std::size_t i = 0; i < c.size(); ++i)
        cones.push_back(index_list(c[i], "cones[" + std::to_string(i) + "]"));
    return make_fan(dim, rays, cones);
}

Json fan_json(const Fan& f)
{
    return Json{{"dim", f.dim}, {"rays", f.rays}, {"cones", f.cones}};
}

std::string digest(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 15];
        h >>= 4;
    }
    return out;
}

} // namespace hodgeforge
