#include "hodgeforge/error.hpp"
#include "hodgeforge/geometry_catalog.hpp"
#include "hodgeforge/io.hpp"
#include "hodgeforge/rescaling.hpp"
#include "hodgeforge/toric.hpp"
#include "hodgeforge/weight_spectral.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace hodgeforge;

namespace {

struct Options {
    std::string format = "md";
    std::string check = "none";
    std::uint64_t seed = 1;
    int trials = 8;
    int fw_shift = kDefaultFwShift;
    std::string d;
    std::string polytope;
    std::string laurent;
    std::string fan;
    std::string file;
    std::string emit;
    bool timings = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Report {
    Json j = Json::object();
    bool ok = true;
};

Json cells_json(const HodgeTable& t)
{
    Json a = Json::array();
    for (const auto& [pq, n] : t)
        a.push_back(Json{{"p", pq.first}, {"q", pq.second}, {"dim", n}});
    return a;
}

void add_model(Report& r, const RescalingModel& m, const Options& o)
{
    Json degrees = Json::array();
    bool all_fh = true;
    for (const auto& [k, c] : m.components) {
        RescalingModel one;
        one.components[k] = c;
        Json d{{"degree", k}, {"dim", c.dim()}};
        if (integral_weights(c)) {
            HodgeTable f = f_pq(one), h = h_pq(one);
            d["f"] = cells_json(f);
            d["h"] = cells_json(h);
            d["f_equals_h"] = f == h;
            all_fh = all_fh && f == h;
        } else {
            d["note"] = "half-integral weights; no Hodge table";
        }
        degrees.push_back(d);
    }
    r.j["degrees"] = degrees;
    r.j["f_equals_h"] = all_fh;

    RescalingHT ht = ht_condition(m, o.fw_shift);
    Json cert = Json::array();
    for (const auto& d : ht.degrees) {
        Json v = Json::array();
        for (const auto& [p, w] : d.verdict.violations)
            v.push_back(Json::array({p, w}));
        cert.push_back(Json{{"degree", d.degree},
                            {"violations", v},
                            {"fw_literal", d.literal.opposed},
                            {"fw_failing", d.literal.failing_j}});
    }
    r.j["hodge_tate"] = Json{{"verdict", ht.hodge_tate}, {"fw_shift", o.fw_shift}, {"certificate", cert}};

    SpecialityVerdict sp = speciality(m, kDefaultSaitoShift);
    Json fail = Json::array();
    for (const auto& [k, p] : sp.failing)
        fail.push_back(Json::array({k, p}));
    r.j["special"] =
        Json{{"verdict", sp.special}, {"saito_shift", kDefaultSaitoShift}, {"literal", sp.literal_special}, {"failing", fail}};
}

void add_checks(Report& r, const std::vector<CheckResult>& checks)
{
    Json a = r.j.contains("checks") ? r.j["checks"] : Json::array();
    for (const auto& c : checks) {
        a.push_back(Json{{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
        r.ok = r.ok && c.ok;
    }
    r.j["checks"] = a;
}

void add_strata_checks(Report& r, const StrataComplex& s)
{
    std::vector<CheckResult> out;
    for (const auto& c : check_strata(s))
        out.push_back({c.name, c.ok, c.detail});
    for (auto& c : full_suite(s).checks)
        out.push_back(std::move(c));
    add_checks(r, out);
}

Report strata_report(const std::string& command, const StrataComplex& s, const Options& o, Json geometry,
                     const std::string& input_digest)
{
    const auto t0 = Clock::now();
    Report r;
    r.j["command"] = command;
    r.j["input_digest"] = input_digest;
    r.j["label"] = s.label;
    r.j["geometry"] = std::move(geometry);
    PageResult rel = e2_relative(s);
    Json page = Json::array();
    for (const auto& [k, ws] : rel.graded)
        for (const auto& [w, n] : ws)
            page.push_back(Json{{"degree", k}, {"weight", w}, {"dim", n}});
    r.j["relative_page"] =
        Json{{"gr_w", page}, {"euler", rel.euler()}, {"stratum_euler", stratum_euler(s)}, {"e3_equals_e2", rel.e3_equals_e2}};
    if (s.hodge_tate()) {
        add_model(r, assemble_rescaling(s), o);
    } else {
        r.j["hodge_tate"] = Json{{"verdict", false}, {"reason", "strata are not Hodge-Tate"}};
    }
    if (o.check == "all")
        add_strata_checks(r, s);
    if (o.timings)
        r.j["timings"] = Json{{"seconds", seconds_since(t0)}};
    return r;
}

std::string text_of(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("IOError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit_strata(const StrataComplex& s, const Options& o)
{
    if (o.emit.empty())
        return;
    std::ofstream out(o.emit);
    if (!out)
        throw Error("IOError", "cannot write " + o.emit);
    out << strata_json(s).dump(1) << "\n";
}

Report wheel_report(int d, const Options& o)
{
    StrataComplex s = wheel_strata(d);
    Json geo{{"d", d}, {"surface", "rational elliptic surface, I_d fibre at infinity"}};
    return strata_report("wheel", s, o, geo, digest(strata_json(s).dump()));
}

Report toric_report(const Options& o)
{
    const auto t0 = Clock::now();
    if (o.polytope.empty())
        throw Error("SchemaError", "toric needs --polytope");
    Json pj = load_json_file(o.polytope);
    std::vector<IVec> pts = polytope_from_json(pj);
    LaurentData l;
    const LaurentData* lp = nullptr;
    Json input{{"polytope", pj}};
    if (!o.laurent.empty()) {
        l = laurent_from_json(load_json_file(o.laurent));
        lp = &l;
        input["laurent"] = laurent_json(l);
    }
    ToricPipeline t = run_toric(pts, lp, o.trials, o.seed);
    emit_strata(t.strata, o);
    long blown = 0;
    for (const auto& p : t.poles.rays)
        blown += p.face_dim >= 1;
    Json geo{{"polytope_vertices", t.polytope.vertices.size()},
             {"facets", t.polytope.facets.size()},
             {"spanning_fan_rays", t.normal.rays.size()},
             {"refined_rays", t.refined.rays.size()},
             {"refined_cones", t.refined.cones.size()},
             {"blown_up_curves", blown},
             {"h2_X", t.blowup.h2_rank},
             {"euler_X", t.blowup.euler_x},
             {"probe", Json{{"verdict", nondegeneracy_name(t.probe.verdict)},
                            {"faces", t.probe.faces},
                            {"exact_faces", t.probe.exact_faces},
                            {"trials", o.trials},
                            {"seed", o.seed},
                            {"witness", t.probe.witness}}}};
    Report r = strata_report("toric", t.strata, o, geo, digest(input.dump()));
    if (o.check == "all" && t.probe.verdict == Nondegeneracy::Degenerate)
        add_checks(r, {{"nondegeneracy probe", false, t.probe.witness}});
    if (o.timings)
        r.j["timings"] = Json{{"seconds", seconds_since(t0)}};
    return r;
}

Report fano_report(const Options& o)
{
    const auto t0 = Clock::now();
    if (o.fan.empty())
        throw Error("SchemaError", "fano needs --fan");
    Json fj = load_json_file(o.fan);
    Fan f = fan_from_json(fj);
    SRCohomology sr = sr_cohomology(f);
    RescalingModel m = fano_rescaling(f);
    Report r;
    r.j["command"] = "fano";
    r.j["input_digest"] = digest(fan_json(f).dump());
    r.j["label"] = m.label;
    r.j["geometry"] = Json{{"dim", f.dim}, {"rays", f.rays.size()}, {"cones", f.cones.size()}, {"betti", sr.betti()}};
    add_model(r, m, o);
    if (o.check == "all") {
        std::vector<CheckResult> checks;
        const auto b = sr.betti();
        bool pd = true;
        for (std::size_t k = 0; k < b.size(); ++k)
            pd = pd && b[k] == b[b.size() - 1 - k];
        checks.push_back({"Poincare duality of Betti numbers", pd, ""});
        bool hl = true;
        for (int k = 0; 2 * k < f.dim; ++k) {
            Matrix p = Matrix::identity(b[static_cast<std::size_t>(k)]);
            for (int t = k; t < f.dim - k; ++t)
                p = sr.c1(t) * p;
            hl = hl && rank(p) == b[static_cast<std::size_t>(k)];
        }
        checks.push_back({"hard Lefschetz for c1", hl, ""});
        HodgeTable fp = f_pq(m);
        bool diag = true;
        for (const auto& [pq, n] : fp)
            diag = diag && n == b[static_cast<std::size_t>(pq.second)] && pq.first + pq.second == f.dim;
        checks.push_back({"f^{p,q} = h^{n-p,q}(X)", diag && f_pq(m) == h_pq(m), ""});
        add_checks(r, checks);
    }
    if (o.timings)
        r.j["timings"] = Json{{"seconds", seconds_since(t0)}};
    return r;
}

Report file_report(const Options& o)
{
    if (o.file.empty())
        throw Error("SchemaError", "strata needs --file");
    StrataComplex s = strata_from_json(load_json_file(o.file));
    emit_strata(s, o);
    Json geo{{"n", s.n}};
    Json counts = Json::array();
    for (std::size_t m = 0; m < s.strata.size(); ++m)
        counts.push_back(s.components(static_cast<int>(m)));
    geo["components"] = counts;
    return strata_report("strata", s, o, geo, digest(strata_json(s).dump()));
}

std::vector<int> wheel_list(const std::string& d)
{
    if (d == "all")
        return {2, 3, 4, 5, 6, 7, 8, 9};
    try {
        std::size_t used = 0;
        int v = std::stoi(d, &used);
        if (used == d.size())
            return {v};
    } catch (const std::exception&) {
    }
    throw Error("SchemaError", "--d expects an integer or 'all', got '" + d + "'");
}

std::size_t thread_cap()
{
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HODGEFORGE_THREADS")) {
        try {
            long v = std::stol(env);
            if (v >= 1)
                n = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return n;
}

std::vector<Report> wheel_reports(const Options& o)
{
    std::vector<int> ds = wheel_list(o.d);
    std::vector<Report> out(ds.size());
    std::vector<std::string> errors(ds.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < ds.size(); i = next++) {
            try {
                out[i] = wheel_report(ds[i], o);
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        }
    };
    const std::size_t n = std::min(thread_cap(), ds.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n; ++t)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (!errors[i].empty()) {
            const std::string& e = errors[i];
            const auto colon = e.find(':');
            throw Error(e.substr(0, colon), colon == std::string::npos ? e : e.substr(colon + 2));
        }
    if (ds.size() == 1) {
        StrataComplex s = wheel_strata(ds[0]);
        emit_strata(s, o);
    }
    return out;
}

std::string yes(const Json& b)
{
    return b.get<bool>() ? "true" : "false";
}

void render_md(std::ostream& os, const Report& r)
{
    const Json& j = r.j;
    os << "# hodgeforge " << j["command"].get<std::string>() << "\n\n";
    os << "- label: " << j["label"].get<std::string>() << "\n";
    os << "- input digest: " << j["input_digest"].get<std::string>() << "\n";
    if (j.contains("geometry"))
        for (auto it = j["geometry"].begin(); it != j["geometry"].end(); ++it) {
            if (it.key() == "probe") {
                const Json& p = it.value();
                os << "- nondegeneracy probe: " << p["verdict"].get<std::string>() << " (" << p["faces"] << " faces, "
                   << p["exact_faces"] << " exact, seed " << p["seed"] << ")\n";
                if (!p["witness"].get<std::string>().empty())
                    os << "  - witness: " << p["witness"].get<std::string>() << "\n";
            } else {
                os << "- " << it.key() << ": " << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
                   << "\n";
            }
        }
    if (j.contains("relative_page")) {
        const Json& p = j["relative_page"];
        os << "\n## Gr^W of H^k(Y, Y_inf)\n\n| k | w | dim |\n|---|---|---|\n";
        for (const auto& c : p["gr_w"])
            os << "| " << c["degree"] << " | " << c["weight"] << " | " << c["dim"] << " |\n";
        os << "\nEuler characteristic " << p["euler"] << " (strata count " << p["stratum_euler"]
           << "); E3 = E2: " << yes(p["e3_equals_e2"]) << "\n";
    }
    if (j.contains("degrees")) {
        for (const auto& d : j["degrees"]) {
            os << "\n## Degree " << d["degree"] << " (dim " << d["dim"] << ")\n\n";
            if (!d.contains("f")) {
                os << d["note"].get<std::string>() << "\n";
                continue;
            }
            std::map<std::pair<int, int>, std::pair<std::size_t, std::size_t>> both;
            for (const auto& c : d["f"])
                both[{c["p"].get<int>(), c["q"].get<int>()}].first = c["dim"].get<std::size_t>();
            for (const auto& c : d["h"])
                both[{c["p"].get<int>(), c["q"].get<int>()}].second = c["dim"].get<std::size_t>();
            os << "| p | q | f^{p,q} | h^{p,q} |\n|---|---|---|---|\n";
            for (const auto& [pq, v] : both)
                os << "| " << pq.first << " | " << pq.second << " | " << v.first << " | " << v.second << " |\n";
        }
        os << "\nf = h: " << yes(j["f_equals_h"]) << "\n";
    }
    os << "\nHT: " << yes(j["hodge_tate"]["verdict"]) << "\n";
    if (j.contains("special")) {
        const Json& s = j["special"];
        os << "special: " << yes(s["verdict"]) << " (Saito shift " << s["saito_shift"] << "; literal reading "
           << yes(s["literal"]) << ")\n";
    }
    if (j.contains("checks")) {
        os << "\n## Checks\n\n| check | ok | detail |\n|---|---|---|\n";
        for (const auto& c : j["checks"])
            os << "| " << c["name"].get<std::string>() << " | " << (c["ok"].get<bool>() ? "pass" : "FAIL") << " | "
               << c["detail"].get<std::string>() << " |\n";
        os << "\nall checks: " << (r.ok ? "pass" : "FAIL") << "\n";
    }
    if (j.contains("timings"))
        os << "\ntime: " << j["timings"]["seconds"] << " s\n";
}

int emit(const std::vector<Report>& reports, const Options& o)
{
    bool ok = true;
    for (const auto& r : reports)
        ok = ok && r.ok;
    if (o.format == "json") {
        if (reports.size() == 1) {
            std::cout << reports[0].j.dump(2) << "\n";
        } else {
            Json a = Json::array();
            for (const auto& r : reports)
                a.push_back(r.j);
            std::cout << Json{{"reports", a}}.dump(2) << "\n";
        }
    } else {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (i)
                std::cout << "\n---\n\n";
            render_md(std::cout, reports[i]);
        }
    }
    return ok ? 0 : 1;
}

void common(CLI::App* c, Options& o)
{
    c->add_option("--format", o.format, "report format")->check(CLI::IsMember({"md", "json"}))->capture_default_str();
    c->add_option("--check", o.check, "checks to run")->check(CLI::IsMember({"none", "all"}))->capture_default_str();
    c->add_option("--fw-shift", o.fw_shift, "index offset of the literal F/W complementarity test")
        ->capture_default_str();
    c->add_option("--seed", o.seed, "seed of the nondegeneracy probe")->capture_default_str();
    c->add_flag("--timings", o.timings, "add wall-clock timings (makes output nondeterministic)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hodge-Tate and speciality checks for rescaling structures of Landau-Ginzburg models"};
    app.require_subcommand(1);
    Options o;

    auto* wheel = app.add_subcommand("wheel", "rational elliptic surface with an I_d fibre at infinity");
    common(wheel, o);
    wheel->add_option("--d", o.d, "number of fibre components, 2..9, or 'all'")->required();
    wheel->add_option("--emit-strata", o.emit, "write the strata complex as JSON");

    auto* toric = app.add_subcommand("toric", "LG model of a reflexive 3-polytope");
    common(toric, o);
    toric->add_option("--polytope", o.polytope, "polytope JSON file")->required();
    toric->add_option("--laurent", o.laurent, "Laurent polynomial JSON file (default: 1 on every vertex)");
    toric->add_option("--trials", o.trials, "probe lines per face of dimension >= 2")->capture_default_str();
    toric->add_option("--emit-strata", o.emit, "write the strata complex as JSON");

    auto* fano = app.add_subcommand("fano", "rescaling model of a smooth complete toric variety");
    common(fano, o);
    fano->add_option("--fan", o.fan, "fan JSON file")->required();

    auto* strata = app.add_subcommand("strata", "pipeline on a strata complex file");
    common(strata, o);
    strata->add_option("--file", o.file, "strata JSON file")->required();
    strata->add_option("--emit-strata", o.emit, "write the validated strata complex back as JSON");

    auto* check = app.add_subcommand("check", "run every check on one input; exit status reports the result");
    common(check, o);
    check->add_option("--d", o.d, "wheel parameter");
    check->add_option("--polytope", o.polytope, "polytope JSON file");
    check->add_option("--laurent", o.laurent, "Laurent polynomial JSON file");
    check->add_option("--trials", o.trials, "probe lines per face")->capture_default_str();
    check->add_option("--fan", o.fan, "fan JSON file");
    check->add_option("--file", o.file, "strata JSON file");

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<Report> reports;
        if (wheel->parsed()) {
            reports = wheel_reports(o);
        } else if (toric->parsed()) {
            reports.push_back(toric_report(o));
        } else if (fano->parsed()) {
            reports.push_back(fano_report(o));
        } else if (strata->parsed()) {
            reports.push_back(file_report(o));
        } else {
            o.check = "all";
            const int given = !o.d.empty() + !o.polytope.empty() + !o.fan.empty() + !o.file.empty();
            if (given != 1)
                throw Error("SchemaError", "check needs exactly one of --d, --polytope, --fan, --file");
            if (!o.d.empty())
                reports = wheel_reports(o);
            else if (!o.polytope.empty())
                reports.push_back(toric_report(o));
            else if (!o.fan.empty())
                reports.push_back(fano_report(o));
            else
                reports.push_back(file_report(o));
        }
        return emit(reports, o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
