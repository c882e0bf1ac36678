#include "hodgeforge/geometry_catalog.hpp"

#include "hodgeforge/error.hpp"

#include <json.hpp>

#include <fstream>

namespace hodgeforge {

namespace {

void bad(const std::string& what)
{
    throw Error("InvalidIntersectionData", what);
}

std::string default_path()
{
    return std::string(HODGEFORGE_DATA_DIR) + "/wheel_classes.json";
}

nlohmann::json load(const std::string& path)
{
    const std::string p = path.empty() ? default_path() : path;
    std::ifstream in(p);
    if (!in)
        throw Error("IoError", "cannot open " + p);
    return nlohmann::json::parse(in);
}

Matrix lattice_form()
{
    Matrix q(kLatticeRank, kLatticeRank);
    q(0, 0) = 1;
    for (int i = 1; i < kLatticeRank; ++i)
        q(i, i) = -1;
    return q;
}

Matrix as_column(const std::vector<long>& v)
{
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i)
        m(i, 0) = v[i];
    return m;
}

} // namespace

long lattice_product(const std::vector<long>& a, const std::vector<long>& b)
{
    long s = a.at(0) * b.at(0);
    for (int i = 1; i < kLatticeRank; ++i)
        s -= a.at(i) * b.at(i);
    return s;
}

std::vector<long> fiber_class()
{
    std::vector<long> f(kLatticeRank, 1);
    f[0] = 3;
    return f;
}

std::vector<std::string> wheel_realizations(const std::string& path)
{
    const auto j = load(path);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.at("realizations").items())
        keys.push_back(k);
    return keys;
}

WheelSurfaceSpec wheel_spec(const std::string& key, const std::string& path)
{
    const auto j = load(path).at("realizations");
    if (!j.contains(key))
        throw Error("OutOfRange", "no wheel realization '" + key + "'");
    WheelSurfaceSpec s;
    s.realization = key;
    s.curves = j.at(key).at("curves").get<std::vector<std::vector<long>>>();
    s.kahler = j.at(key).at("kahler").get<std::vector<long>>();
    s.d = static_cast<int>(s.curves.size());
    return s;
}

WheelSurfaceSpec wheel_spec(int d)
{
    if (d < 2 || d > 9)
        throw Error("OutOfRange", "d = " + std::to_string(d) + " outside 2..9");
    return wheel_spec(std::to_string(d));
}

void validate_wheel(const WheelSurfaceSpec& spec)
{
    const int d = spec.d;
    if (d < 2 || d > 9 || static_cast<int>(spec.curves.size()) != d)
        bad("need 2 <= d <= 9 curve classes");
    if (static_cast<int>(spec.kahler.size()) != kLatticeRank)
        bad("Kahler class has the wrong rank");
    std::vector<long> sum(kLatticeRank, 0);
    for (const auto& c : spec.curves) {
        if (static_cast<int>(c.size()) != kLatticeRank)
            bad("curve class has the wrong rank");
        for (int i = 0; i < kLatticeRank; ++i)
            sum[i] += c[i];
    }
    if (sum != fiber_class())
        bad("classes do not sum to the fiber class");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            long want = 0;
            if (i == j)
                want = -2;
            else if (d == 2)
                want = 2;
            else if ((i + 1) % d == j || (j + 1) % d == i)
                want = 1;
            if (lattice_product(spec.curves[i], spec.curves[j]) != want)
                bad("C_" + std::to_string(i + 1) + ".C_" + std::to_string(j + 1) + " is not the affine cycle value " +
                    std::to_string(want));
        }
    for (int i = 0; i < d; ++i)
        if (lattice_product(spec.kahler, spec.curves[i]) <= 0)
            bad("Kahler class has non-positive degree on C_" + std::to_string(i + 1));
    if (lattice_product(spec.kahler, spec.kahler) <= 0)
        bad("Kahler class has non-positive square");
}

StrataComplex wheel_strata(const WheelSurfaceSpec& spec)
{
    validate_wheel(spec);
    const int d = spec.d;
    const Matrix q = lattice_form();

    StratumComponent x;
    x.dim = 2;
    x.betti = {{0, 1}, {2, kLatticeRank}, {4, 1}};
    x.pairing = {{0, Matrix::identity(1)}, {2, q}, {4, Matrix::identity(1)}};
    const Matrix k = as_column(spec.kahler);
    x.lefschetz = {{0, k}, {2, (q * k).transpose()}};

    StrataComplex s;
    s.label = "wheel d=" + spec.realization;
    s.n = 2;
    s.strata.resize(3);
    s.strata[0].push_back(x);
    for (int i = 0; i < d; ++i)
        s.strata[1].push_back(p1_component({i + 1}, 0, Rational(lattice_product(spec.kahler, spec.curves[i]))));

    // Node i joins C_i and C_{i+1}; for d = 2 both nodes have index {1, 2}.
    for (int i = 0; i < d; ++i) {
        const int a = i + 1, b = (i + 1) % d + 1;
        if (d == 2)
            s.strata[2].push_back(point_component({1, 2}, i));
        else
            s.strata[2].push_back(point_component({std::min(a, b), std::max(a, b)}, 0));
    }

    for (int i = 0; i < d; ++i) {
        StratumRestriction r;
        r.m = 0;
        r.from = 0;
        r.to = static_cast<std::size_t>(i);
        r.maps[0] = Matrix::identity(1);
        r.maps[2] = (q * as_column(spec.curves[i])).transpose();
        r.gysin[0] = as_column(spec.curves[i]);
        r.gysin[2] = Matrix::identity(1);
        s.restrictions.push_back(r);
    }
    for (int i = 0; i < d; ++i)
        for (int node : {i, (i + d - 1) % d}) {
            StratumRestriction r;
            r.m = 1;
            r.from = static_cast<std::size_t>(i);
            r.to = static_cast<std::size_t>(node);
            r.maps[0] = Matrix::identity(1);
            r.gysin[0] = Matrix::identity(1);
            s.restrictions.push_back(r);
        }
    return make_strata(std::move(s));
}

StrataComplex wheel_strata(int d)
{
    return wheel_strata(wheel_spec(d));
}

EulerTriple wheel_euler_oracle(int d)
{
    if (d < 2 || d > 9)
        throw Error("OutOfRange", "d = " + std::to_string(d) + " outside 2..9");
    // chi(X) = 3 + 9 for P^2 blown up at 9 points; chi of a cycle of d P^1s is 2d - d.
    const long chi_x = 12;
    const long chi_d = d;
    return {chi_x - chi_d, 0, chi_x - chi_d};
}

} // namespace hodgeforge
