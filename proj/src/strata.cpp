#include "hodgeforge/strata.hpp"

#include "hodgeforge/error.hpp"

#include <algorithm>

namespace hodgeforge {

std::size_t StratumComponent::b(int a) const
{
    auto it = betti.find(a);
    return it == betti.end() ? 0 : it->second;
}

int StratumComponent::weight(int a) const
{
    auto it = weights.find(a);
    return it == weights.end() ? a : it->second;
}

bool StratumComponent::is_tate(int a) const
{
    auto it = tate.find(a);
    return it == tate.end() ? a % 2 == 0 : it->second;
}

Matrix StratumComponent::L(int a) const
{
    auto it = lefschetz.find(a);
    return it == lefschetz.end() ? Matrix(b(a + 2), b(a)) : it->second;
}

Matrix StratumComponent::P(int a) const
{
    auto it = pairing.find(a);
    return it == pairing.end() ? Matrix(b(a), b(2 * dim - a)) : it->second;
}

std::size_t StrataComplex::components(int m) const
{
    return m < 0 || m >= static_cast<int>(strata.size()) ? 0 : strata[static_cast<std::size_t>(m)].size();
}

std::size_t StrataComplex::dim(int m, int a) const
{
    std::size_t n = 0;
    for (std::size_t c = 0; c < components(m); ++c)
        n += strata[static_cast<std::size_t>(m)][c].b(a);
    return n;
}

std::size_t StrataComplex::offset(int m, std::size_t c, int a) const
{
    std::size_t o = 0;
    for (std::size_t i = 0; i < c; ++i)
        o += strata[static_cast<std::size_t>(m)][i].b(a);
    return o;
}

bool StrataComplex::hodge_tate() const
{
    for (const auto& level : strata)
        for (const auto& c : level)
            for (const auto& [a, n] : c.betti)
                if (n && !c.is_tate(a))
                    return false;
    return true;
}

bool StrataComplex::empty_divisor() const
{
    for (int m = 1; m < static_cast<int>(strata.size()); ++m)
        if (components(m))
            return false;
    return true;
}

namespace {

[[noreturn]] void invalid(const std::string& msg)
{
    throw Error("InvalidStrata", msg);
}

std::string where(int m, std::size_t c)
{
    return "D(" + std::to_string(m) + ")[" + std::to_string(c) + "]";
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace

StrataComplex make_strata(StrataComplex s)
{
    if (s.n < 0)
        invalid("negative dimension");
    if (s.strata.empty())
        invalid("missing D(0)");
    s.strata.resize(static_cast<std::size_t>(s.n) + 1);
    if (s.strata[0].size() != 1 || !s.strata[0][0].index.empty())
        invalid("D(0) must be the single component X with empty index");
    for (int m = 0; m <= s.n; ++m)
        for (std::size_t c = 0; c < s.components(m); ++c) {
            auto& comp = s.strata[static_cast<std::size_t>(m)][c];
            if (!std::is_sorted(comp.index.begin(), comp.index.end()) ||
                std::adjacent_find(comp.index.begin(), comp.index.end()) != comp.index.end())
                invalid(where(m, c) + " index set is not strictly increasing");
            if (static_cast<int>(comp.index.size()) != m)
                invalid(where(m, c) + " index set has the wrong size");
            if (comp.dim != s.n - m)
                invalid(where(m, c) + " has dimension " + std::to_string(comp.dim));
            for (auto it = comp.betti.begin(); it != comp.betti.end();)
                it = it->second == 0 ? comp.betti.erase(it) : std::next(it);
            for (const auto& [a, n] : comp.betti) {
                if (a < 0 || a > 2 * comp.dim)
                    invalid(where(m, c) + " has cohomology in degree " + std::to_string(a));
                if (comp.b(2 * comp.dim - a) != n)
                    invalid(where(m, c) + " violates Poincare duality in degree " + std::to_string(a));
                Matrix p = comp.P(a);
                if (p.rows() != n || p.cols() != n)
                    invalid(where(m, c) + " pairing in degree " + std::to_string(a) + " has the wrong shape");
                if (rank(p) != n)
                    invalid(where(m, c) + " pairing in degree " + std::to_string(a) + " is degenerate");
                if (a % 2 == 0 && comp.P(2 * comp.dim - a) != p.transpose())
                    invalid(where(m, c) + " pairing is not symmetric in degree " + std::to_string(a));
                Matrix l = comp.L(a);
                if (l.rows() != comp.b(a + 2) || l.cols() != n)
                    invalid(where(m, c) + " Lefschetz map in degree " + std::to_string(a) + " has the wrong shape");
            }
        }
    for (const auto& r : s.restrictions) {
        if (r.m < 0 || r.m >= s.n || r.from >= s.components(r.m) || r.to >= s.components(r.m + 1))
            invalid("restriction refers to a missing component");
        const auto& a = s.strata[static_cast<std::size_t>(r.m)][r.from];
        const auto& b = s.strata[static_cast<std::size_t>(r.m + 1)][r.to];
        if (!subset_of(a.index, b.index))
            invalid("restriction " + where(r.m, r.from) + " -> " + where(r.m + 1, r.to) + " between unrelated strata");
        for (const auto& [deg, mat] : r.maps)
            if (mat.rows() != b.b(deg) || mat.cols() != a.b(deg))
                invalid("restriction " + where(r.m, r.from) + " -> " + where(r.m + 1, r.to) + " in degree " +
                        std::to_string(deg) + " has the wrong shape");
        for (const auto& [deg, mat] : r.gysin)
            if (mat.rows() != a.b(deg + 2) || mat.cols() != b.b(deg))
                invalid("pushforward " + where(r.m + 1, r.to) + " -> " + where(r.m, r.from) + " in degree " +
                        std::to_string(deg) + " has the wrong shape");
    }
    return s;
}

int cech_sign(const std::vector<int>& larger, int inserted)
{
    auto it = std::find(larger.begin(), larger.end(), inserted);
    if (it == larger.end())
        throw Error("InvalidStrata", "index not present");
    return (it - larger.begin()) % 2 == 0 ? 1 : -1;
}

namespace {

int inserted_index(const std::vector<int>& small, const std::vector<int>& big)
{
    std::vector<int> diff;
    std::set_difference(big.begin(), big.end(), small.begin(), small.end(), std::back_inserter(diff));
    if (diff.size() != 1)
        throw Error("InvalidStrata", "restriction does not add exactly one index");
    return diff[0];
}

} // namespace

const Matrix& StrataMaps::restriction(int m, int a)
{
    auto key = std::make_pair(m, a);
    auto it = rho_.find(key);
    if (it != rho_.end())
        return it->second;
    Matrix out(s_.dim(m + 1, a), s_.dim(m, a));
    for (const auto& r : s_.restrictions) {
        if (r.m != m)
            continue;
        auto mit = r.maps.find(a);
        if (mit == r.maps.end() || mit->second.empty())
            continue;
        const auto& small = s_.strata[static_cast<std::size_t>(m)][r.from].index;
        const auto& big = s_.strata[static_cast<std::size_t>(m + 1)][r.to].index;
        const int sign = cech_sign(big, inserted_index(small, big));
        Matrix blk = sign > 0 ? mit->second : -mit->second;
        const std::size_t ro = s_.offset(m + 1, r.to, a), co = s_.offset(m, r.from, a);
        for (std::size_t i = 0; i < blk.rows(); ++i)
            for (std::size_t j = 0; j < blk.cols(); ++j)
                out(ro + i, co + j) += blk(i, j);
    }
    return rho_.emplace(key, std::move(out)).first->second;
}

const Matrix& StrataMaps::pairing(int m, int a)
{
    auto key = std::make_pair(m, a);
    auto it = pair_.find(key);
    if (it != pair_.end())
        return it->second;
    const int d = s_.n - m;
    Matrix out(s_.dim(m, a), s_.dim(m, 2 * d - a));
    for (std::size_t c = 0; c < s_.components(m); ++c) {
        const auto& comp = s_.strata[static_cast<std::size_t>(m)][c];
        if (comp.b(a))
            out.set_block(s_.offset(m, c, a), s_.offset(m, c, 2 * d - a), comp.P(a));
    }
    return pair_.emplace(key, std::move(out)).first->second;
}

const Matrix& StrataMaps::lefschetz(int m, int a)
{
    auto key = std::make_pair(m, a);
    auto it = lef_.find(key);
    if (it != lef_.end())
        return it->second;
    Matrix out(s_.dim(m, a + 2), s_.dim(m, a));
    for (std::size_t c = 0; c < s_.components(m); ++c) {
        const auto& comp = s_.strata[static_cast<std::size_t>(m)][c];
        if (comp.b(a) && comp.b(a + 2))
            out.set_block(s_.offset(m, c, a + 2), s_.offset(m, c, a), comp.L(a));
    }
    return lef_.emplace(key, std::move(out)).first->second;
}

const Matrix& StrataMaps::gysin(int m, int a)
{
    auto key = std::make_pair(m, a);
    auto it = gamma_.find(key);
    if (it != gamma_.end())
        return it->second;
    // Blockwise; missing blocks satisfy <gamma x, y>_{D(m-1)} = <x, rho y>_{D(m)}.
    Matrix out(s_.dim(m - 1, a + 2), s_.dim(m, a));
    if (m >= 1 && !out.empty())
        for (const auto& r : s_.restrictions) {
            if (r.m != m - 1)
                continue;
            const auto& big = s_.strata[static_cast<std::size_t>(m - 1)][r.from];
            const auto& small = s_.strata[static_cast<std::size_t>(m)][r.to];
            if (!small.b(a) || !big.b(a + 2))
                continue;
            Matrix blk;
            if (auto git = r.gysin.find(a); git != r.gysin.end()) {
                blk = git->second;
            } else {
                const int b = 2 * big.dim - a - 2;
                auto mit = r.maps.find(b);
                if (mit == r.maps.end() || mit->second.empty())
                    continue;
                blk = inverse(big.P(a + 2).transpose()) * mit->second.transpose() * small.P(a).transpose();
            }
            const int sign = cech_sign(small.index, inserted_index(big.index, small.index));
            if (sign < 0)
                blk = -blk;
            const std::size_t ro = s_.offset(m - 1, r.from, a + 2), co = s_.offset(m, r.to, a);
            for (std::size_t i = 0; i < blk.rows(); ++i)
                for (std::size_t j = 0; j < blk.cols(); ++j)
                    out(ro + i, co + j) += blk(i, j);
        }
    return gamma_.emplace(key, std::move(out)).first->second;
}

bool positive_definite(const Matrix& m)
{
    if (m.rows() != m.cols() || m != m.transpose())
        return false;
    Matrix a = m;
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) <= 0)
            return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0)
                continue;
            Rational f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j)
                a(i, j) -= f * a(k, j);
        }
    }
    return true;
}

std::vector<StratumCheck> check_strata(const StrataComplex& s)
{
    StratumCheck hl{"hard Lefschetz", true, ""}, hr{"Hodge-Riemann", true, ""}, lc{"restriction commutes with L", true, ""};
    for (int m = 0; m <= s.n; ++m)
        for (std::size_t c = 0; c < s.components(m); ++c) {
            const auto& comp = s.strata[static_cast<std::size_t>(m)][c];
            const int d = comp.dim;
            auto power = [&](int a, int k) {
                Matrix acc = Matrix::identity(comp.b(a));
                for (int t = 0; t < k; ++t)
                    acc = comp.L(a + 2 * t) * acc;
                return acc;
            };
            for (int a = 0; a <= d; ++a) {
                if (!comp.b(a))
                    continue;
                Matrix l = power(a, d - a);
                if (l.rows() != l.cols() || rank(l) != comp.b(a)) {
                    hl.ok = false;
                    hl.detail = where(m, c) + " degree " + std::to_string(a);
                }
                if (a % 2 || !comp.is_tate(a))
                    continue;
                Matrix prim = 2 * d - a + 2 <= 2 * d ? kernel_basis(power(a, d - a + 1)) : Matrix::identity(comp.b(a));
                if (!prim.cols())
                    continue;
                Matrix q = prim.transpose() * comp.P(a) * l * prim;
                if ((a / 2) % 2)
                    q = -q;
                if (!positive_definite(q)) {
                    hr.ok = false;
                    hr.detail = where(m, c) + " degree " + std::to_string(a);
                }
            }
        }
    for (const auto& r : s.restrictions) {
        const auto& a = s.strata[static_cast<std::size_t>(r.m)][r.from];
        const auto& b = s.strata[static_cast<std::size_t>(r.m + 1)][r.to];
        for (const auto& [deg, mat] : r.maps) {
            auto up = r.maps.find(deg + 2);
            Matrix next = up == r.maps.end() ? Matrix(b.b(deg + 2), a.b(deg + 2)) : up->second;
            if (next * a.L(deg) != b.L(deg) * mat) {
                lc.ok = false;
                lc.detail = where(r.m, r.from) + " -> " + where(r.m + 1, r.to) + " degree " + std::to_string(deg);
            }
        }
    }
    return {hl, hr, lc};
}

StrataComplex no_divisor(const StratumComponent& x, std::string label)
{
    StrataComplex s;
    s.label = std::move(label);
    s.n = x.dim;
    s.strata.push_back({x});
    return make_strata(std::move(s));
}

StratumComponent point_component(std::vector<int> index, int label)
{
    StratumComponent c;
    c.index = std::move(index);
    c.label = label;
    c.dim = 0;
    c.betti = {{0, 1}};
    c.pairing = {{0, Matrix::identity(1)}};
    return c;
}

StratumComponent p1_component(std::vector<int> index, int label, const Rational& degree)
{
    StratumComponent c;
    c.index = std::move(index);
    c.label = label;
    c.dim = 1;
    c.betti = {{0, 1}, {2, 1}};
    c.pairing = {{0, Matrix::identity(1)}, {2, Matrix::identity(1)}};
    Matrix l(1, 1);
    l(0, 0) = degree;
    c.lefschetz = {{0, l}};
    return c;
}

} // namespace hodgeforge
