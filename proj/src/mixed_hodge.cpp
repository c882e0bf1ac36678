#include "hodgeforge/mixed_hodge.hpp"

#include "hodgeforge/error.hpp"

#include <algorithm>
#include <sstream>

namespace hodgeforge {

MixedHodgeModel make_mixed_hodge(const Filtration& F, const Filtration& W, std::string label)
{
    if (F.ambient_dim() != W.ambient_dim())
        throw Error("AmbientMismatch", "F and W live on different spaces");
    return MixedHodgeModel{F.ambient_dim(), F, W, std::move(label)};
}

HodgeCells graded_hodge_numbers(const MixedHodgeModel& m)
{
    HodgeCells out;
    if (m.dim == 0)
        return out;
    for (int w = m.W.lo(); w <= m.W.hi(); ++w) {
        if (m.W.graded_dim(w) == 0)
            continue;
        Matrix below = m.W.step(w - 1);
        Matrix ww = m.W.step(w);
        std::size_t prev = below.cols();
        for (int a = m.F.lo(); a <= m.F.hi(); ++a) {
            std::size_t cur = rank(Matrix::hstack(subspace_meet(m.F.step(a), ww), below));
            if (cur > prev)
                out[{-a, w}] = cur - prev;
            prev = cur;
        }
    }
    return out;
}

HTVerdict is_hodge_tate(const MixedHodgeModel& m)
{
    HTVerdict v;
    for (const auto& [cell, n] : graded_hodge_numbers(m)) {
        if (n == 0)
            continue;
        const auto [p, w] = cell;
        if (w % 2 != 0 || w != 2 * p) {
            v.hodge_tate = false;
            v.violations.push_back(cell);
        }
    }
    return v;
}

FwVerdict fw_literal(const MixedHodgeModel& m, int fw_shift)
{
    FwVerdict v;
    if (m.dim == 0)
        return v;
    // F_{-j} runs from 0 (j >= -F.lo+1) to V (j <= -F.hi); W likewise.
    int jlo = std::min(-m.F.hi(), (m.W.lo() - 2 - fw_shift) / 2) - 2;
    int jhi = std::max(-m.F.lo(), (m.W.hi() - 2 - fw_shift) / 2) + 2;
    for (int j = jlo; j <= jhi; ++j) {
        Matrix f = m.F.step(-j);
        Matrix w = m.W.step(2 * j + 2 + fw_shift);
        bool ok = f.cols() + w.cols() == m.dim && rank(Matrix::hstack(f, w)) == m.dim;
        if (!ok) {
            v.opposed = false;
            v.failing_j.push_back(j);
        }
    }
    return v;
}

MixedHodgeModel p2_quantum_model()
{
    // Basis 1, h, h^2 of HH_0(P^2); lambda-weight n - p with p the form degree.
    Filtration F = grading_to_filtration({2, 1, 0});
    Matrix N = Matrix::from_ints({{0, 0, 0}, {3, 0, 0}, {0, 3, 0}});
    Filtration W = weight_filtration(make_nilpotent(N), 2);
    return make_mixed_hodge(F, W, "P2 quantum, k=2");
}

std::vector<int> calibrate_fw_shift()
{
    MixedHodgeModel m = p2_quantum_model();
    std::vector<int> ok;
    for (int s = -8; s <= 8; ++s)
        if (fw_literal(m, s).opposed)
            ok.push_back(s);
    return ok;
}

std::size_t HodgePolynomial::total() const
{
    std::size_t t = 0;
    for (const auto& [c, n] : coefficients)
        t += n;
    return t;
}

bool HodgePolynomial::diagonal() const
{
    for (const auto& [c, n] : coefficients)
        if (n && c.second != 2 * c.first)
            return false;
    return true;
}

std::string HodgePolynomial::str() const
{
    if (coefficients.empty())
        return "0";
    auto pw = [](const char* v, int e) -> std::string {
        if (e == 0)
            return "";
        if (e == 1)
            return v;
        return std::string(v) + "^" + std::to_string(e);
    };
    std::ostringstream os;
    bool first = true;
    for (const auto& [c, n] : coefficients) {
        if (!n)
            continue;
        std::string mono = pw("x", c.first);
        std::string y = pw("y", c.second - c.first);
        if (!mono.empty() && !y.empty())
            mono += "*";
        mono += y;
        os << (first ? "" : " + ");
        if (mono.empty())
            os << n;
        else if (n == 1)
            os << mono;
        else
            os << n << "*" << mono;
        first = false;
    }
    return os.str();
}

HodgePolynomial hodge_polynomial(const MixedHodgeModel& m)
{
    return HodgePolynomial{graded_hodge_numbers(m)};
}

MixedHodgeModel tate_twist(const MixedHodgeModel& m, int k)
{
    return MixedHodgeModel{m.dim, m.F.shifted(k), m.W.shifted(-2 * k), m.label};
}

namespace {

bool compatible(const Matrix& f, const Filtration& a, const Filtration& b)
{
    if (a.ambient_dim() == 0)
        return true;
    for (int m = std::min(a.lo(), b.lo()) - 1; m <= std::max(a.hi(), b.hi()) + 1; ++m)
        if (!subspace_contains(b.step(m), f * a.step(m)))
            return false;
    return true;
}

// f(G_m A) = f(A) ∩ G_m B for injective f.
bool strict_injection(const Matrix& f, const Filtration& a, const Filtration& b)
{
    Matrix img = canonical_basis(f);
    const int lo = std::min(a.ambient_dim() ? a.lo() : 0, b.ambient_dim() ? b.lo() : 0) - 1;
    const int hi = std::max(a.ambient_dim() ? a.hi() : 0, b.ambient_dim() ? b.hi() : 0) + 1;
    for (int m = lo; m <= hi; ++m)
        if (!same_span(f * a.step(m), subspace_meet(img, b.step(m))))
            return false;
    return true;
}

// g(G_m B) = G_m C for surjective g.
bool strict_surjection(const Matrix& g, const Filtration& b, const Filtration& c)
{
    const int lo = std::min(b.ambient_dim() ? b.lo() : 0, c.ambient_dim() ? c.lo() : 0) - 1;
    const int hi = std::max(b.ambient_dim() ? b.hi() : 0, c.ambient_dim() ? c.hi() : 0) + 1;
    for (int m = lo; m <= hi; ++m)
        if (!same_span(g * b.step(m), c.step(m)))
            return false;
    return true;
}

} // namespace

TwoOfThreeVerdict ht_two_of_three(const MixedHodgeModel& left, const MixedHodgeModel& middle,
                                  const MixedHodgeModel& right, const Matrix& f, const Matrix& g)
{
    if (f.rows() != middle.dim || f.cols() != left.dim || g.rows() != right.dim || g.cols() != middle.dim)
        throw Error("NotExact", "map shapes do not match the three spaces");
    if (rank(f) != left.dim)
        throw Error("NotExact", "left map is not injective");
    if (rank(g) != right.dim)
        throw Error("NotExact", "right map is not surjective");
    if (!(g * f).is_zero() || left.dim + right.dim != middle.dim)
        throw Error("NotExact", "image of the left map differs from the kernel of the right map");

    if (!compatible(f, left.F, middle.F) || !compatible(f, left.W, middle.W) ||
        !compatible(g, middle.F, right.F) || !compatible(g, middle.W, right.W))
        throw Error("NotStrict", "maps are not compatible with the filtrations");
    if (!strict_injection(f, left.F, middle.F) || !strict_injection(f, left.W, middle.W) ||
        !strict_surjection(g, middle.F, right.F) || !strict_surjection(g, middle.W, right.W))
        throw Error("NotStrict", "maps are not strict");

    HodgeCells l = graded_hodge_numbers(left), mid = graded_hodge_numbers(middle), r = graded_hodge_numbers(right);
    HodgeCells sum = l;
    for (const auto& [c, n] : r)
        sum[c] += n;
    for (auto it = sum.begin(); it != sum.end();)
        it = it->second == 0 ? sum.erase(it) : std::next(it);
    if (sum != mid)
        throw Error("NotStrict", "bigraded sequence is not exact");

    TwoOfThreeVerdict v;
    v.left_ht = is_hodge_tate(left).hodge_tate;
    v.middle_ht = is_hodge_tate(middle).hodge_tate;
    v.right_ht = is_hodge_tate(right).hodge_tate;
    v.consistent = !(v.left_ht && v.right_ht) || v.middle_ht;
    return v;
}

bool operator==(const MixedHodgeModel& a, const MixedHodgeModel& b)
{
    return a.dim == b.dim && a.F == b.F && a.W == b.W;
}

} // namespace hodgeforge
