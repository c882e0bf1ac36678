#include "hodgeforge/rescaling.hpp"

#include "hodgeforge/error.hpp"

#include <algorithm>

namespace hodgeforge {

std::size_t RescalingModel::dim() const
{
    std::size_t n = 0;
    for (const auto& [k, c] : components)
        n += c.dim();
    return n;
}

bool integral_weights(const RescalingComponent& c)
{
    return std::all_of(c.lambda.begin(), c.lambda.end(), [](const Rational& q) { return q.get_den() == 1; });
}

Filtration hodge_filtration(const RescalingComponent& c)
{
    if (!integral_weights(c))
        throw Error("NonIntegralWeights", "lambda-weights are not integers");
    std::vector<int> w;
    for (const auto& q : c.lambda)
        w.push_back(static_cast<int>(q.get_num().get_si()));
    return grading_to_filtration(w);
}

Filtration weight_filtration(const RescalingComponent& c, int degree)
{
    return weight_filtration(make_nilpotent(c.N), degree);
}

RescalingModel make_rescaling(std::map<int, RescalingComponent> components, std::string label)
{
    for (auto& [k, c] : components) {
        const std::size_t n = c.dim();
        if (c.N.rows() == 0 && c.N.cols() == 0 && n)
            c.N = Matrix(n, n);
        if (c.N.rows() != n || c.N.cols() != n)
            throw Error("ShapeMismatch", "N_" + std::to_string(k) + " does not match the weight count");
        make_nilpotent(c.N);
        if (integral_weights(c) && n && !maps_into(c.N, hodge_filtration(c), 1))
            throw Error("NotCompatible", "N_" + std::to_string(k) + " does not map F_i into F_{i+1}");
    }
    for (auto it = components.begin(); it != components.end();)
        it = it->second.dim() == 0 ? components.erase(it) : std::next(it);
    return RescalingModel{std::move(components), std::move(label)};
}

RescalingComponent component_from_ints(const std::vector<int>& lambda, const Matrix& n)
{
    RescalingComponent c;
    for (int l : lambda)
        c.lambda.emplace_back(l);
    c.N = n;
    return c;
}

HodgeTable f_pq(const RescalingModel& m)
{
    HodgeTable t;
    for (const auto& [k, c] : m.components)
        for (const auto& [a, n] : hodge_filtration(c).graded_dims())
            t[{-a, k + a}] += n;
    return t;
}

HodgeTable h_pq(const RescalingModel& m)
{
    HodgeTable t;
    for (const auto& [k, c] : m.components)
        for (const auto& [w, n] : weight_filtration(c, k).graded_dims())
            if (w % 2 == 0)
                t[{w / 2, k - w / 2}] += n;
    return t;
}

RescalingHT ht_condition(const RescalingModel& m, int fw_shift)
{
    RescalingHT out;
    for (const auto& [k, c] : m.components) {
        DegreeHT d;
        d.degree = k;
        d.model = make_mixed_hodge(hodge_filtration(c), weight_filtration(c, k), m.label + " V^" + std::to_string(k));
        d.verdict = is_hodge_tate(d.model);
        d.literal = fw_literal(d.model, fw_shift);
        out.hodge_tate = out.hodge_tate && d.verdict.hodge_tate;
        out.degrees.push_back(std::move(d));
    }
    return out;
}

OpposedVerdict saito_opposed(const Filtration& F, const Filtration& G, const Matrix& N, int shift)
{
    if (F.ambient_dim() != G.ambient_dim() || N.rows() != F.ambient_dim())
        throw Error("AmbientMismatch", "F, G and N live on different spaces");
    OpposedVerdict v;
    const std::size_t n = F.ambient_dim();
    if (n == 0)
        return v;
    for (int k = G.lo(); k < G.hi(); ++k)
        if (!subspace_contains(G.step(k), N * G.step(k)))
            v.n_invariant = false;
    // F_{-p} is V for p <= -F.hi and 0 for p > -F.lo; G_{p+1+shift} likewise.
    int plo = std::min(-F.hi(), G.lo() - 1 - shift) - 1;
    int phi = std::max(-F.lo() + 1, G.hi() - 1 - shift) + 1;
    for (int p = plo; p <= phi; ++p) {
        Matrix f = F.step(-p), g = G.step(p + 1 + shift);
        if (f.cols() + g.cols() != n || rank(Matrix::hstack(f, g)) != n) {
            v.opposed = false;
            v.failing_p.push_back(p);
        }
    }
    v.opposed = v.opposed && v.n_invariant;
    return v;
}

Filtration even_part(const Filtration& w)
{
    const std::size_t n = w.ambient_dim();
    if (n == 0)
        return w;
    auto floor_half = [](int a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); };
    std::vector<std::pair<int, Matrix>> steps;
    for (int l = floor_half(w.lo()) - 1; l <= floor_half(w.hi()) + 1; ++l)
        steps.emplace_back(l, w.step(2 * l));
    return make_filtration(n, steps);
}

SpecialityVerdict speciality(const RescalingModel& m, int shift)
{
    SpecialityVerdict out;
    for (const auto& [k, c] : m.components) {
        Filtration F = hodge_filtration(c);
        Filtration G = even_part(weight_filtration(c, k));
        OpposedVerdict v = saito_opposed(F, G, c.N, shift);
        if (!v.opposed) {
            out.special = false;
            for (int p : v.failing_p)
                out.failing.emplace_back(k, p);
        }
        if (shift != 0 && !saito_opposed(F, G, c.N, 0).opposed)
            out.literal_special = false;
        if (shift == 0)
            out.literal_special = out.special;
    }
    return out;
}

std::vector<int> calibrate_saito_shift()
{
    RescalingModel m = p2_fano_model();
    std::vector<int> ok;
    for (int s = -8; s <= 8; ++s)
        if (speciality(m, s).special)
            ok.push_back(s);
    return ok;
}

RescalingModel tate_twist_model(const RescalingModel& m, int half_steps)
{
    std::map<int, RescalingComponent> comps;
    Rational shift(half_steps, 2);
    shift.canonicalize();
    for (const auto& [k, c] : m.components) {
        RescalingComponent t = c;
        for (auto& q : t.lambda)
            q += shift;
        comps[k + half_steps] = std::move(t);
    }
    return RescalingModel{std::move(comps), m.label};
}

bool operator==(const RescalingModel& a, const RescalingModel& b)
{
    if (a.components.size() != b.components.size())
        return false;
    for (const auto& [k, c] : a.components) {
        auto it = b.components.find(k);
        if (it == b.components.end() || it->second.lambda != c.lambda || it->second.N != c.N)
            return false;
    }
    return true;
}

namespace {

Rational small_int(std::mt19937_64& rng, int lo, int hi)
{
    return Rational(std::uniform_int_distribution<int>(lo, hi)(rng));
}

// Random g with g(F_i) = F_i: column j only touches rows of weight >= lambda_j.
Matrix random_f_preserving(std::mt19937_64& rng, const std::vector<Rational>& lambda)
{
    const std::size_t n = lambda.size();
    while (true) {
        Matrix g(n, n);
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t j = 0; j < n; ++j)
                if (lambda[l] >= lambda[j])
                    g(l, j) = small_int(rng, -2, 2);
        if (rank(g) == n)
            return g;
    }
}

} // namespace

RescalingModel random_ht_model(std::mt19937_64& rng, std::size_t max_dim)
{
    std::map<int, RescalingComponent> comps;
    const std::size_t total = 1 + rng() % std::max<std::size_t>(max_dim, 1);
    std::size_t used = 0;
    while (used < total) {
        const int k = static_cast<int>(rng() % 7) - 2;
        auto& c = comps[k];
        std::vector<Rational> lambda = c.lambda;
        std::vector<std::pair<std::size_t, std::size_t>> links;
        // A chain of length L carries weights k+L-1-2t, even iff L = k+1 mod 2.
        std::size_t L = 1 + rng() % 4;
        if ((static_cast<int>(L) - k - 1) % 2 != 0)
            ++L;
        L = std::min(L, total - used + 1);
        if ((static_cast<int>(L) - k - 1) % 2 != 0)
            break;
        const int top = (k + static_cast<int>(L) - 1) / 2;
        const std::size_t base = lambda.size();
        for (std::size_t t = 0; t < L; ++t) {
            lambda.emplace_back(top - static_cast<int>(t));
            if (t + 1 < L)
                links.emplace_back(base + t, base + t + 1);
        }
        Matrix N(lambda.size(), lambda.size());
        if (c.N.rows())
            N.set_block(0, 0, c.N);
        for (auto [a, b] : links)
            N(b, a) = 1;
        c.lambda = std::move(lambda);
        c.N = std::move(N);
        used += L;
    }
    for (auto it = comps.begin(); it != comps.end();)
        it = it->second.dim() == 0 ? comps.erase(it) : std::next(it);
    if (comps.empty())
        comps[0] = component_from_ints({0}, Matrix(1, 1));
    for (auto& [k, c] : comps) {
        Matrix g = random_f_preserving(rng, c.lambda);
        c.N = g * c.N * inverse(g);
    }
    return make_rescaling(std::move(comps), "random HT");
}

RescalingModel random_compatible_model(std::mt19937_64& rng, std::size_t max_dim)
{
    std::map<int, RescalingComponent> comps;
    const int k = static_cast<int>(rng() % 5) - 1;
    const std::size_t n = 1 + rng() % std::max<std::size_t>(max_dim, 1);
    RescalingComponent c;
    for (std::size_t i = 0; i < n; ++i)
        c.lambda.push_back(small_int(rng, -1, 3));
    // Strictly lower triangular, so nilpotent; never lowers lambda by more than one.
    c.N = Matrix(n, n);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < l; ++j)
            if (c.lambda[l] >= c.lambda[j] - 1 && rng() % 2)
                c.N(l, j) = small_int(rng, -2, 2);
    comps[k] = std::move(c);
    return make_rescaling(std::move(comps), "random compatible");
}

RescalingModel tate_model(int k)
{
    return make_rescaling({{2 * k, component_from_ints({k}, Matrix(1, 1))}}, "T(-" + std::to_string(k) + ")");
}

RescalingModel p2_fano_model()
{
    Matrix N = Matrix::from_ints({{0, 0, 0}, {3, 0, 0}, {0, 3, 0}});
    return make_rescaling({{2, component_from_ints({2, 1, 0}, N)}}, "P2");
}

} // namespace hodgeforge
