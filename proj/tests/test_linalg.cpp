#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hodgeforge/error.hpp"
#include "hodgeforge/linalg.hpp"

#include <functional>
#include <random>

using namespace hodgeforge;

namespace {

// Laplace expansion along the first row; only used on small minors.
Rational laplace(const Matrix& m)
{
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    if (n == 1)
        return m(0, 0);
    Rational acc = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (m(0, c) == 0)
            continue;
        std::vector<std::size_t> rows, cols;
        for (std::size_t i = 1; i < n; ++i)
            rows.push_back(i);
        for (std::size_t j = 0; j < n; ++j)
            if (j != c)
                cols.push_back(j);
        Matrix sub = m.rows_subset(rows).transpose().rows_subset(cols).transpose();
        Rational term = m(0, c) * laplace(sub);
        acc += (c % 2 == 0) ? term : Rational(-term);
    }
    return acc;
}

void combinations(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn)
{
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        if (fn(idx))
            return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

// Largest k with a nonzero k x k minor.
std::size_t minor_rank(const Matrix& m)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k <= std::min(m.rows(), m.cols()); ++k) {
        bool found = false;
        combinations(m.rows(), k, [&](const std::vector<std::size_t>& r) {
            combinations(m.cols(), k, [&](const std::vector<std::size_t>& c) {
                Matrix sub = m.rows_subset(r).transpose().rows_subset(c).transpose();
                if (laplace(sub) != 0)
                    found = true;
                return found;
            });
            return found;
        });
        if (!found)
            break;
        best = k;
    }
    return best;
}

Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo = -3, int hi = 3)
{
    std::uniform_int_distribution<int> dist(lo, hi);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
        {
            m(i, j) = Rational(dist(rng), 1 + (dist(rng) + 3) % 3);
            m(i, j).canonicalize();
        }
    return m;
}

Matrix low_rank(std::mt19937& rng, std::size_t r, std::size_t c, std::size_t k)
{
    return random_matrix(rng, r, k) * random_matrix(rng, k, c);
}

} // namespace

TEST_CASE("rational parsing canonicalizes")
{
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(to_string(parse_rational("-6/4")) == "-3/2");
    CHECK(to_string(parse_rational("5")) == "5");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("x"), Error);
}

TEST_CASE("rref examples")
{
    auto id = rref(Matrix::identity(2));
    CHECK(id.reduced == Matrix::identity(2));
    CHECK(id.pivots == std::vector<std::size_t>{0, 1});
    CHECK(id.rank == 2);

    auto r = rref(Matrix::from_ints({{1, 2}, {2, 4}}));
    CHECK(r.reduced == Matrix::from_ints({{1, 2}, {0, 0}}));
    CHECK(r.pivots == std::vector<std::size_t>{0});
    CHECK(r.rank == 1);
}

TEST_CASE("rank agrees with the minor oracle")
{
    std::mt19937 rng(11);
    for (int t = 0; t < 12; ++t) {
        Matrix m = (t % 3 == 0) ? random_matrix(rng, 5, 7) : low_rank(rng, 5, 7, 1 + t % 4);
        CHECK(rank(m) == minor_rank(m));
    }
}

TEST_CASE("rref is idempotent and rank-nullity holds")
{
    std::mt19937 rng(5);
    for (int t = 0; t < 20; ++t) {
        Matrix m = low_rank(rng, 4 + t % 3, 6, 1 + t % 5);
        auto once = rref(m);
        CHECK(rref(once.reduced).reduced == once.reduced);
        Matrix k = kernel_basis(m);
        CHECK(once.rank + k.cols() == m.cols());
        CHECK((m * k).is_zero());
        CHECK(rank(k) == k.cols());
    }
}

TEST_CASE("determinant against Laplace")
{
    std::mt19937 rng(9);
    for (int t = 0; t < 10; ++t) {
        Matrix m = random_matrix(rng, 4, 4);
        CHECK(determinant(m) == laplace(m));
    }
    Matrix a = Matrix::from_ints({{2, 1}, {1, 1}});
    CHECK(a * inverse(a) == Matrix::identity(2));
    CHECK_THROWS_AS(inverse(Matrix::from_ints({{1, 2}, {2, 4}})), Error);
}

TEST_CASE("kernel examples")
{
    CHECK(kernel_basis(Matrix::identity(3)).cols() == 0);
    CHECK(kernel_basis(Matrix(3, 3)).cols() == 3);
    Matrix j3 = Matrix::from_ints({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
    Matrix k = kernel_basis(j3);
    REQUIRE(k.cols() == 1);
    CHECK(same_span(k, Matrix::column({1, 0, 0})));
}

TEST_CASE("meet and sum")
{
    Matrix a = Matrix::from_ints({{1, 0}, {1, 0}, {0, 1}});
    Matrix b = Matrix::from_ints({{1, 0}, {0, 1}, {0, 0}});
    CHECK(same_span(subspace_meet(a, a), a));
    CHECK(same_span(subspace_meet(a, b), Matrix::column({1, 1, 0})));

    Matrix p = Matrix::from_ints({{1, 0}, {0, 1}, {0, 0}, {0, 0}});
    Matrix q = Matrix::from_ints({{0, 0}, {0, 0}, {1, 0}, {0, 1}});
    CHECK(subspace_meet(p, q).cols() == 0);

    CHECK(same_span(subspace_sum(a, a), a));
    CHECK(subspace_sum(Matrix::column({1, 0}), Matrix::column({1, 1})).cols() == 2);
    CHECK_THROWS_AS(subspace_meet(a, p), Error);
    CHECK_THROWS_AS(subspace_sum(a, p), Error);
}

TEST_CASE("quotient by a line")
{
    Matrix line = Matrix::column({1, 1, 1});
    Matrix q = quotient_matrix(3, line);
    CHECK(q.rows() == 2);
    CHECK(q.cols() == 3);
    CHECK(rank(q) == 2);
    CHECK(same_span(kernel_basis(q), line));
}

TEST_CASE("modularity on random triples")
{
    std::mt19937 rng(3);
    for (int t = 0; t < 25; ++t) {
        Matrix a = low_rank(rng, 6, 3, 1 + t % 3);
        Matrix b = low_rank(rng, 6, 4, 1 + (t / 3) % 4);
        std::size_t da = rank(a), db = rank(b);
        CHECK(subspace_sum(a, b).cols() + subspace_meet(a, b).cols() == da + db);
    }
}

TEST_CASE("solve and coordinates")
{
    Matrix a = Matrix::from_ints({{1, 1}, {0, 1}, {1, 0}});
    Matrix x = solve(a, Matrix::column({3, 1, 2}));
    CHECK(x == Matrix::column({2, 1}));
    CHECK_THROWS_AS(solve(a, Matrix::column({1, 0, 0})), Error);
    CHECK(coordinates(a, Matrix::column({3, 1, 2})) == Matrix::column({2, 1}));
}
