#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hodgeforge/error.hpp"
#include "hodgeforge/geometry_catalog.hpp"
#include "hodgeforge/rescaling.hpp"
#include "hodgeforge/weight_spectral.hpp"

using namespace hodgeforge;

TEST_CASE("stored realizations satisfy the fibre invariants")
{
    auto keys = wheel_realizations();
    CHECK(keys.size() == 9);
    for (const auto& key : keys) {
        CAPTURE(key);
        auto spec = wheel_spec(key);
        CHECK_NOTHROW(validate_wheel(spec));
        CHECK(lattice_product(fiber_class(), fiber_class()) == 0);
        for (const auto& c : spec.curves)
            CHECK(lattice_product(c, fiber_class()) == 0);
    }
}

TEST_CASE("broken intersection data is rejected")
{
    auto spec = wheel_spec(4);
    auto bad = spec;
    std::swap(bad.curves[0], bad.curves[1]);
    // Listed order 2,1,3,4: the second and third entries do not meet.
    CHECK_THROWS_WITH_AS(validate_wheel(bad), doctest::Contains("InvalidIntersectionData"), Error);

    bad = spec;
    bad.curves[0][1] += 1;
    bad.curves[1][1] -= 1;
    CHECK_THROWS_WITH_AS(validate_wheel(bad), doctest::Contains("InvalidIntersectionData"), Error);

    bad = spec;
    bad.curves.pop_back();
    bad.d = 3;
    CHECK_THROWS_WITH_AS(validate_wheel(bad), doctest::Contains("fiber"), Error);

    bad = spec;
    bad.kahler = std::vector<long>(kLatticeRank, 0);
    bad.kahler[1] = -1;
    CHECK_THROWS_WITH_AS(validate_wheel(bad), doctest::Contains("Kahler"), Error);

    CHECK_THROWS_WITH_AS(wheel_strata(bad), doctest::Contains("InvalidIntersectionData"), Error);
    CHECK_THROWS_WITH_AS(wheel_spec(10), doctest::Contains("OutOfRange"), Error);
    CHECK_THROWS_WITH_AS(wheel_spec("12"), doctest::Contains("OutOfRange"), Error);
}

TEST_CASE("strata shape")
{
    for (int d = 2; d <= 9; ++d) {
        auto s = wheel_strata(d);
        CHECK(s.components(1) == static_cast<std::size_t>(d));
        CHECK(s.components(2) == static_cast<std::size_t>(d));
        CHECK(s.dim(0, 2) == 10);
        CHECK(s.dim(1, 0) == static_cast<std::size_t>(d));
        CHECK(s.dim(1, 2) == static_cast<std::size_t>(d));
        CHECK(s.dim(2, 0) == static_cast<std::size_t>(d));
        CHECK(s.hodge_tate());
        // chi(D) = 2d - d.
        long chi = 0;
        for (int a = 0; a <= 2; ++a)
            chi += (a % 2 ? -1 : 1) * static_cast<long>(s.dim(1, a));
        chi -= static_cast<long>(s.dim(2, 0));
        CHECK(chi == d);
        for (const auto& c : check_strata(s))
            CHECK(c.ok);
    }
}

TEST_CASE("incidence ranks")
{
    auto two = wheel_strata(2);
    StrataMaps m2(two);
    CHECK(m2.restriction(1, 0).rows() == 2);
    CHECK(rank(m2.restriction(1, 0)) == 1);

    auto three = wheel_strata(3);
    StrataMaps m3(three);
    CHECK(rank(m3.restriction(1, 0)) == 2);
    CHECK(rank(m3.gysin(2, 0)) == 2);
    // Signed incidence of a cycle: rows sum to zero.
    Matrix ones(1, 3);
    for (std::size_t i = 0; i < 3; ++i)
        ones(0, i) = 1;
    CHECK((m3.restriction(1, 0) * ones.transpose()).is_zero());

    // Each component goes to its own class; the three classes are independent.
    Matrix g = m3.gysin(1, 0);
    CHECK(rank(g) == 3);
}

TEST_CASE("Euler oracle")
{
    CHECK(wheel_euler_oracle(2).y == 10);
    CHECK(wheel_euler_oracle(2).y_b == 0);
    CHECK(wheel_euler_oracle(2).relative == 10);
    CHECK(wheel_euler_oracle(9).relative == 3);
    CHECK_THROWS_WITH_AS(wheel_euler_oracle(1), doctest::Contains("OutOfRange"), Error);
    CHECK_THROWS_WITH_AS(wheel_euler_oracle(10), doctest::Contains("OutOfRange"), Error);
    for (int d = 2; d <= 9; ++d)
        CHECK(e2_relative(wheel_strata(d)).euler() == wheel_euler_oracle(d).relative);
}

TEST_CASE("two realizations of d=3 agree")
{
    auto a = wheel_strata(wheel_spec("3"));
    auto b = wheel_strata(wheel_spec("3alt"));
    for (auto kind : {PageKind::Relative, PageKind::Nearby, PageKind::Open, PageKind::Divisor})
        CHECK(compute_page(a, kind).graded == compute_page(b, kind).graded);
    CHECK(f_pq(assemble_rescaling(a)) == f_pq(assemble_rescaling(b)));
}

TEST_CASE("rescaling model of every wheel is Hodge-Tate and special")
{
    for (int d = 2; d <= 9; ++d) {
        CAPTURE(d);
        auto m = assemble_rescaling(wheel_strata(d));
        CHECK(m.dim() == static_cast<std::size_t>(12 - d));
        CHECK(ht_condition(m).hodge_tate);
        CHECK(f_pq(m) == h_pq(m));
        CHECK(speciality(m).special);
        HodgeTable want = {{{0, 2}, 1}, {{1, 1}, static_cast<std::size_t>(10 - d)}, {{2, 0}, 1}};
        CHECK(h_pq(m) == want);
        // N: weight 4 -> weight 2 -> weight 0, nu^2 nonzero.
        const Matrix& n = m.components.at(2).N;
        CHECK(rank(n) == 2);
        CHECK_FALSE((n * n).is_zero());
    }
}
