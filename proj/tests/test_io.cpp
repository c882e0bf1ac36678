#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hodgeforge/error.hpp"
#include "hodgeforge/geometry_catalog.hpp"
#include "hodgeforge/io.hpp"
#include "hodgeforge/weight_spectral.hpp"

using namespace hodgeforge;

namespace {

std::string data(const std::string& name)
{
    return std::string(HODGEFORGE_DATA_DIR) + "/" + name;
}

} // namespace

TEST_CASE("rationals as strings")
{
    CHECK(rational_json(Rational(3, 6)) == "1/2");
    CHECK(rational_json(Rational(-4)) == "-4");
    CHECK(rational_from_json(Json("-6/4"), "x") == Rational(-3, 2));
    CHECK(rational_from_json(Json(7), "x") == 7);
    CHECK_THROWS_WITH_AS(rational_from_json(Json(0.5), "c"), doctest::Contains("field 'c'"), Error);
    CHECK_THROWS_WITH_AS(rational_from_json(Json("1/0"), "c"), doctest::Contains("SchemaError"), Error);
    Rational big("123456789012345678901234567891/7");
    big.canonicalize();
    CHECK(rational_from_json(rational_json(big), "b") == big);
}

TEST_CASE("strata round trip keeps every page")
{
    for (int d : {2, 5}) {
        StrataComplex s = wheel_strata(d);
        StrataComplex t = strata_from_json(parse_json_text(strata_json(s).dump()));
        CHECK(strata_json(t) == strata_json(s));
        for (PageKind k : {PageKind::Relative, PageKind::Nearby, PageKind::Open, PageKind::Divisor})
            CHECK(compute_page(t, k).graded == compute_page(s, k).graded);
    }
    StrataComplex c = strata_from_json(load_json_file(data("custom.json")));
    CHECK(c.n == 2);
    CHECK(c.components(1) == 1);
    CHECK(full_suite(c).ok());
}

TEST_CASE("schema errors name the field or line")
{
    CHECK_THROWS_WITH_AS(parse_json_text("{\n \"n\": 2,\n \"strata\": [,]\n}", "bad.json"),
                         doctest::Contains("bad.json:3"), Error);
    Json j = strata_json(wheel_strata(3));
    j["strata"][1][0].erase("betti");
    CHECK_THROWS_WITH_AS(strata_from_json(j), doctest::Contains("strata[1][0].betti"), Error);
    j = strata_json(wheel_strata(3));
    j["restrictions"][0]["maps"]["0"]["entries"][0][0] = "x";
    CHECK_THROWS_WITH_AS(strata_from_json(j), doctest::Contains("restrictions[0].maps.0.entries[0][0]"), Error);
    j = strata_json(wheel_strata(3));
    j["restrictions"][0]["maps"]["0"]["rows"] = 2;
    CHECK_THROWS_AS(strata_from_json(j), Error);
    CHECK_THROWS_WITH_AS(polytope_from_json(Json::parse(R"({"vertices": [[1, 0]]})")),
                         doctest::Contains("vertices[0]"), Error);
    CHECK_THROWS_WITH_AS(laurent_from_json(Json::parse(R"({"terms": [{"exponent": [1, 0, 0]}]})")),
                         doctest::Contains("terms[0].coefficient"), Error);
    CHECK_THROWS_WITH_AS(load_json_file(data("missing.json")), doctest::Contains("IOError"), Error);
}

TEST_CASE("shipped inputs parse")
{
    CHECK(polytope_from_json(load_json_file(data("p3.json"))) == p3_polytope());
    CHECK(polytope_from_json(load_json_file(data("octahedron.json"))) == octahedron_polytope());
    auto l = laurent_from_json(load_json_file(data("std.json")));
    CHECK(l.support.size() == 4);
    CHECK(laurent_from_json(laurent_json(l)).support == l.support);
    Fan p2 = fan_from_json(load_json_file(data("p2.json")));
    CHECK(sr_cohomology(p2).betti() == std::vector<std::size_t>{1, 1, 1});
    CHECK(fan_from_json(fan_json(p2)).rays == p2.rays);
    CHECK(sr_cohomology(fan_from_json(load_json_file(data("p3_fan.json")))).betti() ==
          std::vector<std::size_t>{1, 1, 1, 1});
    CHECK(sr_cohomology(fan_from_json(load_json_file(data("p1cubed_fan.json")))).betti() ==
          std::vector<std::size_t>{1, 3, 3, 1});
}

TEST_CASE("digest")
{
    CHECK(digest("") == "cbf29ce484222325");
    CHECK(digest("a") == "af63dc4c8601ec8c");
    CHECK(digest("ab") != digest("ba"));
}
