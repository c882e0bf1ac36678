#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hodgeforge/error.hpp"
#include "hodgeforge/toric.hpp"
#include "hodgeforge/weight_spectral.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace hodgeforge;

namespace {

// Integral of D_a D_b D_c through the Stanley-Reisner product matrices.
Rational sr_triple(const SRCohomology& sr, int a, int b, int c)
{
    Matrix v = Matrix::identity(1);
    v = sr.product[0][static_cast<std::size_t>(a)] * v;
    v = sr.product[1][static_cast<std::size_t>(b)] * v;
    v = sr.product[2][static_cast<std::size_t>(c)] * v;
    return v(0, 0) * sr.top_degree[0];
}

long min_pairing(const LatticePolytope& p, const IVec& u)
{
    long m = dot(p.vertices[0], u);
    for (const auto& v : p.vertices)
        m = std::min(m, dot(v, u));
    return m;
}

const ToricPipeline& p3_pipeline()
{
    static ToricPipeline t = run_toric(p3_polytope());
    return t;
}

const ToricPipeline& octa_pipeline()
{
    static ToricPipeline t = run_toric(octahedron_polytope());
    return t;
}

} // namespace

TEST_CASE("reflexive validation")
{
    auto p = make_polytope(p3_polytope());
    CHECK(p.vertices.size() == 4);
    CHECK(p.facets.size() == 4);
    CHECK(p.edges.size() == 6);
    auto normals = validate_reflexive(p);
    std::set<IVec> got(normals.begin(), normals.end());
    CHECK(got == std::set<IVec>{{-1, -1, -1}, {3, -1, -1}, {-1, 3, -1}, {-1, -1, 3}});

    std::vector<IVec> cube;
    for (long x : {-1, 1})
        for (long y : {-1, 1})
            for (long z : {-1, 1})
                cube.push_back({x, y, z});
    auto c = make_polytope(cube);
    CHECK(c.facets.size() == 6);
    CHECK_THROWS_WITH_AS(validate_reflexive(c), doctest::Contains("FacetNotUnimodular"), Error);

    std::vector<IVec> shifted;
    for (auto v : p3_polytope()) {
        v[0] += 2;
        shifted.push_back(v);
    }
    CHECK_THROWS_WITH_AS(validate_reflexive(make_polytope(shifted)), doctest::Contains("NotReflexive"), Error);
    CHECK_THROWS_WITH_AS(make_polytope({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}),
                         doctest::Contains("NotFullDimensional"), Error);
}

TEST_CASE("interior lattice points do not become vertices")
{
    auto pts = octahedron_polytope();
    pts.push_back({0, 0, 0});
    auto p = make_polytope(pts);
    CHECK(p.vertices.size() == 6);
    CHECK(p.facets.size() == 8);
    CHECK(p.edges.size() == 12);
}

TEST_CASE("spanning fan and refinement")
{
    auto p = make_polytope(p3_polytope());
    Fan n = spanning_fan(p);
    CHECK(n.rays.size() == 4);
    CHECK(n.cones.size() == 4);
    CHECK_FALSE(is_smooth(n));
    CHECK(polar_boundary_points(p).size() == 34);
    Fan r = smooth_refine(n, p);
    CHECK(r.rays.size() == 34);
    CHECK(r.faces(2).size() == 96);
    CHECK(r.cones.size() == 64);
    CHECK(is_smooth(r));
    CHECK(is_complete(r));
    for (const auto& u : r.rays)
        CHECK(min_pairing(p, u) == -1);

    auto o = make_polytope(octahedron_polytope());
    Fan no = spanning_fan(o);
    CHECK(no.rays.size() == 8);
    CHECK(no.cones.size() == 6);
    CHECK_FALSE(no.simplicial());
    Fan ro = smooth_refine(no, o);
    CHECK(ro.rays.size() == 26);
    CHECK(ro.cones.size() == 48);
    CHECK(is_smooth(ro));
    CHECK(is_complete(ro));
    // Euler characteristic of a smooth complete toric 3-fold: #3-cones.
    CHECK(ro.rays.size() - ro.faces(2).size() + ro.cones.size() == 2);
}

TEST_CASE("face fans are the Fano fans")
{
    Fan f = face_fan(make_polytope(p3_polytope()));
    CHECK(f.cones.size() == 4);
    CHECK(is_smooth(f));
    CHECK(is_complete(f));
    Fan g = face_fan(make_polytope(octahedron_polytope()));
    CHECK(g.cones.size() == 8);
    CHECK(is_smooth(g));
    CHECK(sr_cohomology(g).betti() == std::vector<std::size_t>{1, 3, 3, 1});
}

TEST_CASE("fan validation")
{
    CHECK_THROWS_WITH_AS(make_fan(3, {{2, 0, 0}}, {{0}}), doctest::Contains("InvalidFan"), Error);
    CHECK_THROWS_WITH_AS(make_fan(2, {{1, 0}, {2, 0}}, {{0, 1}}), doctest::Contains("InvalidFan"), Error);
    Fan half = make_fan(2, {{1, 0}, {0, 1}, {-1, 0}}, {{0, 1}, {1, 2}});
    CHECK(is_smooth(half));
    CHECK_FALSE(is_complete(half));
    CHECK_THROWS_WITH_AS(sr_cohomology(half), doctest::Contains("NotComplete"), Error);
    Fan weighted = make_fan(2, {{1, 0}, {1, 2}, {-1, -1}}, {{0, 1}, {1, 2}, {2, 0}});
    CHECK_THROWS_WITH_AS(sr_cohomology(weighted), doctest::Contains("NotSmooth"), Error);
}

TEST_CASE("pole analysis")
{
    auto p = make_polytope(p3_polytope());
    auto l = standard_laurent(p);
    Fan n = spanning_fan(p);
    auto rep = pole_analysis(n, l, p);
    CHECK(rep.rays.size() == 4);
    for (const auto& r : rep.rays) {
        CHECK(r.pole_order == 1);
        CHECK(r.face_dim == 2);
    }

    const auto& oct = octa_pipeline();
    auto orep = pole_analysis(spanning_fan(oct.polytope), standard_laurent(oct.polytope), oct.polytope);
    for (const auto& r : orep.rays) {
        CHECK(r.pole_order == 1);
        CHECK(r.face.size() == 3);
    }

    // Refined fan: rays inside polar facets see a vertex, edge rays an edge.
    std::map<int, int> by_dim;
    for (const auto& r : p3_pipeline().poles.rays) {
        CHECK(r.pole_order == 1);
        ++by_dim[r.face_dim];
    }
    CHECK(by_dim == std::map<int, int>{{0, 12}, {1, 18}, {2, 4}});
    for (const auto& w : p3_pipeline().poles.walls)
        CHECK(w.length == (w.face_dim == 1 ? 1 : 0));

    LaurentData mono;
    mono.support[{1, 0, 0}] = 1;
    CHECK_THROWS_WITH_AS(check_support(mono, p), doctest::Contains("SupportViolation"), Error);
    LaurentData outside = l;
    outside.support[{2, 0, 0}] = 1;
    CHECK_THROWS_WITH_AS(check_support(outside, p), doctest::Contains("SupportViolation"), Error);
    LaurentData interior = l;
    interior.support[{0, 0, 0}] = Rational(5, 2);
    CHECK_NOTHROW(check_support(interior, p));
}

TEST_CASE("nondegeneracy probe")
{
    LaurentData seg;
    seg.support[{1, 0, 0}] = 1;
    seg.support[{-1, 0, 0}] = 1;
    auto r = nondegeneracy_probe(seg, 4);
    CHECK(r.verdict == Nondegeneracy::ProbablyNondegenerate);
    CHECK(r.exact_faces == r.faces);

    LaurentData sq;
    sq.support[{2, 0, 0}] = 1;
    sq.support[{1, 1, 0}] = -2;
    sq.support[{0, 2, 0}] = 1;
    r = nondegeneracy_probe(sq, 4);
    CHECK(r.verdict == Nondegeneracy::Degenerate);
    CHECK_FALSE(r.witness.empty());

    auto p3 = standard_laurent(make_polytope(p3_polytope()));
    r = nondegeneracy_probe(p3, 8);
    CHECK(r.verdict == Nondegeneracy::ProbablyNondegenerate);
    CHECK(r.faces == 15);
    CHECK(nondegeneracy_probe(p3, 0).verdict == Nondegeneracy::Inconclusive);

    // (1 + x + y)^2 in two variables: every probe line meets the double curve.
    LaurentData dbl;
    dbl.support[{0, 0, 0}] = 1;
    dbl.support[{1, 0, 0}] = 2;
    dbl.support[{0, 1, 0}] = 2;
    dbl.support[{2, 0, 0}] = 1;
    dbl.support[{1, 1, 0}] = 2;
    dbl.support[{0, 2, 0}] = 1;
    CHECK(nondegeneracy_probe(dbl, 4).verdict == Nondegeneracy::Degenerate);
    CHECK(std::string(nondegeneracy_name(Nondegeneracy::ProbablyNondegenerate)) == "probably-nondegenerate");
}

TEST_CASE("toric intersection numbers agree with the Stanley-Reisner ring")
{
    for (const Fan& f : {projective_space_fan(3), p1_cubed_fan()}) {
        ToricIntersection t(f);
        SRCohomology sr = sr_cohomology(f);
        const int r = static_cast<int>(f.rays.size());
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b)
                for (int c = 0; c < r; ++c)
                    CHECK(t.triple(a, b, c) == sr_triple(sr, a, b, c));
    }
    ToricIntersection p3(projective_space_fan(3));
    CHECK(p3.triple(0, 0, 0) == 1);
    CHECK(p3.triple(0, 1, 2) == 1);
    ToricIntersection cube(p1_cubed_fan());
    CHECK(cube.triple(0, 0, 2) == 0);
    CHECK(cube.triple(0, 2, 4) == 1);
    CHECK(cube.triple(0, 1, 2) == 0);
    CHECK_FALSE(cube.is_wall(0, 1));
}

TEST_CASE("refined fans carry an ample class")
{
    for (const auto* t : {&p3_pipeline(), &octa_pipeline()}) {
        const Fan& f = t->refined;
        REQUIRE(f.ample.size() == f.rays.size());
        ToricIntersection ti(f);
        for (const auto& w : f.faces(2)) {
            Rational deg = 0;
            Rational anti = 0;
            for (int x = 0; x < static_cast<int>(f.rays.size()); ++x) {
                deg += f.ample[static_cast<std::size_t>(x)] * ti.wall_degree(w[0], w[1], x);
                anti += ti.wall_degree(w[0], w[1], x);
            }
            CHECK(deg > 0);
            // -K is nef: each wall curve has -K degree 0 or 1 here.
            CHECK(anti >= 0);
        }
    }
}

TEST_CASE("Stanley-Reisner rings")
{
    CHECK(sr_cohomology(projective_space_fan(2)).betti() == std::vector<std::size_t>{1, 1, 1});
    SRCohomology cube = sr_cohomology(p1_cubed_fan());
    CHECK(cube.betti() == std::vector<std::size_t>{1, 3, 3, 1});
    CHECK(rank(cube.c1(0)) == 1);
    CHECK(rank(cube.c1(1)) == 3);
    // Hard Lefschetz for c1: c1^3 : H^0 -> H^6 is nonzero (integral 48).
    Matrix top = cube.c1(2) * cube.c1(1) * cube.c1(0);
    CHECK(top(0, 0) * cube.top_degree[0] == 48);

    SRCohomology p3 = sr_cohomology(projective_space_fan(3));
    CHECK(p3.betti() == std::vector<std::size_t>{1, 1, 1, 1});
    Matrix chain = p3.c1(2) * p3.c1(1) * p3.c1(0);
    CHECK(chain(0, 0) * p3.top_degree[0] == 64);

    RescalingModel m = fano_rescaling(projective_space_fan(3));
    const auto& c = m.components.at(3);
    CHECK(c.N.pow(3) != Matrix(4, 4));
    CHECK(c.N.pow(4).is_zero());
}

TEST_CASE("Fano models: f = h = h^{n-p,q}")
{
    for (const Fan& f : {projective_space_fan(2), projective_space_fan(3), p1_cubed_fan()}) {
        RescalingModel m = fano_rescaling(f);
        const auto b = sr_cohomology(f).betti();
        const int n = f.dim;
        HodgeTable expect;
        for (int p = 0; p <= n; ++p)
            expect[{p, n - p}] = b[static_cast<std::size_t>(n - p)];
        CHECK(f_pq(m) == expect);
        CHECK(h_pq(m) == expect);
        CHECK(ht_condition(m).hodge_tate);
        CHECK(speciality(m, kDefaultSaitoShift).special);
    }
}

TEST_CASE("projective space quantum product")
{
    Matrix q1 = pn_quantum_c1(1, 0);
    // h * h: c1 = 2h, so c1 * h = 2 h^2 = 0 classically.
    CHECK(q1(0, 1) == 0);
    Matrix q2 = pn_quantum_c1(2, 1).scaled(Rational(1, 3));
    // h * h^2 = tau^3 at tau = 1.
    CHECK(q2(0, 2) == 1);
    CHECK(q2(2, 1) == 1);
    CHECK(pn_quantum_flatness(2, {{2, 3}}).ok());
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> a(-9, 9), b(1, 9);
    for (int n = 1; n <= 3; ++n) {
        std::vector<std::pair<Rational, Rational>> s;
        while (s.size() < 10) {
            long x = a(rng);
            if (x == 0)
                continue;
            Rational th(x, b(rng)), tau(a(rng), b(rng));
            th.canonicalize();
            tau.canonicalize();
            s.emplace_back(th, tau);
        }
        auto rep = pn_quantum_flatness(n, s);
        CHECK(rep.ok());
        CHECK(rep.samples == 10);
    }
    CHECK_THROWS_WITH_AS(pn_quantum_flatness(7, {{1, 1}}), doctest::Contains("OutOfRange"), Error);
}

TEST_CASE("P^3 pipeline passes the downstream suite")
{
    const auto& t = p3_pipeline();
    CHECK(t.probe.verdict == Nondegeneracy::ProbablyNondegenerate);
    CHECK(t.strata.components(1) == 34);
    CHECK(t.strata.components(2) == 96);
    CHECK(t.strata.components(3) == 64);
    CHECK(t.blowup.h2_rank == 53);
    CHECK(t.strata.hodge_tate());
    for (const auto& c : check_strata(t.strata))
        CHECK_MESSAGE(c.ok, c.name << " " << c.detail);
    SuiteReport rep = full_suite(t.strata);
    for (const auto& c : rep.checks)
        CHECK_MESSAGE(c.ok, c.name << " " << c.detail);

    PageResult rel = e2_relative(t.strata);
    CHECK(rel.e3_equals_e2);
    CHECK(rel.graded == std::map<int, std::map<int, std::size_t>>{{3, {{0, 1}, {2, 1}, {4, 1}, {6, 1}}}});
    RescalingModel m = assemble_rescaling(t.strata);
    CHECK(ht_condition(m).hodge_tate);
    CHECK(speciality(m, kDefaultSaitoShift).special);
    CHECK(f_pq(m) == h_pq(m));
    // Mirror of P^3: the same table as the Fano model.
    CHECK(h_pq(m) == h_pq(fano_rescaling(projective_space_fan(3))));
}

TEST_CASE("(P^1)^3 pipeline passes the downstream suite")
{
    const auto& t = octa_pipeline();
    CHECK(t.strata.components(1) == 26);
    CHECK(t.strata.components(2) == 72);
    CHECK(t.strata.components(3) == 48);
    SuiteReport rep = full_suite(t.strata);
    for (const auto& c : rep.checks)
        CHECK_MESSAGE(c.ok, c.name << " " << c.detail);
    RescalingModel m = assemble_rescaling(t.strata);
    CHECK(ht_condition(m).hodge_tate);
    CHECK(speciality(m, kDefaultSaitoShift).special);
    CHECK(f_pq(m) == h_pq(m));
    CHECK(h_pq(m) == h_pq(fano_rescaling(p1_cubed_fan())));
}

TEST_CASE("Euler characteristic bookkeeping")
{
    for (const auto* t : {&p3_pipeline(), &octa_pipeline()}) {
        const auto& x = t->strata.strata[0][0];
        long chi = 0;
        for (const auto& [a, b] : x.betti)
            chi += static_cast<long>(b);
        CHECK(chi == t->blowup.euler_x);
        // chi(X_Sigma) plus 2 per blown-up P^1.
        long curves = 0;
        for (const auto& r : t->poles.rays)
            curves += r.face_dim >= 1;
        CHECK(t->blowup.euler_x == static_cast<long>(t->refined.cones.size()) + 2 * curves);
        CHECK(e2_relative(t->strata).euler() == stratum_euler(t->strata));
    }
}

TEST_CASE("E2 does not depend on the blow-up order")
{
    const auto& t = octa_pipeline();
    const auto l = standard_laurent(t.polytope);
    std::vector<int> order(t.refined.rays.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::vector<int>> orders;
    orders.push_back({order.rbegin(), order.rend()});
    std::mt19937_64 rng(5);
    std::shuffle(order.begin(), order.end(), rng);
    orders.push_back(order);
    for (const auto& o : orders) {
        BlowupSummary s;
        StrataComplex alt = blowup_strata(t.refined, l, t.polytope, o, &s);
        CHECK(s.order == o);
        CHECK(s.h2_rank == t.blowup.h2_rank);
        for (PageKind k : {PageKind::Relative, PageKind::Nearby, PageKind::Open, PageKind::Divisor})
            CHECK(compute_page(alt, k).graded == compute_page(t.strata, k).graded);
    }
    CHECK_THROWS_WITH_AS(blowup_strata(t.refined, l, t.polytope, {0, 0, 1}), doctest::Contains("InconsistentGeometry"),
                         Error);
}

TEST_CASE("the Fano fan of P^3 has base curves in its boundary")
{
    // Q_rho is a vertex for every ray of the face fan, yet -K.D_tau = 4: f_0
    // contains torus-invariant curves and the blow-up recipe does not apply.
    auto p = make_polytope(p3_polytope());
    Fan f = face_fan(p);
    f.ample.assign(f.rays.size(), Rational(1));
    CHECK_THROWS_WITH_AS(blowup_strata(f, standard_laurent(p), p), doctest::Contains("InconsistentGeometry"), Error);
}
