#pragma once

#include "hodgeforge/rescaling.hpp"
#include "hodgeforge/strata.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hodgeforge {

using IVec = std::vector<long>;

long dot(const IVec& a, const IVec& b);

struct PolytopeFacet {
    /// <m, normal> >= height on the polytope, with equality on the facet.
    IVec normal;
    long height = 0;
    /// Indices into LatticePolytope::vertices, in cyclic order.
    std::vector<int> vertices;
};

/// Full-dimensional lattice polytope in M = Z^3.
struct LatticePolytope {
    std::vector<IVec> vertices;
    std::vector<PolytopeFacet> facets;
    /// Vertex index pairs, a < b.
    std::vector<std::pair<int, int>> edges;
};

/// Convex hull of the given points.  Throws NotFullDimensional.
LatticePolytope make_polytope(const std::vector<IVec>& points);

/// Facet normals u_F with <m, u_F> >= -1; vertices of each facet form a basis
/// of M.  Throws NotReflexive, FacetNotUnimodular.
std::vector<IVec> validate_reflexive(const LatticePolytope& p);

/// Rays (primitive) and maximal cones.  For dim-3 fans that are not yet
/// simplicial a cone lists its rays in cyclic order.
struct Fan {
    int dim = 3;
    std::vector<IVec> rays;
    std::vector<std::vector<int>> cones;
    /// Coefficients of an ample T-divisor, when known (set by smooth_refine).
    std::vector<Rational> ample;

    /// All k-dimensional faces of simplicial cones, sorted index sets.
    std::vector<std::vector<int>> faces(int k) const;
    bool simplicial() const;
};

/// Validates primitivity and cone sizes.  Throws InvalidFan.
Fan make_fan(int dim, std::vector<IVec> rays, std::vector<std::vector<int>> cones);
bool is_smooth(const Fan& f);
/// Every codimension-one cone lies in exactly two maximal cones.
bool is_complete(const Fan& f);

/// Sigma_P: sigma_Q generated by {u_F : Q in F}.  Rays in facet order.
Fan spanning_fan(const LatticePolytope& p);
/// Cones over the facets of P: the fan of the Fano X_P (P smooth reflexive).
Fan face_fan(const LatticePolytope& p);
/// Lattice points u with min_P <m, u> = -1, lexicographically sorted.
std::vector<IVec> polar_boundary_points(const LatticePolytope& p);
/// Stellar subdivision at each polar boundary point in lexicographic order
/// until every cone is unimodular.  Throws RefinementFailed.
Fan smooth_refine(const Fan& f, const LatticePolytope& p);

Fan projective_space_fan(int n);
Fan p1_cubed_fan();

/// Laurent polynomial: exponent -> coefficient.
struct LaurentData {
    std::map<IVec, Rational> support;
};

/// Coefficient 1 at every vertex of P.
LaurentData standard_laurent(const LatticePolytope& p);
/// conv(support) = P.  Throws SupportViolation.
void check_support(const LaurentData& f, const LatticePolytope& p);

struct RayPole {
    int ray = 0;
    std::vector<int> face;
    int face_dim = 0;
    long pole_order = 0;
};

struct WallFace {
    int a = 0;
    int b = 0;
    std::vector<int> face;
    int face_dim = -1;
    /// Lattice length of Q_tau when it is an edge, else 0.
    long length = 0;
};

struct PoleReport {
    std::vector<RayPole> rays;
    std::vector<WallFace> walls;
};

/// Throws SupportViolation.
PoleReport pole_analysis(const Fan& f, const LaurentData& l, const LatticePolytope& p);

enum class Nondegeneracy { Degenerate, ProbablyNondegenerate, Inconclusive };
const char* nondegeneracy_name(Nondegeneracy v);

struct ProbeResult {
    Nondegeneracy verdict = Nondegeneracy::Inconclusive;
    std::size_t faces = 0;
    /// Faces of dimension <= 1, decided exactly.
    std::size_t exact_faces = 0;
    std::string witness;
};

/// Works in any dimension <= 3.  Faces of dim <= 1 are decided exactly; larger
/// faces are probed on `trials` random rational lines each.
ProbeResult nondegeneracy_probe(const LaurentData& l, int trials, std::uint64_t seed = 1);

/// Intersection numbers of T-divisors on a smooth complete 3-dimensional fan.
class ToricIntersection {
public:
    explicit ToricIntersection(const Fan& f);
    Rational triple(int a, int b, int c) const;
    /// D_x . D_tau for tau = {a, b} a 2-cone.
    Rational wall_degree(int a, int b, int x) const;
    bool is_wall(int a, int b) const;

private:
    const Fan& f_;
    std::map<std::pair<int, int>, std::map<int, Rational>> walls_;
    std::vector<Rational> cubes_;
};

/// Stanley-Reisner presentation.  Degree k holds H^{2k}.
struct SRCohomology {
    int n = 0;
    std::size_t rays = 0;
    /// basis[k] = representative monomials (sorted ray multisets).
    std::vector<std::vector<std::vector<int>>> basis;
    /// product[k][rho] = cup with D_rho, H^{2k} -> H^{2k+2}.
    std::vector<std::vector<Matrix>> product;
    /// Integral of each top basis class.
    std::vector<Rational> top_degree;

    std::vector<std::size_t> betti() const;
    /// Cup with sum_rho c_rho D_rho.
    Matrix cup(const std::vector<Rational>& divisor, int k) const;
    Matrix c1(int k) const;
};

/// Throws NotComplete, NotSmooth.
SRCohomology sr_cohomology(const Fan& f);

/// V^n = H^*(X), lambda = n - p on H^{2p}, N = c1 cup.
RescalingModel fano_rescaling(const Fan& f);

/// c1 *_tau on H^*(P^n): h * h^n = tau^{n+1}.
Matrix pn_quantum_c1(int n, const Rational& tau);

struct FlatnessReport {
    bool conjugation = true;
    bool classical_limit = true;
    std::size_t samples = 0;
    std::string detail;
    bool ok() const { return conjugation && classical_limit; }
};

/// c1 *_tau = theta^mu (c1 *_{theta tau} / theta) theta^{-mu}, mu = p - n/2,
/// checked exactly at each (theta, tau).  Throws OutOfRange for n > 6.
FlatnessReport pn_quantum_flatness(int n, const std::vector<std::pair<Rational, Rational>>& samples);

/// Bookkeeping of the blow-up sequence; exposed for tests and reports.
struct BlowupSummary {
    std::vector<int> order;
    /// Blow-up point count per 2-cone (lattice length of Q_tau).
    std::map<std::pair<int, int>, long> points;
    std::size_t h2_rank = 0;
    long euler_x = 0;
};

/// Strata of D after blowing up the base curves B_rho in `ray_order` (default:
/// ray index order).  D(1) = blown-up toric surfaces, D(2) = one P^1 per
/// 2-cone, D(3) = one point per 3-cone.  Throws InconsistentGeometry.
StrataComplex blowup_strata(const Fan& f, const LaurentData& l, const LatticePolytope& p,
                            std::vector<int> ray_order = {}, BlowupSummary* summary = nullptr);

struct ToricPipeline {
    LatticePolytope polytope;
    Fan normal;
    Fan refined;
    PoleReport poles;
    ProbeResult probe;
    BlowupSummary blowup;
    StrataComplex strata;
};

ToricPipeline run_toric(const std::vector<IVec>& points, const LaurentData* laurent = nullptr, int trials = 8,
                        std::uint64_t seed = 1, std::vector<int> ray_order = {});

std::vector<IVec> p3_polytope();
std::vector<IVec> octahedron_polytope();

} // namespace hodgeforge
