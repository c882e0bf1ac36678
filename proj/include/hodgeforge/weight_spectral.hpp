#pragma once

#include "hodgeforge/rescaling.hpp"
#include "hodgeforge/strata.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hodgeforge {

/// Relative: H^*(Y, Y_inf).  Nearby: H^*(Y_inf).  Open: H^*(Y).  Divisor: H^*(D).
enum class PageKind { Relative, Nearby, Open, Divisor };

const char* page_name(PageKind k);

using KIndex = std::array<int, 3>;

/// K^{i,j,k} = H^{i+j-2k+n_eff}(S(2k-i))(i-k), S(m) = D(m + shift).
struct KCell {
    int stratum = 0;
    int degree = 0;
    int tate = 0;
    std::size_t dim = 0;
};

struct KGrid {
    PageKind kind = PageKind::Relative;
    int n_eff = 0;
    int shift = 0;
    std::map<KIndex, KCell> cells;

    const KCell* find(const KIndex& idx) const;
};

/// Relative (S = D, n_eff = n) or Nearby (S(m) = D(m+1), n_eff = n-1).
KGrid build_K(const StrataComplex& s, PageKind kind = PageKind::Relative);

/// Component of d1 between two cells (zero matrix if they are not linked):
/// -gysin into (i+1, j+1, k), restriction into (i+1, j+1, k+1).
Matrix d1_block(StrataMaps& maps, const KGrid& g, const KIndex& src, const KIndex& dst);

/// Throws D1SquareNonzero naming the first offending cell.
void check_d1_squared(StrataMaps& maps, const KGrid& g);

struct E1Term {
    int col = 0;
    int weight = 0;
    int degree = 0;
    /// (stratum, cohomology degree) per block, with the K index when there is one.
    std::vector<std::pair<int, int>> blocks;
    std::vector<KIndex> cells;
    std::vector<std::size_t> offsets;
    std::size_t dim = 0;
};

struct E2Term {
    int col = 0;
    int weight = 0;
    int degree = 0;
    Matrix reps;
    Matrix boundaries;
    std::size_t dim() const { return reps.cols(); }
};

struct PageResult {
    PageKind kind = PageKind::Relative;
    /// Keyed by (col, weight).
    std::map<std::pair<int, int>, E1Term> e1;
    std::map<std::pair<int, int>, Matrix> d1;
    std::map<std::pair<int, int>, E2Term> e2;
    /// degree -> weight -> dim Gr^W.
    std::map<int, std::map<int, std::size_t>> graded;
    bool e3_equals_e2 = true;
    std::string degeneration_note;
    bool hodge_tate = true;

    std::size_t dim(int degree) const;
    long euler() const;
};

/// Throw D1SquareNonzero / DegenerationFails.
PageResult e2_relative(const StrataComplex& s);
PageResult e2_nearby(const StrataComplex& s);
PageResult e2_open(const StrataComplex& s);
PageResult mv_divisor(const StrataComplex& s);
PageResult compute_page(const StrataComplex& s, PageKind kind);

struct CheckResult {
    std::string name;
    bool ok = true;
    std::string detail;
};

/// nu^i grid isomorphisms, ker nu^{i+1} ∩ K^{-i,j} = K^{-i,j,0}, [d1, nu] = 0.
std::vector<CheckResult> nu_check(const StrataComplex& s, const KGrid& g);
/// [d1, L] = 0, psi-adjointness of d1' and d1'', psi symmetry, nu and L
/// antisymmetry, positivity of Q on primitive parts.
std::vector<CheckResult> lefschetz_pairing_check(const StrataComplex& s, const KGrid& g);
/// nu^r : Gr_{q+r} -> Gr_{q-r} on E2 of a Relative or Nearby page.
CheckResult e2_monodromy_check(const StrataComplex& s, const PageResult& page);

/// Induced nu on E2 from (col, weight) to (col + 2, weight - 2).
Matrix e2_nu(const StrataComplex& s, const PageResult& page, std::pair<int, int> from);

/// Per-weight exactness of the relative/open/nearby long exact sequence and
/// of the Clemens-Schmid sequence.  ExactnessFail detail names the spot.
std::vector<CheckResult> les_check(const StrataComplex& s);

/// Dimension-only exactness test for 0 -> V_0 -> ... -> V_r -> 0.
bool exact_dims(const std::vector<std::size_t>& dims);

/// Sum over m of (-1)^m (m+1) chi(D(m)).
long stratum_euler(const StrataComplex& s);

/// V^q = H^q(Y, Y_inf) split by weight; lambda = p on weight 2p, N from nu.
/// Throws NonHTStrata.
RescalingModel assemble_rescaling(const StrataComplex& s);

struct SuiteReport {
    std::vector<CheckResult> checks;
    bool ok() const;
};

/// Everything above on one input.
SuiteReport full_suite(const StrataComplex& s);

} // namespace hodgeforge
