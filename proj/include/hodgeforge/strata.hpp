#pragma once

#include "hodgeforge/linalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace hodgeforge {

/// One connected component of D(m), m = #index.  Cohomology is given per degree
/// together with cup-by-Kahler-class and the Poincare pairing.
struct StratumComponent {
    std::vector<int> index;
    /// Separates components that share an index set (two curves meeting twice).
    int label = 0;
    int dim = 0;
    std::map<int, std::size_t> betti;
    /// Weight of H^a; absent means a.
    std::map<int, int> weights;
    /// Tate type of H^a; absent means "a is even".
    std::map<int, bool> tate;
    /// H^a -> H^{a+2}.
    std::map<int, Matrix> lefschetz;
    /// b_a x b_{2dim-a}, entries the integrals of products of basis classes.
    std::map<int, Matrix> pairing;

    std::size_t b(int a) const;
    int weight(int a) const;
    bool is_tate(int a) const;
    Matrix L(int a) const;
    Matrix P(int a) const;
};

/// Geometric (unsigned) restriction H^a(from) -> H^a(to), from in D(m), to in D(m+1),
/// and optionally the pushforward H^a(to) -> H^{a+2}(from).  A missing
/// pushforward degree is filled in as the adjoint of the restriction.
struct StratumRestriction {
    int m = 0;
    std::size_t from = 0;
    std::size_t to = 0;
    std::map<int, Matrix> maps;
    std::map<int, Matrix> gysin;
};

struct StrataComplex {
    std::string label;
    int n = 0;
    /// strata[m] lists the components of D(m), m = 0..n; strata[0] is X.
    std::vector<std::vector<StratumComponent>> strata;
    std::vector<StratumRestriction> restrictions;

    std::size_t components(int m) const;
    /// dim H^a(D(m)).
    std::size_t dim(int m, int a) const;
    /// Offset of component c inside H^a(D(m)).
    std::size_t offset(int m, std::size_t c, int a) const;
    bool hodge_tate() const;
    bool empty_divisor() const;
};

/// Structural validation: index sets, dimensions, Poincare duality and
/// nondegenerate pairings, restriction shapes.  Throws InvalidStrata.
StrataComplex make_strata(StrataComplex s);

/// (-1)^{pos-1} for the 1-based position of `inserted` in the sorted set `larger`.
int cech_sign(const std::vector<int>& larger, int inserted);

/// Cached signed maps on H^*(D(m)).
class StrataMaps {
public:
    explicit StrataMaps(const StrataComplex& s) : s_(s) {}

    const StrataComplex& strata() const { return s_; }
    /// rho^{(m)}: H^a(D(m)) -> H^a(D(m+1)).
    const Matrix& restriction(int m, int a);
    /// gamma^{(m)}: H^a(D(m)) -> H^{a+2}(D(m-1)), the adjoint of rho^{(m-1)}.
    const Matrix& gysin(int m, int a);
    const Matrix& lefschetz(int m, int a);
    /// b_a(D(m)) x b_{2(n-m)-a}(D(m)).
    const Matrix& pairing(int m, int a);

private:
    const StrataComplex& s_;
    std::map<std::pair<int, int>, Matrix> rho_, gamma_, lef_, pair_;
};

struct StratumCheck {
    std::string name;
    bool ok = true;
    std::string detail;
};

/// Hard Lefschetz and Hodge-Riemann positivity on every component, and
/// compatibility of restrictions with the Lefschetz classes.
std::vector<StratumCheck> check_strata(const StrataComplex& s);

/// X with no divisor: only strata[0].
StrataComplex no_divisor(const StratumComponent& x, std::string label = {});
/// A point.
StratumComponent point_component(std::vector<int> index = {}, int label = 0);
/// P^1 with basis 1, [pt] and Kahler class of the given degree.
StratumComponent p1_component(std::vector<int> index, int label, const Rational& degree);

/// Positive definiteness of a symmetric rational matrix (leading minors).
bool positive_definite(const Matrix& m);

} // namespace hodgeforge
