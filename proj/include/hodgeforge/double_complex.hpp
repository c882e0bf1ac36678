#pragma once

#include "hodgeforge/filtration.hpp"

#include <map>
#include <utility>
#include <vector>

namespace hodgeforge {

using Bidegree = std::pair<int, int>;

/// First-quadrant double complex.  d1 and d2 are keyed by source bidegree;
/// missing maps are zero.
struct DoubleComplex {
    std::map<Bidegree, std::size_t> spaces;
    std::map<Bidegree, Matrix> d1;
    std::map<Bidegree, Matrix> d2;
    /// Set when the squares commute; the total differential is then
    /// d1 + (-1)^p d2, otherwise d1 + d2.
    bool commuting = false;

    std::size_t dim(Bidegree b) const;
    Matrix delta1(Bidegree src) const;
    Matrix delta2(Bidegree src) const;
};

/// Throws NotAComplex, ShapeMismatch.
DoubleComplex make_double_complex(std::map<Bidegree, std::size_t> spaces, std::map<Bidegree, Matrix> d1,
                                  std::map<Bidegree, Matrix> d2);

/// Bidegrees of C^l in block order (increasing p).
std::vector<Bidegree> total_layout(const DoubleComplex& dc, int l);
std::size_t total_dim(const DoubleComplex& dc, int l);
Matrix total_differential(const DoubleComplex& dc, int l);

struct TotalCohomology {
    std::map<int, std::size_t> dims;
    /// Cocycles in C^l coordinates whose classes form a basis of H^l.
    std::map<int, Matrix> representatives;
};

TotalCohomology total_cohomology(const DoubleComplex& dc);

/// G_m H^k = Im(H^k(F_m) -> H^k), F_m = columns p >= -m, in the basis of
/// total_cohomology representatives.  Throws InjectivityFails.
std::map<int, Filtration> column_filtration_images(const DoubleComplex& dc);

} // namespace hodgeforge
