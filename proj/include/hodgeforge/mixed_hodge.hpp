#pragma once

#include "hodgeforge/filtration.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hodgeforge {

/// (V, F, W).  F is increasing; F_{-p} plays the role of the classical F^p.
struct MixedHodgeModel {
    std::size_t dim = 0;
    Filtration F;
    Filtration W;
    std::string label;
};

MixedHodgeModel make_mixed_hodge(const Filtration& F, const Filtration& W, std::string label = {});

/// Cell (p, w) -> count, with p the F-graded index (Gr^F_{-p}) and w the weight.
using HodgeCells = std::map<std::pair<int, int>, std::size_t>;

HodgeCells graded_hodge_numbers(const MixedHodgeModel& m);

struct HTVerdict {
    bool hodge_tate = true;
    /// Cells off the w = 2p diagonal, odd weights included.
    std::vector<std::pair<int, int>> violations;
};

HTVerdict is_hodge_tate(const MixedHodgeModel& m);

/// Index offset for the literal complementarity test F_{-j} ⊕ W_{2j+2+shift} = V.
/// The default is the value under which the P^2 quantum model passes.
constexpr int kDefaultFwShift = -4;

struct FwVerdict {
    bool opposed = true;
    std::vector<int> failing_j;
};

FwVerdict fw_literal(const MixedHodgeModel& m, int fw_shift);

/// Smallest window of shifts in [-8, 8] under which the P^2 model passes the
/// literal test; used to pin kDefaultFwShift.
std::vector<int> calibrate_fw_shift();

/// P^2 at k = 2 with F from the mu-grading and W from c_1 cup.
MixedHodgeModel p2_quantum_model();

struct HodgePolynomial {
    HodgeCells coefficients;
    std::size_t total() const;
    /// Only monomials (xy)^p.
    bool diagonal() const;
    /// Rendered with monomials x^p y^(w-p).
    std::string str() const;
};

HodgePolynomial hodge_polynomial(const MixedHodgeModel& m);
MixedHodgeModel tate_twist(const MixedHodgeModel& m, int k);

struct TwoOfThreeVerdict {
    bool left_ht = false;
    bool middle_ht = false;
    bool right_ht = false;
    /// left and right HT imply middle HT.
    bool consistent = true;
};

/// 0 -> left --f--> middle --g--> right -> 0.  Throws NotExact / NotStrict.
TwoOfThreeVerdict ht_two_of_three(const MixedHodgeModel& left, const MixedHodgeModel& middle,
                                  const MixedHodgeModel& right, const Matrix& f, const Matrix& g);

bool operator==(const MixedHodgeModel& a, const MixedHodgeModel& b);

} // namespace hodgeforge
