#pragma once

#include "hodgeforge/strata.hpp"

#include <string>
#include <vector>

namespace hodgeforge {

/// Rational elliptic surface X (P^2 blown up at 9 points) with an I_d fiber
/// D = C_1 + ... + C_d.  A vector (a_0, ..., a_9) is a_0 h - a_1 e_1 - ... - a_9 e_9.
struct WheelSurfaceSpec {
    int d = 0;
    std::string realization;
    std::vector<std::vector<long>> curves;
    std::vector<long> kahler;
};

constexpr int kLatticeRank = 10;

/// diag(1, -1, ..., -1).
long lattice_product(const std::vector<long>& a, const std::vector<long>& b);
/// (3, 1, ..., 1) = -K_X.
std::vector<long> fiber_class();

/// Reads data/wheel_classes.json (or `path`).  Key is d, or e.g. "3alt".
WheelSurfaceSpec wheel_spec(const std::string& key, const std::string& path = {});
WheelSurfaceSpec wheel_spec(int d);
std::vector<std::string> wheel_realizations(const std::string& path = {});

/// Sum of classes is the fiber, C_i^2 = -2, cyclic intersections, positive
/// Kahler degrees.  Throws InvalidIntersectionData.
void validate_wheel(const WheelSurfaceSpec& spec);

StrataComplex wheel_strata(const WheelSurfaceSpec& spec);
StrataComplex wheel_strata(int d);

struct EulerTriple {
    long y = 0;
    long y_b = 0;
    long relative = 0;
};

/// chi(Y) = 12 - d, chi(Y_b) = 0, chi(Y, Y_b) = 12 - d.  Throws OutOfRange.
EulerTriple wheel_euler_oracle(int d);

} // namespace hodgeforge
