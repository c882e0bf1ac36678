#pragma once

#include "hodgeforge/mixed_hodge.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace hodgeforge {

/// One graded piece V^k: a lambda-weight per basis vector and the residue N_k.
/// Weights are rational so that half Tate twists stay representable; F and the
/// Hodge numbers need them integral.
struct RescalingComponent {
    std::vector<Rational> lambda;
    Matrix N;

    std::size_t dim() const { return lambda.size(); }
};

struct RescalingModel {
    std::map<int, RescalingComponent> components;
    std::string label;

    std::size_t dim() const;
};

/// Validates shapes, nilpotency and N(F_i) ⊆ F_{i+1}.  Throws ShapeMismatch,
/// NotNilpotent, NotCompatible.
RescalingModel make_rescaling(std::map<int, RescalingComponent> components, std::string label = {});

RescalingComponent component_from_ints(const std::vector<int>& lambda, const Matrix& n);

bool integral_weights(const RescalingComponent& c);
/// F_m = span{e_i : -lambda_i <= m}.  Throws NonIntegralWeights.
Filtration hodge_filtration(const RescalingComponent& c);
Filtration weight_filtration(const RescalingComponent& c, int degree);

/// (p, q) -> count.
using HodgeTable = std::map<std::pair<int, int>, std::size_t>;

HodgeTable f_pq(const RescalingModel& m);
HodgeTable h_pq(const RescalingModel& m);

struct DegreeHT {
    int degree = 0;
    MixedHodgeModel model;
    HTVerdict verdict;
    FwVerdict literal;
};

struct RescalingHT {
    bool hodge_tate = true;
    std::vector<DegreeHT> degrees;
};

RescalingHT ht_condition(const RescalingModel& m, int fw_shift = kDefaultFwShift);

/// Offset in F_{-p} ⊕ G_{p+1+shift}.  -2 is the value under which the P^2
/// model with G_l = W_{2l} is opposed; 0 is the literal reading.
constexpr int kDefaultSaitoShift = -2;

struct OpposedVerdict {
    bool opposed = true;
    bool n_invariant = true;
    std::vector<int> failing_p;
};

/// Throws AmbientMismatch.
OpposedVerdict saito_opposed(const Filtration& F, const Filtration& G, const Matrix& N, int shift);

std::vector<int> calibrate_saito_shift();

/// G_l = W_{2l}.
Filtration even_part(const Filtration& w);

struct SpecialityVerdict {
    bool special = true;
    /// (degree, p) pairs where the direct sum fails.
    std::vector<std::pair<int, int>> failing;
    bool literal_special = true;
};

SpecialityVerdict speciality(const RescalingModel& m, int shift = kDefaultSaitoShift);

/// Tensor with T(-half_steps/2): degree +half_steps, lambda +half_steps/2.
RescalingModel tate_twist_model(const RescalingModel& m, int half_steps);

bool operator==(const RescalingModel& a, const RescalingModel& b);

/// N given by Jordan chains with Hodge-Tate weights, conjugated by a random
/// F-preserving change of basis.  HT by construction.
RescalingModel random_ht_model(std::mt19937_64& rng, std::size_t max_dim);

/// Random lambda-weights and a random N strictly lowering lambda.  Not HT in
/// general.
RescalingModel random_compatible_model(std::mt19937_64& rng, std::size_t max_dim);

/// Models used across tests and the CLI.
RescalingModel tate_model(int k);
RescalingModel p2_fano_model();

} // namespace hodgeforge
