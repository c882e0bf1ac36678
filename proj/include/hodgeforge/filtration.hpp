#pragma once

#include "hodgeforge/linalg.hpp"

#include <map>
#include <utility>
#include <vector>

namespace hodgeforge {

/// Increasing, exhaustive, bounded filtration G_m of Q^n.  Steps are kept as
/// canonical bases for lo <= m <= hi; G_m = 0 below lo and G_m = Q^n from hi on.
class Filtration {
public:
    Filtration() = default;

    /// Steps given at some indices; missing indices inherit the nearest step
    /// below.  Throws NotNested / NotExhaustive.
    static Filtration make(std::size_t ambient, const std::vector<std::pair<int, Matrix>>& steps);

    std::size_t ambient_dim() const { return n_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }

    Matrix step(int m) const;
    std::size_t dim(int m) const;
    std::size_t graded_dim(int m) const;
    /// Nonzero graded dimensions only.
    std::map<int, std::size_t> graded_dims() const;

    Filtration shifted(int s) const;
    /// G'_m = g(G_m) for an invertible g.
    Filtration transformed(const Matrix& g) const;

    bool operator==(const Filtration& rhs) const;
    bool operator!=(const Filtration& rhs) const { return !(*this == rhs); }

private:
    std::size_t n_ = 0;
    int lo_ = 0;
    int hi_ = 0;
    std::vector<Matrix> steps_;
};

inline Filtration make_filtration(std::size_t ambient, const std::vector<std::pair<int, Matrix>>& steps)
{
    return Filtration::make(ambient, steps);
}

inline std::size_t graded_dim(const Filtration& f, int m)
{
    return f.graded_dim(m);
}

/// G_m = span{e_i : -weights[i] <= m}.
Filtration grading_to_filtration(const std::vector<int>& weights);

struct NilpotentOp {
    Matrix matrix;
    unsigned nilpotency_index = 0;
};

/// Throws NotNilpotent unless some power of m vanishes.
NilpotentOp make_nilpotent(const Matrix& m);

/// Jordan chains of a nilpotent: each chain is (v, Nv, ..., N^{L-1}v).
std::vector<std::vector<Matrix>> jordan_chains(const NilpotentOp& n);

/// Monodromy weight filtration centered at k, built from Jordan chains and
/// re-verified against both defining properties before it is returned.
Filtration weight_filtration(const NilpotentOp& n, int center);

/// Independent construction: W_{k+i} = sum_j ker N^{j+1} ∩ im N^{j-i}.
Filtration weight_filtration_kernel_image(const NilpotentOp& n, int center);

struct WeightCheck {
    bool ok = true;
    std::string message;
};

/// N W_i ⊆ W_{i-2} and N^j : Gr_{k+j} -> Gr_{k-j} an isomorphism for j >= 1.
WeightCheck check_weight_properties(const Matrix& n, int center, const Filtration& w);

/// N(G_m) ⊆ G_{m+shift} for all m.
bool maps_into(const Matrix& n, const Filtration& g, int shift);

} // namespace hodgeforge
