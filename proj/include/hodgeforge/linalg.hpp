#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace hodgeforge {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parse "a", "-a" or "a/b"; the result is canonicalized.
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);

/// Dense row-major matrix over Q.  A subspace of Q^n is stored as an n x k
/// matrix whose columns form a basis, so an n x 0 matrix is the zero space.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<Rational>>& rows);
    static Matrix from_ints(const std::vector<std::vector<long>>& rows);
    /// Column vector.
    static Matrix column(const std::vector<Rational>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<Rational>& entries() const { return a_; }

    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix operator-() const;
    Matrix scaled(const Rational& s) const;
    Matrix transpose() const;
    Matrix pow(unsigned k) const;

    bool is_zero() const;
    bool operator==(const Matrix& rhs) const;
    bool operator!=(const Matrix& rhs) const { return !(*this == rhs); }

    Matrix col(std::size_t j) const;
    Matrix cols_subset(const std::vector<std::size_t>& idx) const;
    Matrix rows_subset(const std::vector<std::size_t>& idx) const;
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& m);

    static Matrix hstack(const Matrix& a, const Matrix& b);
    static Matrix vstack(const Matrix& a, const Matrix& b);

    std::string str() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> a_;
};

struct RrefResult {
    Matrix reduced;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
};

/// Reduced row echelon form; first nonzero entry in column order is the pivot.
RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);
Rational determinant(const Matrix& m);
Matrix inverse(const Matrix& m);

/// Columns spanning the null space, one per free column of the rref.
Matrix kernel_basis(const Matrix& m);
/// Independent columns spanning the column space (rref basis of the span).
Matrix image_basis(const Matrix& m);
/// Canonical basis of span(cols of a): columns of rref(a^T)^T.
Matrix canonical_basis(const Matrix& a);

Matrix subspace_meet(const Matrix& a, const Matrix& b);
Matrix subspace_sum(const Matrix& a, const Matrix& b);
bool subspace_contains(const Matrix& big, const Matrix& small);
bool same_span(const Matrix& a, const Matrix& b);

/// Surjection Q^n -> Q^(n - dim sub) whose kernel is exactly span(sub).
Matrix quotient_matrix(std::size_t ambient, const Matrix& sub);

/// Solve a x = b for x (b may have several columns); throws NoSolution.
Matrix solve(const Matrix& a, const Matrix& b);
/// Coordinates of the columns of v in the basis given by the columns of basis.
Matrix coordinates(const Matrix& basis, const Matrix& v);

} // namespace hodgeforge
