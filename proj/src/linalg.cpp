#include "hodgeforge/linalg.hpp"

#include "hodgeforge/error.hpp"

#include <sstream>

namespace hodgeforge {

Rational parse_rational(const std::string& s)
{
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0)
        throw Error("SchemaError", "not a rational: '" + s + "'");
    if (q.get_den() == 0)
        throw Error("SchemaError", "zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q)
{
    return q.get_str();
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries))
{
    if (a_.size() != rows_ * cols_)
        throw Error("ShapeMismatch", "entry count does not match shape");
    for (auto& q : a_)
        q.canonicalize();
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Rational>>& rows)
{
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    Matrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c)
            throw Error("ShapeMismatch", "ragged rows");
        for (std::size_t j = 0; j < c; ++j) {
            m(i, j) = rows[i][j];
            m(i, j).canonicalize();
        }
    }
    return m;
}

Matrix Matrix::from_ints(const std::vector<std::vector<long>>& rows)
{
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    Matrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c)
            throw Error("ShapeMismatch", "ragged rows");
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

Matrix Matrix::column(const std::vector<Rational>& v)
{
    return Matrix(v.size(), 1, v);
}

Matrix Matrix::operator*(const Matrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw Error("ShapeMismatch", "product of incompatible shapes");
    Matrix out(rows_, rhs.cols_);
    Rational t;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& x = (*this)(i, k);
            if (sgn(x) == 0)
                continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                const Rational& y = rhs(k, j);
                if (sgn(y) == 0)
                    continue;
                t = x * y;
                out(i, j) += t;
            }
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw Error("ShapeMismatch", "sum of incompatible shapes");
    Matrix out(*this);
    for (std::size_t i = 0; i < a_.size(); ++i)
        out.a_[i] += rhs.a_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw Error("ShapeMismatch", "difference of incompatible shapes");
    Matrix out(*this);
    for (std::size_t i = 0; i < a_.size(); ++i)
        out.a_[i] -= rhs.a_[i];
    return out;
}

Matrix Matrix::operator-() const
{
    Matrix out(*this);
    for (auto& x : out.a_)
        x = -x;
    return out;
}

Matrix Matrix::scaled(const Rational& s) const
{
    Matrix out(*this);
    for (auto& x : out.a_)
        x *= s;
    return out;
}

Matrix Matrix::transpose() const
{
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = (*this)(i, j);
    return out;
}

Matrix Matrix::pow(unsigned k) const
{
    if (rows_ != cols_)
        throw Error("ShapeMismatch", "power of a non-square matrix");
    Matrix out = identity(rows_);
    for (unsigned i = 0; i < k; ++i)
        out = out * (*this);
    return out;
}

bool Matrix::is_zero() const
{
    for (const auto& x : a_)
        if (sgn(x) != 0)
            return false;
    return true;
}

bool Matrix::operator==(const Matrix& rhs) const
{
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && a_ == rhs.a_;
}

Matrix Matrix::col(std::size_t j) const
{
    return block(0, j, rows_, 1);
}

Matrix Matrix::cols_subset(const std::vector<std::size_t>& idx) const
{
    Matrix out(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            out(i, j) = (*this)(i, idx[j]);
    return out;
}

Matrix Matrix::rows_subset(const std::vector<std::size_t>& idx) const
{
    Matrix out(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(i, j) = (*this)(idx[i], j);
    return out;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    if (r0 + nr > rows_ || c0 + nc > cols_)
        throw Error("ShapeMismatch", "block out of range");
    Matrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m)
{
    if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_)
        throw Error("ShapeMismatch", "block out of range");
    for (std::size_t i = 0; i < m.rows_; ++i)
        for (std::size_t j = 0; j < m.cols_; ++j)
            (*this)(r0 + i, c0 + j) = m(i, j);
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b)
{
    if (a.rows_ != b.rows_)
        throw Error("AmbientMismatch", "hstack of different row counts");
    Matrix out(a.rows_, a.cols_ + b.cols_);
    out.set_block(0, 0, a);
    out.set_block(0, a.cols_, b);
    return out;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b)
{
    if (a.cols_ != b.cols_)
        throw Error("ShapeMismatch", "vstack of different column counts");
    Matrix out(a.rows_ + b.rows_, a.cols_);
    out.set_block(0, 0, a);
    out.set_block(a.rows_, 0, b);
    return out;
}

std::string Matrix::str() const
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? " " : "") << (*this)(i, j).get_str();
    }
    os << "]";
    return os.str();
}

RrefResult rref(const Matrix& m)
{
    RrefResult res;
    res.reduced = m;
    Matrix& a = res.reduced;
    const std::size_t R = a.rows(), C = a.cols();
    std::size_t row = 0;
    Rational f;
    for (std::size_t c = 0; c < C && row < R; ++c) {
        std::size_t p = row;
        while (p < R && sgn(a(p, c)) == 0)
            ++p;
        if (p == R)
            continue;
        if (p != row)
            for (std::size_t j = 0; j < C; ++j)
                swap(a(p, j), a(row, j));
        Rational inv = 1 / a(row, c);
        for (std::size_t j = c; j < C; ++j)
            a(row, j) *= inv;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == row || sgn(a(i, c)) == 0)
                continue;
            f = a(i, c);
            for (std::size_t j = c; j < C; ++j)
                if (sgn(a(row, j)) != 0)
                    a(i, j) -= f * a(row, j);
        }
        res.pivots.push_back(c);
        ++row;
    }
    res.rank = res.pivots.size();
    return res;
}

std::size_t rank(const Matrix& m)
{
    return rref(m).rank;
}

Rational determinant(const Matrix& m)
{
    if (m.rows() != m.cols())
        throw Error("ShapeMismatch", "determinant of a non-square matrix");
    Matrix a = m;
    const std::size_t n = a.rows();
    Rational det = 1, f;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(a(p, c)) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j)
                swap(a(p, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(a(i, c)) == 0)
                continue;
            f = a(i, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j)
                a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

Matrix inverse(const Matrix& m)
{
    if (m.rows() != m.cols())
        throw Error("ShapeMismatch", "inverse of a non-square matrix");
    const std::size_t n = m.rows();
    RrefResult r = rref(Matrix::hstack(m, Matrix::identity(n)));
    if (r.rank < n || (n > 0 && r.pivots[n - 1] != n - 1))
        throw Error("Singular", "matrix is not invertible");
    return r.reduced.block(0, n, n, n);
}

Matrix kernel_basis(const Matrix& m)
{
    RrefResult r = rref(m);
    const std::size_t C = m.cols();
    std::vector<bool> is_pivot(C, false);
    for (auto p : r.pivots)
        is_pivot[p] = true;
    Matrix k(C, C - r.rank);
    std::size_t col = 0;
    for (std::size_t f = 0; f < C; ++f) {
        if (is_pivot[f])
            continue;
        k(f, col) = 1;
        for (std::size_t i = 0; i < r.rank; ++i)
            k(r.pivots[i], col) = -r.reduced(i, f);
        ++col;
    }
    return k;
}

Matrix canonical_basis(const Matrix& a)
{
    RrefResult r = rref(a.transpose());
    return r.reduced.block(0, 0, r.rank, a.rows()).transpose();
}

Matrix image_basis(const Matrix& m)
{
    return canonical_basis(m);
}

Matrix subspace_meet(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        throw Error("AmbientMismatch", "subspaces live in different ambient spaces");
    if (a.cols() == 0 || b.cols() == 0)
        return Matrix(a.rows(), 0);
    // x in a∩b iff x = A u = B v, i.e. [A | -B] (u,v) = 0.
    Matrix k = kernel_basis(Matrix::hstack(a, -b));
    Matrix u = k.block(0, 0, a.cols(), k.cols());
    return canonical_basis(a * u);
}

Matrix subspace_sum(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        throw Error("AmbientMismatch", "subspaces live in different ambient spaces");
    return canonical_basis(Matrix::hstack(a, b));
}

bool subspace_contains(const Matrix& big, const Matrix& small)
{
    if (big.rows() != small.rows())
        throw Error("AmbientMismatch", "subspaces live in different ambient spaces");
    if (small.cols() == 0)
        return true;
    return rank(Matrix::hstack(big, small)) == rank(big);
}

bool same_span(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        throw Error("AmbientMismatch", "subspaces live in different ambient spaces");
    std::size_t ra = rank(a);
    return ra == rank(b) && ra == rank(Matrix::hstack(a, b));
}

Matrix quotient_matrix(std::size_t ambient, const Matrix& sub)
{
    if (sub.rows() != ambient)
        throw Error("AmbientMismatch", "subspace is not in the given ambient space");
    // Rows of the quotient map span the annihilator of sub.
    Matrix ann = kernel_basis(sub.transpose());
    return ann.transpose();
}

Matrix solve(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        throw Error("ShapeMismatch", "right-hand side has the wrong row count");
    const std::size_t n = a.cols();
    RrefResult r = rref(Matrix::hstack(a, b));
    Matrix x(n, b.cols());
    for (std::size_t i = 0; i < r.rank; ++i) {
        std::size_t p = r.pivots[i];
        if (p >= n)
            throw Error("NoSolution", "linear system is inconsistent");
        for (std::size_t j = 0; j < b.cols(); ++j)
            x(p, j) = r.reduced(i, n + j);
    }
    return x;
}

Matrix coordinates(const Matrix& basis, const Matrix& v)
{
    return solve(basis, v);
}

} // namespace hodgeforge
