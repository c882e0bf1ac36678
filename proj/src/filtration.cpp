#include "hodgeforge/filtration.hpp"

#include "hodgeforge/error.hpp"

#include <algorithm>
#include <climits>

namespace hodgeforge {

Filtration Filtration::make(std::size_t ambient, const std::vector<std::pair<int, Matrix>>& steps_in)
{
    auto steps = steps_in;
    std::sort(steps.begin(), steps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < steps.size(); ++i)
        if (steps[i].first == steps[i + 1].first)
            throw Error("NotNested", "index " + std::to_string(steps[i].first) + " given twice");
    for (const auto& [m, b] : steps)
        if (b.rows() != ambient)
            throw Error("AmbientMismatch", "step " + std::to_string(m) + " has the wrong ambient dimension");

    Filtration f;
    f.n_ = ambient;
    if (ambient == 0) {
        f.steps_.push_back(Matrix(0, 0));
        return f;
    }
    if (steps.empty() || rank(steps.back().second) != ambient)
        throw Error("NotExhaustive", "top step is not the whole space");
    for (std::size_t i = 0; i + 1 < steps.size(); ++i)
        if (!subspace_contains(steps[i + 1].second, steps[i].second))
            throw Error("NotNested", "G_" + std::to_string(steps[i].first) + " is not contained in G_" +
                                         std::to_string(steps[i + 1].first));

    std::size_t first = 0;
    while (rank(steps[first].second) == 0)
        ++first;
    std::size_t full = first;
    while (rank(steps[full].second) != ambient)
        ++full;
    f.lo_ = steps[first].first;
    f.hi_ = steps[full].first;
    std::size_t cur = first;
    for (int m = f.lo_; m <= f.hi_; ++m) {
        while (cur + 1 < steps.size() && steps[cur + 1].first <= m)
            ++cur;
        f.steps_.push_back(canonical_basis(steps[cur].second));
    }
    return f;
}

Matrix Filtration::step(int m) const
{
    if (n_ == 0 || m < lo_)
        return Matrix(n_, 0);
    if (m >= hi_)
        return Matrix::identity(n_);
    return steps_[static_cast<std::size_t>(m - lo_)];
}

std::size_t Filtration::dim(int m) const
{
    if (n_ == 0 || m < lo_)
        return 0;
    if (m >= hi_)
        return n_;
    return steps_[static_cast<std::size_t>(m - lo_)].cols();
}

std::size_t Filtration::graded_dim(int m) const
{
    return dim(m) - dim(m - 1);
}

std::map<int, std::size_t> Filtration::graded_dims() const
{
    std::map<int, std::size_t> out;
    if (n_ == 0)
        return out;
    for (int m = lo_; m <= hi_; ++m)
        if (std::size_t g = graded_dim(m))
            out[m] = g;
    return out;
}

Filtration Filtration::shifted(int s) const
{
    Filtration f = *this;
    f.lo_ += s;
    f.hi_ += s;
    return f;
}

Filtration Filtration::transformed(const Matrix& g) const
{
    Filtration f = *this;
    for (auto& b : f.steps_)
        b = canonical_basis(g * b);
    return f;
}

bool Filtration::operator==(const Filtration& rhs) const
{
    if (n_ != rhs.n_)
        return false;
    if (n_ == 0)
        return true;
    if (lo_ != rhs.lo_ || hi_ != rhs.hi_)
        return false;
    // Canonical bases make span equality a plain comparison.
    return steps_ == rhs.steps_;
}

Filtration grading_to_filtration(const std::vector<int>& weights)
{
    const std::size_t n = weights.size();
    if (n == 0)
        return Filtration::make(0, {});
    std::vector<int> idx;
    for (int w : weights)
        idx.push_back(-w);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    std::vector<std::pair<int, Matrix>> steps;
    for (int m : idx) {
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < n; ++i)
            if (-weights[i] <= m)
                cols.push_back(i);
        steps.emplace_back(m, Matrix::identity(n).cols_subset(cols));
    }
    return Filtration::make(n, steps);
}

NilpotentOp make_nilpotent(const Matrix& m)
{
    if (m.rows() != m.cols())
        throw Error("NotNilpotent", "operator is not square");
    NilpotentOp op{m, 0};
    Matrix p = Matrix::identity(m.rows());
    for (unsigned k = 0; k <= m.rows(); ++k) {
        if (p.is_zero()) {
            op.nilpotency_index = k;
            return op;
        }
        p = p * m;
    }
    throw Error("NotNilpotent", "no power up to the dimension vanishes");
}

std::vector<std::vector<Matrix>> jordan_chains(const NilpotentOp& op)
{
    const Matrix& N = op.matrix;
    const std::size_t n = N.rows();
    const unsigned s = op.nilpotency_index;
    std::vector<Matrix> ker(s + 1);
    Matrix p = Matrix::identity(n);
    for (unsigned j = 0; j <= s; ++j) {
        ker[j] = kernel_basis(p);
        p = p * N;
    }

    std::vector<std::vector<Matrix>> chains;
    for (unsigned j = s; j >= 1; --j) {
        // Height-j vectors already produced by longer chains.
        Matrix span = ker[j - 1];
        for (const auto& ch : chains)
            span = Matrix::hstack(span, ch[ch.size() - j]);
        std::size_t r = rank(span);
        for (std::size_t c = 0; c < ker[j].cols(); ++c) {
            Matrix v = ker[j].col(c);
            Matrix trial = Matrix::hstack(span, v);
            if (rank(trial) == r)
                continue;
            span = trial;
            ++r;
            std::vector<Matrix> ch{v};
            for (unsigned t = 1; t < j; ++t)
                ch.push_back(N * ch.back());
            chains.push_back(std::move(ch));
        }
    }
    return chains;
}

namespace {

Filtration filtration_from_weighted_vectors(std::size_t n, const std::vector<std::pair<int, Matrix>>& vecs)
{
    if (n == 0)
        return Filtration::make(0, {});
    std::vector<int> ws;
    for (const auto& v : vecs)
        ws.push_back(v.first);
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    std::vector<std::pair<int, Matrix>> steps;
    for (int w : ws) {
        Matrix b(n, 0);
        for (const auto& v : vecs)
            if (v.first <= w)
                b = Matrix::hstack(b, v.second);
        steps.emplace_back(w, b);
    }
    return Filtration::make(n, steps);
}

} // namespace

Filtration weight_filtration(const NilpotentOp& op, int center)
{
    const std::size_t n = op.matrix.rows();
    std::vector<std::pair<int, Matrix>> vecs;
    for (const auto& ch : jordan_chains(op)) {
        const int L = static_cast<int>(ch.size());
        for (int t = 0; t < L; ++t)
            vecs.emplace_back(center + L - 1 - 2 * t, ch[static_cast<std::size_t>(t)]);
    }
    Filtration w = filtration_from_weighted_vectors(n, vecs);
    WeightCheck chk = check_weight_properties(op.matrix, center, w);
    if (!chk.ok)
        throw Error("WeightFiltrationInvalid", chk.message);
    return w;
}

Filtration weight_filtration_kernel_image(const NilpotentOp& op, int center)
{
    const Matrix& N = op.matrix;
    const std::size_t n = N.rows();
    if (n == 0)
        return Filtration::make(0, {});
    const int s = static_cast<int>(op.nilpotency_index);
    std::vector<Matrix> ker(static_cast<std::size_t>(s) + 1), im(static_cast<std::size_t>(s) + 1);
    Matrix p = Matrix::identity(n);
    for (int j = 0; j <= s; ++j) {
        ker[static_cast<std::size_t>(j)] = kernel_basis(p);
        im[static_cast<std::size_t>(j)] = image_basis(p);
        p = p * N;
    }
    auto K = [&](int a) { return ker[static_cast<std::size_t>(std::min(a, s))]; };
    auto I = [&](int b) { return b <= 0 ? Matrix::identity(n) : im[static_cast<std::size_t>(std::min(b, s))]; };
    std::vector<std::pair<int, Matrix>> steps;
    for (int i = -s; i <= s; ++i) {
        Matrix acc(n, 0);
        for (int j = 0; j < s; ++j)
            acc = subspace_sum(acc, subspace_meet(K(j + 1), I(j - i)));
        steps.emplace_back(center + i, acc);
    }
    return Filtration::make(n, steps);
}

WeightCheck check_weight_properties(const Matrix& N, int k, const Filtration& w)
{
    WeightCheck out;
    const std::size_t n = N.rows();
    if (w.ambient_dim() != n) {
        out.ok = false;
        out.message = "ambient mismatch";
        return out;
    }
    if (n == 0)
        return out;
    if (!maps_into(N, w, -2)) {
        out.ok = false;
        out.message = "N(W_i) is not contained in W_{i-2}";
        return out;
    }
    const int span = std::max(std::abs(w.lo() - k), std::abs(w.hi() - k)) + 1;
    Matrix Nj = Matrix::identity(n);
    for (int j = 1; j <= span; ++j) {
        Nj = Nj * N;
        std::size_t top = w.graded_dim(k + j), bot = w.graded_dim(k - j);
        if (top != bot) {
            out.ok = false;
            out.message = "dim Gr_" + std::to_string(k + j) + " != dim Gr_" + std::to_string(k - j);
            return out;
        }
        if (top == 0)
            continue;
        Matrix lower = w.step(k - j - 1);
        Matrix img = Matrix::hstack(Nj * w.step(k + j), lower);
        if (rank(img) - lower.cols() != top) {
            out.ok = false;
            out.message = "N^" + std::to_string(j) + " is not injective on Gr_" + std::to_string(k + j);
            return out;
        }
    }
    return out;
}

bool maps_into(const Matrix& N, const Filtration& g, int shift)
{
    if (g.ambient_dim() == 0)
        return true;
    for (int m = g.lo() - std::abs(shift) - 1; m <= g.hi() + std::abs(shift) + 1; ++m) {
        Matrix b = g.step(m);
        if (b.cols() == 0)
            continue;
        if (!subspace_contains(g.step(m + shift), N * b))
            return false;
    }
    return true;
}

} // namespace hodgeforge
