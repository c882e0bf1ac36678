#include "hodgeforge/double_complex.hpp"

#include "hodgeforge/error.hpp"

#include <algorithm>

namespace hodgeforge {

namespace {

std::string bi(Bidegree b)
{
    return "(" + std::to_string(b.first) + "," + std::to_string(b.second) + ")";
}

int total_max(const DoubleComplex& dc)
{
    int t = 0;
    for (const auto& [b, n] : dc.spaces)
        if (n)
            t = std::max(t, b.first + b.second);
    return t;
}

} // namespace

std::size_t DoubleComplex::dim(Bidegree b) const
{
    auto it = spaces.find(b);
    return it == spaces.end() ? 0 : it->second;
}

Matrix DoubleComplex::delta1(Bidegree s) const
{
    auto it = d1.find(s);
    return it == d1.end() ? Matrix(dim({s.first + 1, s.second}), dim(s)) : it->second;
}

Matrix DoubleComplex::delta2(Bidegree s) const
{
    auto it = d2.find(s);
    return it == d2.end() ? Matrix(dim({s.first, s.second + 1}), dim(s)) : it->second;
}

DoubleComplex make_double_complex(std::map<Bidegree, std::size_t> spaces, std::map<Bidegree, Matrix> d1,
                                  std::map<Bidegree, Matrix> d2)
{
    DoubleComplex dc{std::move(spaces), std::move(d1), std::move(d2), false};
    for (const auto& [b, n] : dc.spaces)
        if (n && (b.first < 0 || b.second < 0))
            throw Error("ShapeMismatch", "space outside the first quadrant at " + bi(b));
    for (const auto& [s, m] : dc.d1)
        if (m.rows() != dc.dim({s.first + 1, s.second}) || m.cols() != dc.dim(s))
            throw Error("ShapeMismatch", "d1 at " + bi(s) + " has the wrong shape");
    for (const auto& [s, m] : dc.d2)
        if (m.rows() != dc.dim({s.first, s.second + 1}) || m.cols() != dc.dim(s))
            throw Error("ShapeMismatch", "d2 at " + bi(s) + " has the wrong shape");

    bool anti = true, comm = true;
    for (const auto& [s, n] : dc.spaces) {
        if (!n)
            continue;
        if (!(dc.delta1({s.first + 1, s.second}) * dc.delta1(s)).is_zero())
            throw Error("NotAComplex", "d1 d1 != 0 at " + bi(s));
        if (!(dc.delta2({s.first, s.second + 1}) * dc.delta2(s)).is_zero())
            throw Error("NotAComplex", "d2 d2 != 0 at " + bi(s));
        Matrix a = dc.delta1({s.first, s.second + 1}) * dc.delta2(s);
        Matrix b = dc.delta2({s.first + 1, s.second}) * dc.delta1(s);
        anti = anti && (a + b).is_zero();
        comm = comm && (a - b).is_zero();
    }
    if (!anti && !comm)
        throw Error("NotAComplex", "squares neither commute nor anticommute");
    dc.commuting = comm;
    return dc;
}

std::vector<Bidegree> total_layout(const DoubleComplex& dc, int l)
{
    std::vector<Bidegree> out;
    for (int p = 0; p <= l; ++p)
        if (dc.dim({p, l - p}))
            out.emplace_back(p, l - p);
    return out;
}

std::size_t total_dim(const DoubleComplex& dc, int l)
{
    std::size_t n = 0;
    for (auto b : total_layout(dc, l))
        n += dc.dim(b);
    return n;
}

Matrix total_differential(const DoubleComplex& dc, int l)
{
    auto src = total_layout(dc, l), dst = total_layout(dc, l + 1);
    Matrix d(total_dim(dc, l + 1), total_dim(dc, l));
    std::map<Bidegree, std::size_t> off;
    std::size_t o = 0;
    for (auto b : dst) {
        off[b] = o;
        o += dc.dim(b);
    }
    std::size_t c = 0;
    for (auto s : src) {
        Bidegree t1{s.first + 1, s.second}, t2{s.first, s.second + 1};
        if (off.count(t1))
            d.set_block(off[t1], c, dc.delta1(s));
        if (off.count(t2)) {
            Matrix m = dc.delta2(s);
            if (dc.commuting && s.first % 2)
                m = -m;
            d.set_block(off[t2], c, m);
        }
        c += dc.dim(s);
    }
    return d;
}

namespace {

// Columns of the cocycle space z whose classes extend the boundaries b to a basis.
Matrix complement_in(const Matrix& z, const Matrix& b)
{
    Matrix acc = b;
    std::vector<std::size_t> keep;
    std::size_t r = rank(acc);
    for (std::size_t j = 0; j < z.cols(); ++j) {
        Matrix next = Matrix::hstack(acc, z.col(j));
        std::size_t rn = rank(next);
        if (rn > r) {
            acc = next;
            r = rn;
            keep.push_back(j);
        }
    }
    return z.cols_subset(keep);
}

struct DegreeData {
    Matrix z, b, reps;
};

DegreeData degree_data(const DoubleComplex& dc, int l)
{
    const std::size_t n = total_dim(dc, l);
    DegreeData d;
    d.z = kernel_basis(total_differential(dc, l));
    d.b = l > 0 ? image_basis(total_differential(dc, l - 1)) : Matrix(n, 0);
    d.reps = complement_in(d.z, d.b);
    return d;
}

} // namespace

TotalCohomology total_cohomology(const DoubleComplex& dc)
{
    TotalCohomology out;
    for (int l = 0; l <= total_max(dc); ++l) {
        DegreeData d = degree_data(dc, l);
        out.dims[l] = d.reps.cols();
        out.representatives[l] = d.reps;
    }
    return out;
}

std::map<int, Filtration> column_filtration_images(const DoubleComplex& dc)
{
    std::map<int, Filtration> out;
    const int top = total_max(dc);
    for (int l = 0; l <= top; ++l) {
        DegreeData d = degree_data(dc, l);
        const std::size_t h = d.reps.cols();
        auto layout = total_layout(dc, l);
        Matrix dl = total_differential(dc, l);
        Matrix rb = Matrix::hstack(d.reps, d.b);
        std::vector<std::pair<int, Matrix>> steps;
        for (int m = -top - 1; m <= 0; ++m) {
            // Coordinates of F_m C^l: blocks with p >= -m.
            std::vector<std::size_t> idx;
            std::size_t o = 0;
            for (auto b : layout) {
                if (b.first >= -m)
                    for (std::size_t i = 0; i < dc.dim(b); ++i)
                        idx.push_back(o + i);
                o += dc.dim(b);
            }
            Matrix sub(total_dim(dc, l), idx.size());
            for (std::size_t j = 0; j < idx.size(); ++j)
                sub(idx[j], j) = 1;
            Matrix zm = sub * kernel_basis(dl * sub);
            // Boundaries from F_m C^{l-1}.
            std::size_t bm = 0;
            if (l > 0) {
                auto prev = total_layout(dc, l - 1);
                std::vector<std::size_t> pidx;
                std::size_t po = 0;
                for (auto b : prev) {
                    if (b.first >= -m)
                        for (std::size_t i = 0; i < dc.dim(b); ++i)
                            pidx.push_back(po + i);
                    po += dc.dim(b);
                }
                Matrix psub(total_dim(dc, l - 1), pidx.size());
                for (std::size_t j = 0; j < pidx.size(); ++j)
                    psub(pidx[j], j) = 1;
                bm = rank(total_differential(dc, l - 1) * psub);
            }
            const std::size_t hm = zm.cols() - bm;
            Matrix coords = zm.cols() ? solve(rb, zm).block(0, 0, h, zm.cols()) : Matrix(h, 0);
            Matrix img = image_basis(coords);
            if (img.cols() != hm)
                throw Error("InjectivityFails", "H^" + std::to_string(l) + "(F_" + std::to_string(m) +
                                                    ") -> H^" + std::to_string(l) + " is not injective");
            steps.emplace_back(m, img);
        }
        steps.emplace_back(1, Matrix::identity(h));
        out[l] = make_filtration(h, steps);
    }
    return out;
}

} // namespace hodgeforge
