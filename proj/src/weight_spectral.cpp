#include "hodgeforge/weight_spectral.hpp"

#include "hodgeforge/error.hpp"

#include <algorithm>
#include <set>

namespace hodgeforge {

const char* page_name(PageKind k)
{
    switch (k) {
    case PageKind::Relative:
        return "relative";
    case PageKind::Nearby:
        return "nearby";
    case PageKind::Open:
        return "open";
    case PageKind::Divisor:
        return "divisor";
    }
    return "?";
}

const KCell* KGrid::find(const KIndex& idx) const
{
    auto it = cells.find(idx);
    return it == cells.end() ? nullptr : &it->second;
}

namespace {

std::string idx_str(const KIndex& i)
{
    return "K^{" + std::to_string(i[0]) + "," + std::to_string(i[1]) + "," + std::to_string(i[2]) + "}";
}

int eps(int a)
{
    // (-1)^{a(a-1)/2}
    long v = static_cast<long>(a) * (a - 1) / 2;
    return v % 2 == 0 ? 1 : -1;
}

} // namespace

KGrid build_K(const StrataComplex& s, PageKind kind)
{
    KGrid g;
    g.kind = kind;
    if (kind == PageKind::Relative) {
        g.n_eff = s.n;
        g.shift = 0;
    } else if (kind == PageKind::Nearby) {
        g.n_eff = s.n - 1;
        g.shift = 1;
    } else {
        throw Error("InvalidPage", "K grid exists only for the relative and nearby pages");
    }
    for (int mm = 0; mm + g.shift <= s.n; ++mm) {
        const int m = mm + g.shift;
        for (int a = 0; a <= 2 * (s.n - m); ++a) {
            const std::size_t d = s.dim(m, a);
            if (!d)
                continue;
            // i = 2k - mm with k >= 0 and k >= i, i.e. 0 <= k <= mm.
            for (int k = 0; k <= mm; ++k) {
                const int i = 2 * k - mm;
                const int j = a - i + 2 * k - g.n_eff;
                g.cells[{i, j, k}] = KCell{m, a, i - k, d};
            }
        }
    }
    return g;
}

Matrix d1_block(StrataMaps& maps, const KGrid& g, const KIndex& src, const KIndex& dst)
{
    const KCell* a = g.find(src);
    const KCell* b = g.find(dst);
    if (!a || !b)
        return Matrix(b ? b->dim : 0, a ? a->dim : 0);
    if (dst[0] != src[0] + 1 || dst[1] != src[1] + 1)
        return Matrix(b->dim, a->dim);
    if (dst[2] == src[2])
        return -maps.gysin(a->stratum, a->degree);
    if (dst[2] == src[2] + 1)
        return maps.restriction(a->stratum, a->degree);
    return Matrix(b->dim, a->dim);
}

namespace {

std::vector<KIndex> d1_targets(const KIndex& x)
{
    return {{x[0] + 1, x[1] + 1, x[2]}, {x[0] + 1, x[1] + 1, x[2] + 1}};
}

Matrix nu_block(const KGrid& g, const KIndex& src, const KIndex& dst)
{
    const KCell* a = g.find(src);
    const KCell* b = g.find(dst);
    if (!a || !b)
        return Matrix(b ? b->dim : 0, a ? a->dim : 0);
    if (dst[0] == src[0] + 2 && dst[1] == src[1] && dst[2] == src[2] + 1)
        return Matrix::identity(a->dim);
    return Matrix(b->dim, a->dim);
}

Matrix lef_block(StrataMaps& maps, const KGrid& g, const KIndex& src, const KIndex& dst)
{
    const KCell* a = g.find(src);
    const KCell* b = g.find(dst);
    if (!a || !b)
        return Matrix(b ? b->dim : 0, a ? a->dim : 0);
    if (dst[0] == src[0] && dst[1] == src[1] + 2 && dst[2] == src[2])
        return maps.lefschetz(a->stratum, a->degree);
    return Matrix(b->dim, a->dim);
}

std::size_t cell_dim(const KGrid& g, const KIndex& i)
{
    const KCell* c = g.find(i);
    return c ? c->dim : 0;
}

} // namespace

void check_d1_squared(StrataMaps& maps, const KGrid& g)
{
    for (const auto& [x, cell] : g.cells) {
        std::map<KIndex, Matrix> acc;
        for (const auto& mid : d1_targets(x)) {
            if (!g.find(mid))
                continue;
            Matrix first = d1_block(maps, g, x, mid);
            for (const auto& t : d1_targets(mid)) {
                if (!g.find(t))
                    continue;
                Matrix prod = d1_block(maps, g, mid, t) * first;
                auto it = acc.find(t);
                if (it == acc.end())
                    acc.emplace(t, prod);
                else
                    it->second = it->second + prod;
            }
        }
        for (const auto& [t, m] : acc)
            if (!m.is_zero())
                throw Error("D1SquareNonzero", "d1^2 != 0 from " + idx_str(x) + " to " + idx_str(t) + " (" +
                                                   page_name(g.kind) + " page)");
    }
}

std::size_t PageResult::dim(int degree) const
{
    std::size_t n = 0;
    auto it = graded.find(degree);
    if (it != graded.end())
        for (const auto& [w, d] : it->second)
            n += d;
    return n;
}

long PageResult::euler() const
{
    long e = 0;
    for (const auto& [q, ws] : graded)
        for (const auto& [w, d] : ws)
            e += (q % 2 == 0 ? 1 : -1) * static_cast<long>(d);
    return e;
}

namespace {

Matrix complement_in(const Matrix& z, const Matrix& b)
{
    Matrix acc = b;
    std::vector<std::size_t> keep;
    std::size_t r = rank(acc);
    for (std::size_t j = 0; j < z.cols(); ++j) {
        Matrix next = Matrix::hstack(acc, z.col(j));
        std::size_t rn = rank(next);
        if (rn > r) {
            acc = std::move(next);
            r = rn;
            keep.push_back(j);
        }
    }
    return z.cols_subset(keep);
}

// Shared tail of every page: cohomology of each row, purity of E1 terms.
void finish_page(PageResult& p, const StrataComplex& s)
{
    for (const auto& [key, term] : p.e1) {
        auto dit = p.d1.find(key);
        Matrix d = dit != p.d1.end() ? dit->second : Matrix(0, term.dim);
        auto pit = p.d1.find({key.first - 1, key.second});
        Matrix z = kernel_basis(d);
        Matrix b = pit != p.d1.end() ? image_basis(pit->second) : Matrix(term.dim, 0);
        E2Term e;
        e.col = key.first;
        e.weight = key.second;
        e.degree = term.degree;
        e.boundaries = b;
        e.reps = complement_in(z, b);
        if (e.dim())
            p.graded[e.degree][e.weight] += e.dim();
        p.e2.emplace(key, std::move(e));
    }
    // Every E1 term must be pure of its row weight for d_r (r >= 2) to vanish:
    // d_r maps weight w to weight w - r + 1.
    for (const auto& [key, term] : p.e1)
        for (std::size_t b = 0; b < term.blocks.size(); ++b) {
            const auto [m, a] = term.blocks[b];
            int twist = 0;
            if (p.kind == PageKind::Relative || p.kind == PageKind::Nearby) {
                const KIndex& c = term.cells[b];
                twist = 2 * (c[2] - c[0]);
            } else if (p.kind == PageKind::Open) {
                twist = 2 * m;
            }
            for (std::size_t c = 0; c < s.components(m); ++c) {
                const auto& comp = s.strata[static_cast<std::size_t>(m)][c];
                if (!comp.b(a))
                    continue;
                if (comp.weight(a) + twist != key.second) {
                    p.e3_equals_e2 = false;
                    p.degeneration_note = "impure E1 term at (" + std::to_string(key.first) + "," +
                                          std::to_string(key.second) + ")";
                    throw Error("DegenerationFails", std::string(page_name(p.kind)) + " page: " + p.degeneration_note);
                }
                if (!comp.is_tate(a) || comp.weight(a) % 2)
                    p.hodge_tate = false;
            }
        }
    p.degeneration_note = "E1 terms pure of their row weight; d_r for r >= 2 changes weight, so E3 = E2";
}

void add_block(E1Term& t, int m, int a, std::size_t dim, const KIndex& cell = {0, 0, 0})
{
    t.offsets.push_back(t.dim);
    t.blocks.emplace_back(m, a);
    t.cells.push_back(cell);
    t.dim += dim;
}

PageResult k_page(const StrataComplex& s, PageKind kind)
{
    PageResult p;
    p.kind = kind;
    StrataMaps maps(s);
    KGrid g = build_K(s, kind);
    check_d1_squared(maps, g);
    for (const auto& [x, cell] : g.cells) {
        const int w = x[1] - x[0] + g.n_eff;
        auto& t = p.e1[{x[0], w}];
        t.col = x[0];
        t.weight = w;
        t.degree = w + x[0];
        add_block(t, cell.stratum, cell.degree, cell.dim, x);
    }
    for (const auto& [key, src] : p.e1) {
        auto it = p.e1.find({key.first + 1, key.second});
        if (it == p.e1.end())
            continue;
        const E1Term& dst = it->second;
        Matrix d(dst.dim, src.dim);
        for (std::size_t a = 0; a < src.cells.size(); ++a)
            for (std::size_t b = 0; b < dst.cells.size(); ++b) {
                Matrix blk = d1_block(maps, g, src.cells[a], dst.cells[b]);
                if (!blk.empty())
                    d.set_block(dst.offsets[b], src.offsets[a], blk);
            }
        p.d1.emplace(key, std::move(d));
    }
    finish_page(p, s);
    return p;
}

} // namespace

PageResult e2_relative(const StrataComplex& s)
{
    return k_page(s, PageKind::Relative);
}

PageResult e2_nearby(const StrataComplex& s)
{
    return k_page(s, PageKind::Nearby);
}

PageResult e2_open(const StrataComplex& s)
{
    PageResult p;
    p.kind = PageKind::Open;
    StrataMaps maps(s);
    // E1^{-m, a+2m} = H^a(D(m))(-m), Gysin differential.
    for (int m = 0; m <= s.n; ++m)
        for (int a = 0; a <= 2 * (s.n - m); ++a) {
            std::size_t d = s.dim(m, a);
            if (!d)
                continue;
            auto& t = p.e1[{-m, a + 2 * m}];
            t.col = -m;
            t.weight = a + 2 * m;
            t.degree = a + m;
            add_block(t, m, a, d);
        }
    for (const auto& [key, src] : p.e1) {
        auto it = p.e1.find({key.first + 1, key.second});
        if (it == p.e1.end())
            continue;
        const auto [m, a] = src.blocks[0];
        p.d1.emplace(key, maps.gysin(m, a));
    }
    for (int m = 2; m <= s.n; ++m)
        for (int a = 0; a <= 2 * (s.n - m); ++a)
            if (!(maps.gysin(m - 1, a + 2) * maps.gysin(m, a)).is_zero())
                throw Error("D1SquareNonzero", "gysin^2 != 0 on H^" + std::to_string(a) + "(D(" + std::to_string(m) +
                                                   ")) (open page)");
    finish_page(p, s);
    return p;
}

PageResult mv_divisor(const StrataComplex& s)
{
    PageResult p;
    p.kind = PageKind::Divisor;
    StrataMaps maps(s);
    // E1^{m, q} = H^q(D(m+1)), restriction differential.
    for (int m = 0; m + 1 <= s.n; ++m)
        for (int a = 0; a <= 2 * (s.n - m - 1); ++a) {
            std::size_t d = s.dim(m + 1, a);
            if (!d)
                continue;
            auto& t = p.e1[{m, a}];
            t.col = m;
            t.weight = a;
            t.degree = m + a;
            add_block(t, m + 1, a, d);
        }
    for (const auto& [key, src] : p.e1) {
        auto it = p.e1.find({key.first + 1, key.second});
        if (it == p.e1.end())
            continue;
        const auto [m, a] = src.blocks[0];
        p.d1.emplace(key, maps.restriction(m, a));
    }
    for (int m = 1; m + 2 <= s.n; ++m)
        for (int a = 0; a <= 2 * (s.n - m); ++a)
            if (!(maps.restriction(m + 1, a) * maps.restriction(m, a)).is_zero())
                throw Error("D1SquareNonzero", "rho^2 != 0 on H^" + std::to_string(a) + "(D(" + std::to_string(m) +
                                                   ")) (divisor page)");
    finish_page(p, s);
    return p;
}

PageResult compute_page(const StrataComplex& s, PageKind kind)
{
    switch (kind) {
    case PageKind::Relative:
        return e2_relative(s);
    case PageKind::Nearby:
        return e2_nearby(s);
    case PageKind::Open:
        return e2_open(s);
    case PageKind::Divisor:
        return mv_divisor(s);
    }
    return e2_relative(s);
}

std::vector<CheckResult> nu_check(const StrataComplex& s, const KGrid& g)
{
    StrataMaps maps(s);
    CheckResult iso{"nu^i: K^{-i,j} = K^{i,j}", true, ""};
    CheckResult ker{"ker nu^{i+1} on K^{-i,j} is K^{-i,j,0}", true, ""};
    CheckResult comm{"[d1, nu] = 0", true, ""};

    std::set<std::pair<int, int>> ij;
    for (const auto& [x, c] : g.cells)
        ij.insert({x[0], x[1]});
    for (auto [i, j] : ij) {
        if (i <= 0)
            continue;
        // Cellwise identity from (-i, j, k) to (i, j, k + i).
        std::size_t src = 0, dst = 0, hit = 0;
        for (const auto& [x, c] : g.cells) {
            if (x[0] == -i && x[1] == j) {
                src += c.dim;
                const KCell* t = g.find({i, j, x[2] + i});
                if (t && t->stratum == c.stratum && t->degree == c.degree)
                    hit += c.dim;
            }
            if (x[0] == i && x[1] == j)
                dst += c.dim;
        }
        if (src != dst || hit != src) {
            iso.ok = false;
            iso.detail = "i=" + std::to_string(i) + " j=" + std::to_string(j);
        }
    }
    for (auto [i, j] : ij) {
        if (i > 0)
            continue;
        const int ii = -i;
        for (const auto& [x, c] : g.cells) {
            if (x[0] != i || x[1] != j)
                continue;
            const bool killed = !g.find({ii + 2, j, x[2] + ii + 1});
            if (killed != (x[2] == 0)) {
                ker.ok = false;
                ker.detail = idx_str(x);
            }
        }
    }
    for (const auto& [x, c] : g.cells) {
        const KIndex nx{x[0] + 2, x[1], x[2] + 1};
        for (const KIndex& t : std::vector<KIndex>{{x[0] + 3, x[1] + 1, x[2] + 1}, {x[0] + 3, x[1] + 1, x[2] + 2}}) {
            if (!g.find(t))
                continue;
            Matrix lhs(cell_dim(g, t), c.dim), rhs(cell_dim(g, t), c.dim);
            if (g.find(nx))
                lhs = d1_block(maps, g, nx, t) * nu_block(g, x, nx);
            for (const auto& mid : d1_targets(x)) {
                const KIndex nm{mid[0] + 2, mid[1], mid[2] + 1};
                if (g.find(mid) && nm == t)
                    rhs = rhs + nu_block(g, mid, t) * d1_block(maps, g, x, mid);
            }
            if (lhs != rhs) {
                comm.ok = false;
                comm.detail = idx_str(x) + " -> " + idx_str(t);
            }
        }
    }
    return {iso, ker, comm};
}

namespace {

// psi(x, y) = x^T M y for x in X = (a, b, c), y in the partner (-a, -b, c - a).
KIndex partner(const KIndex& x)
{
    return {-x[0], -x[1], x[2] - x[0]};
}

Matrix psi_matrix(StrataMaps& maps, const KGrid& g, const KIndex& x)
{
    const KCell* cx = g.find(x);
    const KCell* cy = g.find(partner(x));
    if (!cx || !cy)
        return Matrix(cx ? cx->dim : 0, cy ? cy->dim : 0);
    // x in K^{-i,-j,k} with i = -x[0], j = -x[1].
    const int i = -x[0], j = -x[1];
    Matrix m = maps.pairing(cx->stratum, cx->degree);
    return eps(i + j - g.n_eff) > 0 ? m : -m;
}

} // namespace

std::vector<CheckResult> lefschetz_pairing_check(const StrataComplex& s, const KGrid& g)
{
    StrataMaps maps(s);
    CheckResult dl{"[d1, L] = 0", true, ""};
    CheckResult adj{"psi(d1' x, y) = psi(x, d1'' y)", true, ""};
    CheckResult adj2{"psi(d1'' x, y) = psi(x, d1' y)", true, ""};
    CheckResult sym{"psi(x, y) = (-1)^n psi(y, x)", true, ""};
    CheckResult nua{"psi(nu x, y) + psi(x, nu y) = 0", true, ""};
    CheckResult la{"psi(L x, y) + psi(x, L y) = 0", true, ""};
    CheckResult pos{"Q positive on primitive parts", true, ""};

    for (const auto& [x, c] : g.cells) {
        const KIndex lx{x[0], x[1] + 2, x[2]};
        for (const auto& t0 : d1_targets(x)) {
            const KIndex t{t0[0], t0[1] + 2, t0[2]};
            if (!g.find(t))
                continue;
            Matrix lhs(cell_dim(g, t), c.dim), rhs(cell_dim(g, t), c.dim);
            if (g.find(t0))
                lhs = lef_block(maps, g, t0, t) * d1_block(maps, g, x, t0);
            if (g.find(lx))
                rhs = d1_block(maps, g, lx, t) * lef_block(maps, g, x, lx);
            if (lhs != rhs) {
                dl.ok = false;
                dl.detail = idx_str(x) + " -> " + idx_str(t);
            }
        }

        const KIndex y = partner(x);
        Matrix mx = psi_matrix(maps, g, x);
        if (g.find(y)) {
            Matrix my = psi_matrix(maps, g, y);
            const KCell* cy = g.find(y);
            const int sign = ((x[0] + x[1] + c.degree * cy->degree) % 2 == 0) ? 1 : -1;
            if (mx != (sign > 0 ? my.transpose() : Matrix(-my.transpose()))) {
                sym.ok = false;
                sym.detail = idx_str(x);
            }
        }

        // d1' x in (a+1, b+1, c); its partner maps by d1'' onto the partner of x.
        const KIndex xp{x[0] + 1, x[1] + 1, x[2]};
        if (g.find(xp)) {
            const KIndex yp = partner(xp);
            Matrix lhs = d1_block(maps, g, x, xp).transpose() * psi_matrix(maps, g, xp);
            Matrix rhs = g.find(yp) ? mx * d1_block(maps, g, yp, y) : Matrix(c.dim, 0);
            if (g.find(yp) && lhs != rhs) {
                adj.ok = false;
                adj.detail = idx_str(x);
            }
            if (!g.find(yp) && !lhs.is_zero()) {
                adj.ok = false;
                adj.detail = idx_str(x);
            }
        }
        const KIndex xpp{x[0] + 1, x[1] + 1, x[2] + 1};
        if (g.find(xpp)) {
            const KIndex ypp = partner(xpp);
            Matrix lhs = d1_block(maps, g, x, xpp).transpose() * psi_matrix(maps, g, xpp);
            if (g.find(ypp)) {
                Matrix rhs = mx * d1_block(maps, g, ypp, y);
                if (lhs != rhs) {
                    adj2.ok = false;
                    adj2.detail = idx_str(x);
                }
            } else if (!lhs.is_zero()) {
                adj2.ok = false;
                adj2.detail = idx_str(x);
            }
        }

        const KIndex nx{x[0] + 2, x[1], x[2] + 1};
        if (g.find(nx) || g.find(partner(nx))) {
            const KIndex ny = partner(nx);
            Matrix lhs = g.find(nx) ? Matrix(nu_block(g, x, nx).transpose() * psi_matrix(maps, g, nx))
                                    : Matrix(c.dim, cell_dim(g, ny));
            Matrix rhs = g.find(ny) && g.find(y) ? mx * nu_block(g, ny, y) : Matrix(c.dim, cell_dim(g, ny));
            if (!(lhs + rhs).is_zero()) {
                nua.ok = false;
                nua.detail = idx_str(x);
            }
        }
        if (g.find(lx)) {
            const KIndex ly = partner(lx);
            if (g.find(ly) && g.find(y)) {
                Matrix lhs = lef_block(maps, g, x, lx).transpose() * psi_matrix(maps, g, lx);
                Matrix rhs = mx * lef_block(maps, g, ly, y);
                if (!(lhs + rhs).is_zero()) {
                    la.ok = false;
                    la.detail = idx_str(x);
                }
            }
        }

        // Q(x, y) = psi(x, nu^i L^j y) on the primitive part of K^{-i,-j,0}.
        if (x[2] == 0 && x[0] <= 0 && x[1] <= 0 && c.degree % 2 == 0) {
            const int i = -x[0], j = -x[1];
            bool tate = true;
            for (std::size_t k = 0; k < s.components(c.stratum); ++k)
                tate = tate && s.strata[static_cast<std::size_t>(c.stratum)][k].is_tate(c.degree);
            if (tate) {
                Matrix lpow = Matrix::identity(c.dim);
                for (int t = 0; t < j; ++t)
                    lpow = maps.lefschetz(c.stratum, c.degree + 2 * t) * lpow;
                Matrix prim = Matrix::identity(c.dim);
                if (c.degree + 2 * (j + 1) <= 2 * (s.n - c.stratum))
                    prim = kernel_basis(maps.lefschetz(c.stratum, c.degree + 2 * j) * lpow);
                if (prim.cols()) {
                    Matrix q = prim.transpose() * mx * lpow * prim;
                    if (!positive_definite(q)) {
                        pos.ok = false;
                        pos.detail = idx_str(x) + " i=" + std::to_string(i);
                    }
                }
            }
        }
    }
    return {dl, adj, adj2, sym, nua, la, pos};
}

Matrix e2_nu(const StrataComplex&, const PageResult& page, std::pair<int, int> from)
{
    auto sit = page.e2.find(from);
    auto tit = page.e2.find({from.first + 2, from.second - 2});
    const std::size_t sd = sit == page.e2.end() ? 0 : sit->second.dim();
    const std::size_t td = tit == page.e2.end() ? 0 : tit->second.dim();
    Matrix out(td, sd);
    if (!sd || !td)
        return out;
    const E1Term& a = page.e1.at(from);
    const E1Term& b = page.e1.at({from.first + 2, from.second - 2});
    Matrix nu(b.dim, a.dim);
    for (std::size_t p = 0; p < a.cells.size(); ++p)
        for (std::size_t q = 0; q < b.cells.size(); ++q) {
            const KIndex& x = a.cells[p];
            const KIndex& y = b.cells[q];
            if (y[0] == x[0] + 2 && y[1] == x[1] && y[2] == x[2] + 1 && a.blocks[p] == b.blocks[q]) {
                const std::size_t end = p + 1 < a.offsets.size() ? a.offsets[p + 1] : a.dim;
                for (std::size_t t = 0; t < end - a.offsets[p]; ++t)
                    nu(b.offsets[q] + t, a.offsets[p] + t) = 1;
            }
        }
    const E2Term& src = sit->second;
    const E2Term& dst = tit->second;
    Matrix img = nu * src.reps;
    Matrix basis = Matrix::hstack(dst.reps, dst.boundaries);
    Matrix coords = solve(basis, img);
    return coords.block(0, 0, td, sd);
}

CheckResult e2_monodromy_check(const StrataComplex& s, const PageResult& page)
{
    CheckResult r{std::string("nu^r: Gr_{q+r} = Gr_{q-r} on E2 (") + page_name(page.kind) + ")", true, ""};
    if (page.kind != PageKind::Relative && page.kind != PageKind::Nearby) {
        r.ok = false;
        r.detail = "page has no nu";
        return r;
    }
    for (const auto& [q, ws] : page.graded)
        for (const auto& [w, d] : ws) {
            const int rr = w - q;
            if (rr <= 0)
                continue;
            // Gr_{q+r} sits at column -r; compose r steps of nu.
            std::pair<int, int> at{-rr, w};
            Matrix comp = Matrix::identity(d);
            for (int t = 0; t < rr; ++t) {
                comp = e2_nu(s, page, at) * comp;
                at = {at.first + 2, at.second - 2};
            }
            auto it = ws.find(q - rr);
            const std::size_t td = it == ws.end() ? 0 : it->second;
            if (td != d || rank(comp) != d) {
                r.ok = false;
                r.detail = "H^" + std::to_string(q) + " r=" + std::to_string(rr);
            }
        }
    return r;
}

bool exact_dims(const std::vector<std::size_t>& dims)
{
    long in = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const long out = static_cast<long>(dims[i]) - in;
        if (out < 0)
            return false;
        const long next = i + 1 < dims.size() ? static_cast<long>(dims[i + 1]) : 0;
        if (out > next)
            return false;
        in = out;
    }
    return in == 0;
}

namespace {

std::size_t gr(const PageResult& p, int q, int w)
{
    auto it = p.graded.find(q);
    if (it == p.graded.end())
        return 0;
    auto jt = it->second.find(w);
    return jt == it->second.end() ? 0 : jt->second;
}

} // namespace

std::vector<CheckResult> les_check(const StrataComplex& s)
{
    const PageResult rel = e2_relative(s);
    const PageResult open = e2_open(s);
    const PageResult near = e2_nearby(s);
    const PageResult div = mv_divisor(s);
    const int top = 2 * s.n;

    CheckResult les{"H(Y,Y_inf) -> H(Y) -> H(Y_inf) exact per weight", true, ""};
    for (int w = 0; w <= 2 * top + 2; ++w) {
        std::vector<std::size_t> v;
        for (int k = 0; k <= top + 1; ++k) {
            v.push_back(gr(rel, k, w));
            v.push_back(gr(open, k, w));
            v.push_back(gr(near, k, w));
        }
        if (!exact_dims(v)) {
            les.ok = false;
            les.detail = "weight " + std::to_string(w);
            break;
        }
    }

    // H_{2n-k}(D)(-n) -> H^k(D) -> H^k(Y_inf) -> H^k(Y_inf)(-1) -> H_{2n-k-2}(D)(-n) -> ...
    CheckResult cs{"Clemens-Schmid exact per weight", true, ""};
    for (int parity = 0; parity < 2 && cs.ok; ++parity)
        for (int w = 0; w <= 2 * top + 2; ++w) {
            std::vector<std::size_t> v;
            for (int k = parity - 2; k <= top + 2; k += 2) {
                v.push_back(2 * s.n - w >= 0 ? gr(div, 2 * s.n - k, 2 * s.n - w) : 0);
                v.push_back(gr(div, k, w));
                v.push_back(gr(near, k, w));
                v.push_back(gr(near, k, w - 2));
            }
            if (!exact_dims(v)) {
                cs.ok = false;
                cs.detail = "weight " + std::to_string(w) + (parity ? " odd" : " even");
                break;
            }
        }
    return {les, cs};
}

long stratum_euler(const StrataComplex& s)
{
    long e = 0;
    for (int m = 0; m <= s.n; ++m) {
        long chi = 0;
        for (int a = 0; a <= 2 * (s.n - m); ++a)
            chi += (a % 2 == 0 ? 1 : -1) * static_cast<long>(s.dim(m, a));
        e += (m % 2 == 0 ? 1 : -1) * (m + 1) * chi;
    }
    return e;
}

RescalingModel assemble_rescaling(const StrataComplex& s)
{
    if (!s.hodge_tate())
        throw Error("NonHTStrata", "strata of " + (s.label.empty() ? std::string("input") : s.label) +
                                       " carry non-Tate cohomology");
    const PageResult rel = e2_relative(s);
    std::map<int, RescalingComponent> comps;
    for (const auto& [q, ws] : rel.graded) {
        std::map<int, std::size_t> off;
        std::size_t total = 0;
        for (const auto& [w, d] : ws) {
            if (w % 2)
                throw Error("NonHTStrata", "odd weight " + std::to_string(w) + " in H^" + std::to_string(q));
            off[w] = total;
            total += d;
        }
        RescalingComponent c;
        c.N = Matrix(total, total);
        for (const auto& [w, d] : ws)
            for (std::size_t t = 0; t < d; ++t)
                c.lambda.push_back(Rational(w / 2));
        for (const auto& [w, d] : ws) {
            auto it = off.find(w - 2);
            if (it == off.end())
                continue;
            Matrix blk = e2_nu(s, rel, {q - w, w});
            c.N.set_block(it->second, off[w], blk);
        }
        if (total)
            comps.emplace(q, std::move(c));
    }
    return make_rescaling(std::move(comps), s.label);
}

bool SuiteReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
}

SuiteReport full_suite(const StrataComplex& s)
{
    SuiteReport r;
    for (const auto& c : check_strata(s))
        r.checks.push_back({c.name, c.ok, c.detail});
    for (PageKind kind : {PageKind::Relative, PageKind::Nearby}) {
        const std::string tag = std::string(" (") + page_name(kind) + ")";
        try {
            StrataMaps maps(s);
            KGrid g = build_K(s, kind);
            check_d1_squared(maps, g);
            r.checks.push_back({"d1^2 = 0" + tag, true, ""});
            for (auto c : nu_check(s, g)) {
                c.name += tag;
                r.checks.push_back(c);
            }
            for (auto c : lefschetz_pairing_check(s, g)) {
                c.name += tag;
                r.checks.push_back(c);
            }
            PageResult p = compute_page(s, kind);
            r.checks.push_back({"E3 = E2" + tag, p.e3_equals_e2, p.degeneration_note});
            r.checks.push_back(e2_monodromy_check(s, p));
        } catch (const Error& e) {
            r.checks.push_back({e.code() + tag, false, e.what()});
        }
    }
    try {
        for (const auto& c : les_check(s))
            r.checks.push_back(c);
    } catch (const Error& e) {
        r.checks.push_back({e.code(), false, e.what()});
    }
    return r;
}

} // namespace hodgeforge
