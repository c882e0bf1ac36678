#include "hodgeforge/toric.hpp"

#include "hodgeforge/error.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <set>

namespace hodgeforge {

long dot(const IVec& a, const IVec& b)
{
    long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

namespace {

IVec sub(const IVec& a, const IVec& b)
{
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

IVec cross(const IVec& a, const IVec& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

long det3(const IVec& a, const IVec& b, const IVec& c)
{
    return dot(a, cross(b, c));
}

long content(const IVec& v)
{
    long g = 0;
    for (long x : v)
        g = std::gcd(g, x);
    return g;
}

IVec primitive(IVec v)
{
    long g = content(v);
    if (g > 1)
        for (auto& x : v)
            x /= g;
    return v;
}

bool is_zero(const IVec& v)
{
    return std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
}

std::string vec_str(const IVec& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

Matrix rational_rows(const std::vector<IVec>& rows, std::size_t n)
{
    Matrix m(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = rows[i][j];
    return m;
}

int affine_rank(const std::vector<IVec>& pts)
{
    if (pts.empty())
        return -1;
    std::vector<IVec> d;
    for (std::size_t i = 1; i < pts.size(); ++i)
        d.push_back(sub(pts[i], pts[0]));
    if (d.empty())
        return 0;
    return static_cast<int>(rank(rational_rows(d, pts[0].size())));
}

// 2D convex hull (monotone chain) on integer points; colinear points dropped.
std::vector<int> hull2(const std::vector<std::array<long, 2>>& p)
{
    std::vector<int> idx(p.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return p[a] < p[b]; });
    auto turn = [&](int o, int a, int b) {
        return (p[a][0] - p[o][0]) * (p[b][1] - p[o][1]) - (p[a][1] - p[o][1]) * (p[b][0] - p[o][0]);
    };
    std::vector<int> h(2 * idx.size());
    std::size_t k = 0;
    for (int i : idx) {
        while (k >= 2 && turn(h[k - 2], h[k - 1], i) <= 0)
            --k;
        h[k++] = i;
    }
    for (std::size_t t = idx.size() - 1, lo = k + 1; t-- > 0;) {
        int i = idx[t];
        while (k >= lo && turn(h[k - 2], h[k - 1], i) <= 0)
            --k;
        h[k++] = i;
    }
    h.resize(k > 1 ? k - 1 : k);
    return h;
}

} // namespace

LatticePolytope make_polytope(const std::vector<IVec>& input)
{
    std::vector<IVec> pts;
    for (const auto& v : input) {
        if (v.size() != 3)
            throw Error("NotFullDimensional", "polytope points must lie in Z^3");
        if (std::find(pts.begin(), pts.end(), v) == pts.end())
            pts.push_back(v);
    }
    if (affine_rank(pts) != 3)
        throw Error("NotFullDimensional", "points span an affine space of dimension < 3");

    struct Raw {
        IVec normal;
        long height;
        std::vector<int> on;
    };
    std::vector<Raw> raw;
    std::set<IVec> seen;
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                IVec nv = cross(sub(pts[j], pts[i]), sub(pts[k], pts[i]));
                if (is_zero(nv))
                    continue;
                nv = primitive(nv);
                for (int sgn : {1, -1}) {
                    IVec u = nv;
                    if (sgn < 0)
                        for (auto& x : u)
                            x = -x;
                    if (seen.count(u))
                        continue;
                    const long h = dot(pts[i], u);
                    bool ok = true;
                    std::vector<int> on;
                    for (int t = 0; t < n && ok; ++t) {
                        long v = dot(pts[t], u);
                        if (v < h)
                            ok = false;
                        else if (v == h)
                            on.push_back(t);
                    }
                    if (ok) {
                        seen.insert(u);
                        raw.push_back({u, h, on});
                    }
                }
            }

    // Extreme points of each facet, in cyclic order.
    std::vector<std::vector<int>> cyc;
    std::set<int> vert;
    for (const auto& r : raw) {
        int drop = 0;
        for (int c = 1; c < 3; ++c)
            if (std::labs(r.normal[c]) > std::labs(r.normal[drop]))
                drop = c;
        std::vector<std::array<long, 2>> q;
        for (int t : r.on) {
            std::array<long, 2> a{};
            int w = 0;
            for (int c = 0; c < 3; ++c)
                if (c != drop)
                    a[w++] = pts[t][c];
            q.push_back(a);
        }
        std::vector<int> h = hull2(q);
        std::vector<int> out;
        for (int x : h)
            out.push_back(r.on[x]);
        cyc.push_back(out);
        vert.insert(out.begin(), out.end());
    }
    LatticePolytope p;
    std::map<int, int> re;
    for (int v : vert) {
        re[v] = static_cast<int>(p.vertices.size());
        p.vertices.push_back(pts[v]);
    }
    std::set<std::pair<int, int>> edges;
    for (std::size_t f = 0; f < raw.size(); ++f) {
        PolytopeFacet pf;
        pf.normal = raw[f].normal;
        pf.height = raw[f].height;
        for (int v : cyc[f])
            pf.vertices.push_back(re[v]);
        for (std::size_t t = 0; t < pf.vertices.size(); ++t) {
            int a = pf.vertices[t], b = pf.vertices[(t + 1) % pf.vertices.size()];
            edges.insert({std::min(a, b), std::max(a, b)});
        }
        p.facets.push_back(pf);
    }
    p.edges.assign(edges.begin(), edges.end());
    return p;
}

std::vector<IVec> validate_reflexive(const LatticePolytope& p)
{
    std::vector<IVec> normals;
    for (std::size_t f = 0; f < p.facets.size(); ++f) {
        const auto& F = p.facets[f];
        if (F.height >= 0)
            throw Error("NotReflexive", "origin is not interior (facet " + std::to_string(f) + " normal " +
                                            vec_str(F.normal) + ")");
        if (F.height != -1)
            throw Error("NotReflexive", "facet " + std::to_string(f) + " lies on <m," + vec_str(F.normal) +
                                            "> = " + std::to_string(F.height));
        normals.push_back(F.normal);
    }
    for (std::size_t f = 0; f < p.facets.size(); ++f) {
        const auto& V = p.facets[f].vertices;
        if (V.size() != 3 ||
            std::labs(det3(p.vertices[V[0]], p.vertices[V[1]], p.vertices[V[2]])) != 1)
            throw Error("FacetNotUnimodular", "facet " + std::to_string(f) + " normal " + vec_str(p.facets[f].normal) +
                                                  " has " + std::to_string(V.size()) +
                                                  " vertices that are not a basis of M");
    }
    return normals;
}

std::vector<std::vector<int>> Fan::faces(int k) const
{
    std::set<std::vector<int>> out;
    for (const auto& c : cones) {
        std::vector<int> s = c;
        std::sort(s.begin(), s.end());
        const int r = static_cast<int>(s.size());
        if (k > r)
            continue;
        std::vector<bool> pick(static_cast<std::size_t>(r), false);
        std::fill(pick.begin(), pick.begin() + k, true);
        do {
            std::vector<int> f;
            for (int i = 0; i < r; ++i)
                if (pick[static_cast<std::size_t>(i)])
                    f.push_back(s[static_cast<std::size_t>(i)]);
            out.insert(f);
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return {out.begin(), out.end()};
}

bool Fan::simplicial() const
{
    return std::all_of(cones.begin(), cones.end(), [&](const auto& c) { return static_cast<int>(c.size()) == dim; });
}

Fan make_fan(int dim, std::vector<IVec> rays, std::vector<std::vector<int>> cones)
{
    if (dim < 1)
        throw Error("InvalidFan", "dimension must be positive");
    for (const auto& r : rays)
        if (static_cast<int>(r.size()) != dim || content(r) != 1)
            throw Error("InvalidFan", "ray " + vec_str(r) + " is not a primitive vector of Z^" + std::to_string(dim));
    for (auto& c : cones) {
        if (c.empty())
            throw Error("InvalidFan", "empty cone");
        for (int i : c)
            if (i < 0 || i >= static_cast<int>(rays.size()))
                throw Error("InvalidFan", "cone refers to missing ray " + std::to_string(i));
        std::vector<IVec> gen;
        for (int i : c)
            gen.push_back(rays[static_cast<std::size_t>(i)]);
        if (static_cast<int>(c.size()) <= dim &&
            rank(rational_rows(gen, static_cast<std::size_t>(dim))) != c.size())
            throw Error("InvalidFan", "cone generators are dependent");
    }
    Fan f;
    f.dim = dim;
    f.rays = std::move(rays);
    f.cones = std::move(cones);
    return f;
}

bool is_smooth(const Fan& f)
{
    if (!f.simplicial())
        return false;
    for (const auto& c : f.cones) {
        std::vector<IVec> gen;
        for (int i : c)
            gen.push_back(f.rays[static_cast<std::size_t>(i)]);
        Rational d = determinant(rational_rows(gen, static_cast<std::size_t>(f.dim)));
        if (d != 1 && d != -1)
            return false;
    }
    return true;
}

bool is_complete(const Fan& f)
{
    if (!f.simplicial())
        return false;
    std::map<std::vector<int>, int> count;
    for (const auto& c : f.cones) {
        std::vector<int> s = c;
        std::sort(s.begin(), s.end());
        for (std::size_t skip = 0; skip < s.size(); ++skip) {
            std::vector<int> face;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i != skip)
                    face.push_back(s[i]);
            ++count[face];
        }
    }
    return !count.empty() && std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 2; });
}

Fan spanning_fan(const LatticePolytope& p)
{
    Fan f;
    f.dim = 3;
    for (const auto& F : p.facets)
        f.rays.push_back(primitive(F.normal));
    for (int v = 0; v < static_cast<int>(p.vertices.size()); ++v) {
        // Facets through v, walked around v via shared edges.
        std::vector<int> around;
        for (int t = 0; t < static_cast<int>(p.facets.size()); ++t) {
            const auto& V = p.facets[static_cast<std::size_t>(t)].vertices;
            if (std::find(V.begin(), V.end(), v) != V.end())
                around.push_back(t);
        }
        auto next_of = [&](int facet) {
            const auto& V = p.facets[static_cast<std::size_t>(facet)].vertices;
            auto it = std::find(V.begin(), V.end(), v);
            return V[static_cast<std::size_t>((it - V.begin() + 1) % static_cast<long>(V.size()))];
        };
        auto prev_of = [&](int facet) {
            const auto& V = p.facets[static_cast<std::size_t>(facet)].vertices;
            auto it = std::find(V.begin(), V.end(), v);
            const long n = static_cast<long>(V.size());
            return V[static_cast<std::size_t>((it - V.begin() + n - 1) % n)];
        };
        std::vector<int> cyc{around[0]};
        std::set<int> used{around[0]};
        int w = next_of(around[0]);
        while (cyc.size() < around.size()) {
            int found = -1;
            for (int t : around)
                if (!used.count(t) && (prev_of(t) == w || next_of(t) == w))
                    found = t;
            if (found < 0)
                throw Error("InvalidFan", "facets around vertex " + std::to_string(v) + " do not close up");
            w = prev_of(found) == w ? next_of(found) : prev_of(found);
            cyc.push_back(found);
            used.insert(found);
        }
        f.cones.push_back(cyc);
    }
    return f;
}

Fan face_fan(const LatticePolytope& p)
{
    std::vector<IVec> rays = p.vertices;
    std::vector<std::vector<int>> cones;
    for (const auto& F : p.facets)
        cones.push_back(F.vertices);
    return make_fan(3, rays, cones);
}

std::vector<IVec> polar_boundary_points(const LatticePolytope& p)
{
    IVec lo(3, 0), hi(3, 0);
    for (const auto& F : p.facets)
        for (int c = 0; c < 3; ++c) {
            lo[c] = std::min(lo[c], F.normal[c]);
            hi[c] = std::max(hi[c], F.normal[c]);
        }
    std::vector<IVec> out;
    for (long x = lo[0]; x <= hi[0]; ++x)
        for (long y = lo[1]; y <= hi[1]; ++y)
            for (long z = lo[2]; z <= hi[2]; ++z) {
                IVec u{x, y, z};
                long m = 0;
                bool first = true;
                for (const auto& v : p.vertices) {
                    long d = dot(v, u);
                    if (first || d < m)
                        m = d;
                    first = false;
                }
                if (m == -1)
                    out.push_back(u);
            }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Coefficients of v in the basis (a, b, c), or nothing if dependent.
bool coefficients(const IVec& a, const IVec& b, const IVec& c, const IVec& v, std::array<Rational, 3>& out)
{
    const long d = det3(a, b, c);
    if (d == 0)
        return false;
    out[0] = Rational(det3(v, b, c), d);
    out[1] = Rational(det3(a, v, c), d);
    out[2] = Rational(det3(a, b, v), d);
    for (auto& x : out)
        x.canonicalize();
    return true;
}

bool on_segment_cone(const IVec& a, const IVec& b, const IVec& v)
{
    // v = s a + t b with s, t >= 0.
    IVec n = cross(a, b);
    if (dot(n, v) != 0)
        return false;
    // Inside the planar cone: cross(a, v) and cross(v, b) point along n.
    return dot(cross(a, v), n) >= 0 && dot(cross(v, b), n) >= 0;
}

} // namespace

Fan smooth_refine(const Fan& f, const LatticePolytope& p)
{
    if (f.dim != 3)
        throw Error("RefinementFailed", "only 3-dimensional fans are refined");
    Fan out = f;
    // Each stellar step at v pulls the ample support function down at v.
    std::vector<Rational> ample(out.rays.size(), Rational(1));
    for (const auto& r : out.rays) {
        long m = dot(p.vertices[0], r);
        for (const auto& v : p.vertices)
            m = std::min(m, dot(v, r));
        if (m != -1)
            throw Error("RefinementFailed", "ray " + vec_str(r) + " has min <m, u> = " + std::to_string(m));
    }
    auto smooth_now = [&]() { return is_smooth(out); };
    Rational delta(1, 4);
    for (const auto& v : polar_boundary_points(p)) {
        if (smooth_now())
            break;
        if (std::find(out.rays.begin(), out.rays.end(), v) != out.rays.end())
            continue;
        const int vid = static_cast<int>(out.rays.size());
        std::vector<std::vector<int>> next;
        bool hit = false;
        Rational value;
        for (const auto& cell : out.cones) {
            const std::size_t r = cell.size();
            const auto& R = out.rays;
            bool inside = false;
            for (std::size_t i = 1; i + 1 < r && !inside; ++i) {
                std::array<Rational, 3> c;
                const IVec &a = R[cell[0]], &b = R[cell[i]], &d = R[cell[i + 1]];
                if (coefficients(a, b, d, v, c) && c[0] >= 0 && c[1] >= 0 && c[2] >= 0) {
                    inside = true;
                    if (!hit)
                        value = c[0] * ample[cell[0]] + c[1] * ample[cell[i]] + c[2] * ample[cell[i + 1]];
                }
            }
            if (!inside) {
                next.push_back(cell);
                continue;
            }
            hit = true;
            for (std::size_t i = 0; i < r; ++i) {
                const int a = cell[i], b = cell[(i + 1) % r];
                if (on_segment_cone(R[a], R[b], v))
                    continue;
                next.push_back({vid, a, b});
            }
        }
        if (!hit)
            throw Error("RefinementFailed", "point " + vec_str(v) + " lies in no cone");
        out.rays.push_back(v);
        ample.push_back(value - delta);
        delta /= 8;
        out.cones = std::move(next);
    }
    if (!smooth_now())
        throw Error("RefinementFailed", "no unimodular subdivision from the polar boundary points");
    for (auto& c : out.cones)
        std::sort(c.begin(), c.end());
    std::sort(out.cones.begin(), out.cones.end());
    // Kleiman: ample iff positive on every torus-invariant curve.
    out.ample = ample;
    ToricIntersection t(out);
    for (const auto& tau : out.faces(2)) {
        Rational deg = 0;
        for (std::size_t x = 0; x < out.rays.size(); ++x)
            deg += ample[x] * t.wall_degree(tau[0], tau[1], static_cast<int>(x));
        if (deg <= 0)
            throw Error("RefinementFailed", "tracked polarization is not ample on wall " + vec_str({tau[0], tau[1]}));
    }
    return out;
}

Fan projective_space_fan(int n)
{
    if (n < 1)
        throw Error("InvalidFan", "P^n needs n >= 1");
    std::vector<IVec> rays;
    for (int i = 0; i < n; ++i) {
        IVec e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = 1;
        rays.push_back(e);
    }
    rays.emplace_back(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> cones;
    for (int skip = 0; skip <= n; ++skip) {
        std::vector<int> c;
        for (int i = 0; i <= n; ++i)
            if (i != skip)
                c.push_back(i);
        cones.push_back(c);
    }
    return make_fan(n, rays, cones);
}

Fan p1_cubed_fan()
{
    std::vector<IVec> rays{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    std::vector<std::vector<int>> cones;
    for (int a : {0, 1})
        for (int b : {2, 3})
            for (int c : {4, 5})
                cones.push_back({a, b, c});
    return make_fan(3, rays, cones);
}

LaurentData standard_laurent(const LatticePolytope& p)
{
    LaurentData l;
    for (const auto& v : p.vertices)
        l.support[v] = 1;
    return l;
}

void check_support(const LaurentData& f, const LatticePolytope& p)
{
    std::vector<IVec> pts;
    for (const auto& [e, c] : f.support) {
        if (c == 0)
            throw Error("SupportViolation", "zero coefficient at " + vec_str(e));
        if (e.size() != 3)
            throw Error("SupportViolation", "exponent " + vec_str(e) + " is not in Z^3");
        for (const auto& F : p.facets)
            if (dot(e, F.normal) < F.height)
                throw Error("SupportViolation", "exponent " + vec_str(e) + " lies outside P");
        pts.push_back(e);
    }
    for (const auto& v : p.vertices)
        if (!f.support.count(v))
            throw Error("SupportViolation", "vertex " + vec_str(v) + " of P is missing from the support");
}

PoleReport pole_analysis(const Fan& f, const LaurentData& l, const LatticePolytope& p)
{
    check_support(l, p);
    PoleReport out;
    std::vector<std::set<int>> faces(f.rays.size());
    for (std::size_t r = 0; r < f.rays.size(); ++r) {
        const IVec& u = f.rays[r];
        long m = dot(p.vertices[0], u);
        for (const auto& v : p.vertices)
            m = std::min(m, dot(v, u));
        RayPole rp;
        rp.ray = static_cast<int>(r);
        std::vector<IVec> pts;
        for (int v = 0; v < static_cast<int>(p.vertices.size()); ++v)
            if (dot(p.vertices[static_cast<std::size_t>(v)], u) == m) {
                rp.face.push_back(v);
                faces[r].insert(v);
                pts.push_back(p.vertices[static_cast<std::size_t>(v)]);
            }
        rp.face_dim = affine_rank(pts);
        rp.pole_order = -m;
        out.rays.push_back(rp);
    }
    for (const auto& tau : f.faces(2)) {
        WallFace w;
        w.a = tau[0];
        w.b = tau[1];
        std::vector<IVec> pts;
        for (int v : faces[static_cast<std::size_t>(w.a)])
            if (faces[static_cast<std::size_t>(w.b)].count(v)) {
                w.face.push_back(v);
                pts.push_back(p.vertices[static_cast<std::size_t>(v)]);
            }
        w.face_dim = affine_rank(pts);
        if (w.face_dim == 1) {
            IVec lo = pts.front(), hi = pts.front();
            for (const auto& q : pts) {
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
            w.length = content(sub(hi, lo));
            if (w.length < 0)
                w.length = -w.length;
        }
        out.walls.push_back(w);
    }
    return out;
}

const char* nondegeneracy_name(Nondegeneracy v)
{
    switch (v) {
    case Nondegeneracy::Degenerate:
        return "degenerate";
    case Nondegeneracy::ProbablyNondegenerate:
        return "probably-nondegenerate";
    case Nondegeneracy::Inconclusive:
        return "inconclusive";
    }
    return "?";
}

namespace {

using Poly = std::vector<Rational>; // low degree first

void trim(Poly& p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

Poly poly_mod(Poly a, const Poly& b)
{
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational q = a.back() / b.back();
        const std::size_t s = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[s + i] -= q * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

Poly poly_gcd(Poly a, Poly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a)
            c /= lead;
    }
    return a;
}

/// Drops powers of z (zeros at the origin are torus-irrelevant).
Poly strip_z(Poly p)
{
    trim(p);
    std::size_t k = 0;
    while (k < p.size() && p[k] == 0)
        ++k;
    p.erase(p.begin(), p.begin() + static_cast<long>(k));
    return p;
}

Poly derivative(const Poly& p)
{
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i)
        d.push_back(p[i] * static_cast<long>(i));
    return d;
}

std::string poly_str(const Poly& p)
{
    std::string s;
    for (std::size_t i = p.size(); i-- > 0;) {
        if (p[i] == 0)
            continue;
        if (!s.empty())
            s += " + ";
        s += "(" + to_string(p[i]) + ")";
        if (i)
            s += "z^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

using Multi = std::map<IVec, Rational>;

/// Integer basis of the lattice spanned by the rows (Euclid on columns).
std::vector<IVec> lattice_basis(std::vector<IVec> rows, std::size_t n)
{
    std::vector<IVec> basis;
    std::size_t col = 0;
    while (col < n) {
        while (true) {
            int piv = -1;
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (rows[i][col] != 0 &&
                    (piv < 0 || std::labs(rows[i][col]) < std::labs(rows[static_cast<std::size_t>(piv)][col])))
                    piv = static_cast<int>(i);
            if (piv < 0)
                break;
            bool done = true;
            const IVec pr = rows[static_cast<std::size_t>(piv)];
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (static_cast<int>(i) == piv || rows[i][col] == 0)
                    continue;
                const long q = rows[i][col] / pr[col];
                for (std::size_t c = 0; c < n; ++c)
                    rows[i][c] -= q * pr[c];
                if (rows[i][col] != 0)
                    done = false;
            }
            if (done) {
                basis.push_back(pr);
                rows.erase(rows.begin() + piv);
                break;
            }
        }
        ++col;
    }
    return basis;
}

/// Rewrites g in coordinates of the affine lattice of its exponents.
Multi reduce_to_lattice(const Multi& g)
{
    const IVec base = g.begin()->first;
    const std::size_t n = base.size();
    std::vector<IVec> diffs;
    for (const auto& [e, c] : g)
        diffs.push_back(sub(e, base));
    std::vector<IVec> b = lattice_basis(diffs, n);
    const std::size_t k = b.size();
    Multi out;
    if (k == 0) {
        out[IVec{}] = g.begin()->second;
        return out;
    }
    Matrix B(n, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
            B(i, j) = b[j][i];
    for (const auto& [e, c] : g) {
        IVec d = sub(e, base);
        Matrix rhs(n, 1);
        for (std::size_t i = 0; i < n; ++i)
            rhs(i, 0) = d[i];
        Matrix x = solve(B, rhs);
        IVec y(k);
        for (std::size_t j = 0; j < k; ++j) {
            if (x(j, 0).get_den() != 1)
                throw Error("InternalError", "lattice coordinates are not integral");
            y[j] = x(j, 0).get_num().get_si();
        }
        out[y] = c;
    }
    return out;
}

/// Univariate Laurent restriction: variable t free, the others fixed.
Poly restrict_line(const Multi& g, std::size_t t, const std::vector<Rational>& vals)
{
    std::map<long, Rational> terms;
    for (const auto& [e, c] : g) {
        Rational v = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (i == t)
                continue;
            Rational base = vals[i];
            long k = e[i];
            Rational pw = 1;
            for (long s = 0; s < std::labs(k); ++s)
                pw *= base;
            v *= (k >= 0 ? pw : Rational(1) / pw);
        }
        terms[e.empty() ? 0 : e[t]] += v;
    }
    Poly p;
    if (terms.empty())
        return p;
    const long lo = terms.begin()->first;
    p.assign(static_cast<std::size_t>(terms.rbegin()->first - lo + 1), Rational(0));
    for (const auto& [k, v] : terms)
        p[static_cast<std::size_t>(k - lo)] = v;
    return p;
}

Multi partial(const Multi& g, std::size_t i)
{
    // Toric derivative z_i d/dz_i: same singular locus on the torus.
    Multi d;
    for (const auto& [e, c] : g)
        if (e[i] != 0)
            d[e] = c * e[i];
    return d;
}

/// Support subsets giving the faces of conv(support) (in reduced coordinates).
std::vector<std::vector<IVec>> face_sets(const std::vector<IVec>& pts, std::size_t k)
{
    std::vector<std::vector<IVec>> out;
    out.push_back(pts);
    if (k == 0)
        return out;
    if (k == 1) {
        auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
        out.push_back({*lo});
        out.push_back({*hi});
        return out;
    }
    // Faces are argmin sets of linear functionals; enumerate functionals from
    // normals of point subsets.
    std::set<std::vector<IVec>> seen;
    std::vector<IVec> dirs;
    const std::size_t m = pts.size();
    if (k == 2) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                IVec d = sub(pts[j], pts[i]);
                dirs.push_back({-d[1], d[0]});
                dirs.push_back({d[1], -d[0]});
            }
    } else {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                for (std::size_t l = j + 1; l < m; ++l) {
                    IVec c = cross(sub(pts[j], pts[i]), sub(pts[l], pts[i]));
                    if (is_zero(c))
                        continue;
                    dirs.push_back(c);
                    dirs.push_back({-c[0], -c[1], -c[2]});
                }
    }
    std::vector<std::vector<IVec>> facets;
    for (const auto& u : dirs) {
        long lo = dot(pts[0], u);
        for (const auto& q : pts)
            lo = std::min(lo, dot(q, u));
        std::vector<IVec> f;
        for (const auto& q : pts)
            if (dot(q, u) == lo)
                f.push_back(q);
        if (affine_rank(f) == static_cast<int>(k) - 1 && seen.insert(f).second)
            facets.push_back(f);
    }
    // Lower faces: intersections of facets, down to vertices.
    std::vector<std::vector<IVec>> layer = facets;
    while (!layer.empty()) {
        std::vector<std::vector<IVec>> next;
        for (const auto& f : layer)
            out.push_back(f);
        for (std::size_t i = 0; i < layer.size(); ++i)
            for (const auto& g : facets) {
                std::vector<IVec> meet;
                std::set_intersection(layer[i].begin(), layer[i].end(), g.begin(), g.end(),
                                      std::back_inserter(meet));
                if (meet.empty() || affine_rank(meet) != affine_rank(layer[i]) - 1)
                    continue;
                if (seen.insert(meet).second)
                    next.push_back(meet);
            }
        layer = std::move(next);
    }
    return out;
}

} // namespace

ProbeResult nondegeneracy_probe(const LaurentData& l, int trials, std::uint64_t seed)
{
    if (l.support.empty())
        throw Error("SupportViolation", "empty Laurent polynomial");
    Multi g;
    for (const auto& [e, c] : l.support)
        if (c != 0)
            g[e] = c;
    Multi red = reduce_to_lattice(g);
    const std::size_t k = red.begin()->first.size();
    if (k > 3)
        throw Error("OutOfRange", "probe supports Newton polytopes of dimension <= 3");
    std::vector<IVec> pts;
    for (const auto& [e, c] : red)
        pts.push_back(e);
    std::sort(pts.begin(), pts.end());

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-20, 20), den(1, 20);
    auto random_q = [&]() {
        long a = 0;
        while (a == 0)
            a = num(rng);
        Rational q(a, den(rng));
        q.canonicalize();
        return q;
    };

    ProbeResult res;
    res.verdict = Nondegeneracy::ProbablyNondegenerate;
    bool undecided = false;
    for (const auto& face : face_sets(pts, k)) {
        ++res.faces;
        Multi gf;
        for (const auto& e : face)
            gf[e] = red.at(e);
        Multi h = reduce_to_lattice(gf);
        const std::size_t kf = h.begin()->first.size();
        auto certify = [&](const Poly& G) {
            if (strip_z(G).size() >= 2) {
                res.verdict = Nondegeneracy::Degenerate;
                std::string pts_s;
                for (const auto& e : face)
                    pts_s += vec_str(e);
                res.witness = "face " + pts_s + ": common factor " + poly_str(strip_z(G));
                return true;
            }
            return false;
        };
        if (kf == 0) {
            ++res.exact_faces;
            continue;
        }
        if (kf == 1) {
            ++res.exact_faces;
            Poly p = restrict_line(h, 0, {Rational(0)});
            if (certify(poly_gcd(p, derivative(p))))
                return res;
            continue;
        }
        if (trials <= 0) {
            undecided = true;
            continue;
        }
        for (int t = 0; t < trials; ++t) {
            const std::size_t free = static_cast<std::size_t>(t) % kf;
            std::vector<Rational> vals(kf);
            for (auto& v : vals)
                v = random_q();
            Poly G = restrict_line(h, free, vals);
            for (std::size_t i = 0; i < kf && strip_z(G).size() >= 2; ++i)
                G = poly_gcd(G, restrict_line(partial(h, i), free, vals));
            if (certify(G))
                return res;
        }
    }
    if (undecided)
        res.verdict = Nondegeneracy::Inconclusive;
    return res;
}

ToricIntersection::ToricIntersection(const Fan& f) : f_(f)
{
    if (f.dim != 3 || !is_smooth(f) || !is_complete(f))
        throw Error("NotSmooth", "intersection numbers need a smooth complete 3-dimensional fan");
    std::map<std::pair<int, int>, std::vector<int>> opp;
    for (const auto& c : f.cones) {
        std::vector<int> s = c;
        std::sort(s.begin(), s.end());
        opp[{s[0], s[1]}].push_back(s[2]);
        opp[{s[0], s[2]}].push_back(s[1]);
        opp[{s[1], s[2]}].push_back(s[0]);
    }
    for (const auto& [ab, cs] : opp) {
        const auto [a, b] = ab;
        const int c = cs[0], d = cs[1];
        std::array<Rational, 3> x;
        coefficients(f.rays[a], f.rays[b], f.rays[c], f.rays[d], x);
        // u_d = x0 u_a + x1 u_b - u_c, so u_c + u_d - x0 u_a - x1 u_b = 0.
        if (x[2] != -1)
            throw Error("NotSmooth", "wall relation is not unimodular");
        auto& w = walls_[ab];
        w[a] = -x[0];
        w[b] = -x[1];
        w[c] = 1;
        w[d] = 1;
    }
    const std::size_t r = f.rays.size();
    cubes_.assign(r, Rational(0));
    for (std::size_t a = 0; a < r; ++a) {
        std::size_t t = 0;
        while (f.rays[a][t] == 0)
            ++t;
        Rational s = 0;
        for (std::size_t x = 0; x < r; ++x)
            if (x != a && f.rays[x][t] != 0)
                s += Rational(f.rays[x][t]) * wall_degree(static_cast<int>(a), static_cast<int>(x), static_cast<int>(a));
        cubes_[a] = -s / f.rays[a][t];
    }
}

bool ToricIntersection::is_wall(int a, int b) const
{
    return walls_.count({std::min(a, b), std::max(a, b)}) > 0;
}

Rational ToricIntersection::wall_degree(int a, int b, int x) const
{
    auto it = walls_.find({std::min(a, b), std::max(a, b)});
    if (it == walls_.end())
        return 0;
    auto jt = it->second.find(x);
    return jt == it->second.end() ? Rational(0) : jt->second;
}

Rational ToricIntersection::triple(int a, int b, int c) const
{
    std::array<int, 3> s{a, b, c};
    std::sort(s.begin(), s.end());
    if (s[0] == s[2])
        return cubes_[static_cast<std::size_t>(s[0])];
    if (s[0] == s[1])
        return wall_degree(s[0], s[2], s[0]);
    if (s[1] == s[2])
        return wall_degree(s[0], s[1], s[1]);
    return wall_degree(s[0], s[1], s[2]);
}

std::vector<std::size_t> SRCohomology::betti() const
{
    std::vector<std::size_t> b;
    for (const auto& k : basis)
        b.push_back(k.size());
    return b;
}

Matrix SRCohomology::cup(const std::vector<Rational>& divisor, int k) const
{
    const std::size_t src = basis[static_cast<std::size_t>(k)].size();
    const std::size_t dst = k + 1 <= n ? basis[static_cast<std::size_t>(k + 1)].size() : 0;
    Matrix m(dst, src);
    if (k >= n)
        return m;
    for (std::size_t r = 0; r < rays; ++r)
        if (divisor[r] != 0)
            m = m + product[static_cast<std::size_t>(k)][r].scaled(divisor[r]);
    return m;
}

Matrix SRCohomology::c1(int k) const
{
    return cup(std::vector<Rational>(rays, Rational(1)), k);
}

namespace {

void multisets(std::size_t r, int k, std::size_t start, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (k == 0) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < r; ++i) {
        cur.push_back(static_cast<int>(i));
        multisets(r, k - 1, i, cur, out);
        cur.pop_back();
    }
}

} // namespace

SRCohomology sr_cohomology(const Fan& f)
{
    if (!is_complete(f))
        throw Error("NotComplete", "Stanley-Reisner cohomology needs a complete simplicial fan");
    if (!is_smooth(f))
        throw Error("NotSmooth", "fan is not smooth");
    const std::size_t r = f.rays.size();
    const int n = f.dim;
    std::set<std::vector<int>> faceset;
    for (int k = 0; k <= n; ++k)
        for (const auto& c : f.faces(k))
            faceset.insert(c);
    faceset.insert({});

    SRCohomology out;
    out.n = n;
    out.rays = r;
    std::vector<std::vector<std::vector<int>>> mons(static_cast<std::size_t>(n) + 1);
    std::vector<std::map<std::vector<int>, std::size_t>> pos(static_cast<std::size_t>(n) + 1);
    std::vector<Matrix> quot(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        std::vector<int> cur;
        multisets(r, k, 0, cur, mons[static_cast<std::size_t>(k)]);
        auto& P = pos[static_cast<std::size_t>(k)];
        const auto& M = mons[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < M.size(); ++i)
            P[M[i]] = i;
        // Relations: monomials whose support is not a face, and linear
        // relations times degree k-1 monomials.
        std::vector<Matrix> rel;
        for (std::size_t i = 0; i < M.size(); ++i) {
            std::vector<int> supp = M[i];
            supp.erase(std::unique(supp.begin(), supp.end()), supp.end());
            if (!faceset.count(supp)) {
                Matrix v(M.size(), 1);
                v(i, 0) = 1;
                rel.push_back(v);
            }
        }
        if (k >= 1)
            for (const auto& low : mons[static_cast<std::size_t>(k - 1)])
                for (int t = 0; t < n; ++t) {
                    Matrix v(M.size(), 1);
                    for (std::size_t x = 0; x < r; ++x) {
                        const long c = f.rays[x][static_cast<std::size_t>(t)];
                        if (c == 0)
                            continue;
                        std::vector<int> m = low;
                        m.push_back(static_cast<int>(x));
                        std::sort(m.begin(), m.end());
                        v(P.at(m), 0) += c;
                    }
                    rel.push_back(v);
                }
        Matrix R(M.size(), rel.size());
        for (std::size_t j = 0; j < rel.size(); ++j)
            R.set_block(0, j, rel[j]);
        Matrix q = quotient_matrix(M.size(), R);
        quot[static_cast<std::size_t>(k)] = q;
        // Greedy monomial basis: first monomials whose images are independent.
        std::vector<std::vector<int>> b;
        Matrix acc(q.rows(), 0);
        for (std::size_t i = 0; i < M.size() && b.size() < q.rows(); ++i) {
            Matrix trial = Matrix::hstack(acc, q.col(i));
            if (rank(trial) > acc.cols()) {
                acc = trial;
                b.push_back(M[i]);
            }
        }
        out.basis.push_back(b);
        quot[static_cast<std::size_t>(k)] = inverse(acc) * q;
    }
    out.product.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        for (std::size_t x = 0; x < r; ++x) {
            const auto& src = out.basis[static_cast<std::size_t>(k)];
            Matrix m(out.basis[static_cast<std::size_t>(k + 1)].size(), src.size());
            for (std::size_t j = 0; j < src.size(); ++j) {
                std::vector<int> mon = src[j];
                mon.push_back(static_cast<int>(x));
                std::sort(mon.begin(), mon.end());
                m.set_block(0, j, quot[static_cast<std::size_t>(k + 1)].col(pos[static_cast<std::size_t>(k + 1)].at(mon)));
            }
            out.product[static_cast<std::size_t>(k)].push_back(m);
        }
    std::vector<int> sigma = f.cones[0];
    std::sort(sigma.begin(), sigma.end());
    Matrix top = quot[static_cast<std::size_t>(n)].col(pos[static_cast<std::size_t>(n)].at(sigma));
    if (top.rows() != 1 || top(0, 0) == 0)
        throw Error("InternalError", "top Stanley-Reisner degree is not one-dimensional");
    out.top_degree = {Rational(1) / top(0, 0)};
    return out;
}

RescalingModel fano_rescaling(const Fan& f)
{
    SRCohomology sr = sr_cohomology(f);
    const auto b = sr.betti();
    std::size_t total = 0;
    for (auto x : b)
        total += x;
    RescalingComponent c;
    c.N = Matrix(total, total);
    std::size_t off = 0;
    for (int p = 0; p <= sr.n; ++p) {
        for (std::size_t i = 0; i < b[static_cast<std::size_t>(p)]; ++i)
            c.lambda.push_back(Rational(sr.n - p));
        if (p < sr.n)
            c.N.set_block(off + b[static_cast<std::size_t>(p)], off, sr.c1(p));
        off += b[static_cast<std::size_t>(p)];
    }
    return make_rescaling({{sr.n, c}}, "Fano X_Sigma, dim " + std::to_string(sr.n));
}

Matrix pn_quantum_c1(int n, const Rational& tau)
{
    if (n < 1)
        throw Error("OutOfRange", "n must be positive");
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    Matrix m(d, d);
    for (std::size_t j = 0; j + 1 < d; ++j)
        m(j + 1, j) = n + 1;
    Rational t = 1;
    for (int i = 0; i <= n; ++i)
        t *= tau;
    m(0, d - 1) = Rational(n + 1) * t;
    return m;
}

FlatnessReport pn_quantum_flatness(int n, const std::vector<std::pair<Rational, Rational>>& samples)
{
    if (n < 1 || n > 6)
        throw Error("OutOfRange", "flatness check supports 1 <= n <= 6");
    FlatnessReport rep;
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    for (const auto& [theta, tau] : samples) {
        if (theta == 0)
            throw Error("OutOfRange", "theta must be nonzero");
        ++rep.samples;
        Matrix a = pn_quantum_c1(n, theta * tau).scaled(Rational(1) / theta);
        // theta^mu is diagonal; entry (i, j) picks up theta^{mu_i - mu_j} = theta^{i-j}.
        Matrix conj(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const long e = static_cast<long>(i) - static_cast<long>(j);
                Rational pw = 1;
                for (long s = 0; s < std::labs(e); ++s)
                    pw *= theta;
                conj(i, j) = a(i, j) * (e >= 0 ? pw : Rational(1) / pw);
            }
        if (conj != pn_quantum_c1(n, tau)) {
            rep.conjugation = false;
            rep.detail += "conjugation fails at theta=" + to_string(theta) + " tau=" + to_string(tau) + "; ";
        }
    }
    SRCohomology sr = sr_cohomology(projective_space_fan(n));
    Matrix classical(d, d);
    for (int p = 0; p < n; ++p)
        classical.set_block(static_cast<std::size_t>(p) + 1, static_cast<std::size_t>(p), sr.c1(p));
    if (classical != pn_quantum_c1(n, 0)) {
        rep.classical_limit = false;
        rep.detail += "tau = 0 differs from the classical cup product; ";
    }
    return rep;
}

namespace {

struct Blowup {
    const Fan& f;
    const ToricIntersection& T;
    std::size_t l = 0;
    std::vector<int> pos;                    // pos[ray] in the blow-up order
    std::map<std::pair<int, int>, long> m;   // lattice length per wall
    std::vector<int> free_d;                 // D_rho kept in the H^2 basis
    Matrix lift;                             // 2l x h: basis -> (D_0..D_{l-1}, E_0..E_{l-1})
    std::vector<Rational> deg_b;             // Sum_rho T(x, i, rho), keyed x*l + i
    std::vector<Rational> e_cube;

    Blowup(const Fan& fan, const ToricIntersection& t) : f(fan), T(t) {}

    long mult(int a, int b) const
    {
        auto it = m.find({std::min(a, b), std::max(a, b)});
        return it == m.end() ? 0 : it->second;
    }
    bool earlier(int a, int b) const { return pos[static_cast<std::size_t>(a)] < pos[static_cast<std::size_t>(b)]; }

    /// Cubic form on the extended generators: index < l is D, >= l is E.
    Rational value(std::size_t u, std::size_t v, std::size_t w) const
    {
        std::array<std::size_t, 3> s{u, v, w};
        std::sort(s.begin(), s.end());
        int ne = 0;
        for (auto x : s)
            ne += x >= l;
        if (ne == 0)
            return T.triple(static_cast<int>(s[0]), static_cast<int>(s[1]), static_cast<int>(s[2]));
        if (ne == 1)
            return 0;
        if (ne == 2) {
            if (s[1] != s[2])
                return 0;
            return -deg_b[s[0] * l + (s[1] - l)];
        }
        const int a = static_cast<int>(s[0] - l), b = static_cast<int>(s[1] - l), c = static_cast<int>(s[2] - l);
        if (a == b && b == c)
            return e_cube[static_cast<std::size_t>(a)];
        if (a != b && b != c)
            return 0;
        // E_x^2 E_y.
        const int x = a == b ? a : c, y = a == b ? c : a;
        return earlier(x, y) ? Rational(0) : Rational(-mult(x, y));
    }
};

std::string pair_str(int a, int b)
{
    return "{" + std::to_string(a) + "," + std::to_string(b) + "}";
}

} // namespace

StrataComplex blowup_strata(const Fan& f, const LaurentData& lau, const LatticePolytope& p, std::vector<int> ray_order,
                            BlowupSummary* summary)
{
    ToricIntersection T(f);
    PoleReport poles = pole_analysis(f, lau, p);
    for (const auto& r : poles.rays)
        if (r.pole_order != 1)
            throw Error("InconsistentGeometry", "ray " + std::to_string(r.ray) + " has pole order " +
                                                    std::to_string(r.pole_order));
    const std::size_t l = f.rays.size();
    Blowup B(f, T);
    B.l = l;
    if (ray_order.empty()) {
        ray_order.resize(l);
        std::iota(ray_order.begin(), ray_order.end(), 0);
    }
    {
        std::vector<int> chk = ray_order;
        std::sort(chk.begin(), chk.end());
        for (std::size_t i = 0; i < chk.size(); ++i)
            if (chk.size() != l || chk[i] != static_cast<int>(i))
                throw Error("InconsistentGeometry", "ray order is not a permutation of the rays");
    }
    B.pos.assign(l, 0);
    for (std::size_t i = 0; i < l; ++i)
        B.pos[static_cast<std::size_t>(ray_order[i])] = static_cast<int>(i);
    for (const auto& w : poles.walls) {
        // -K.D_tau counts the zeros of f_0 on the curve D_tau.
        Rational kdeg = 0;
        for (std::size_t x = 0; x < l; ++x)
            kdeg += T.wall_degree(w.a, w.b, static_cast<int>(x));
        if (kdeg != w.length)
            throw Error("InconsistentGeometry", "wall " + pair_str(w.a, w.b) + ": -K.D_tau = " + to_string(kdeg) +
                                                    " but Q_tau has lattice length " + std::to_string(w.length));
        B.m[{w.a, w.b}] = w.length;
    }

    std::vector<int> sigma0 = f.cones[0];
    std::sort(sigma0.begin(), sigma0.end());
    for (std::size_t x = 0; x < l; ++x)
        if (!std::binary_search(sigma0.begin(), sigma0.end(), static_cast<int>(x)))
            B.free_d.push_back(static_cast<int>(x));
    // B_rho is a P^1 when Q_rho is an edge or a facet, and empty when Q_rho is
    // a vertex (-K restricts trivially to D_rho); only the former are blown up.
    std::vector<int> active, e_col(l, -1);
    for (const auto& r : poles.rays)
        if (r.face_dim >= 1) {
            e_col[static_cast<std::size_t>(r.ray)] = static_cast<int>(B.free_d.size() + active.size());
            active.push_back(r.ray);
        }
    const std::size_t h = B.free_d.size() + active.size();
    // D_s for s in sigma0: Sum_x <e_t, u_x> D_x = 0 solved for the sigma0 block.
    Matrix S(3, 3);
    for (int t = 0; t < 3; ++t)
        for (int c = 0; c < 3; ++c)
            S(static_cast<std::size_t>(t), static_cast<std::size_t>(c)) =
                f.rays[static_cast<std::size_t>(sigma0[static_cast<std::size_t>(c)])][static_cast<std::size_t>(t)];
    Matrix Sinv = inverse(S);
    B.lift = Matrix(2 * l, h);
    for (std::size_t j = 0; j < B.free_d.size(); ++j)
        B.lift(static_cast<std::size_t>(B.free_d[j]), j) = 1;
    for (std::size_t i = 0; i < active.size(); ++i)
        B.lift(l + static_cast<std::size_t>(active[i]), B.free_d.size() + i) = 1;
    // Basis coordinates of an extended vector (D part, E part).
    auto to_basis = [&](const std::vector<Rational>& ext) {
        std::vector<Rational> out(h);
        for (std::size_t j = 0; j < B.free_d.size(); ++j)
            out[j] = ext[static_cast<std::size_t>(B.free_d[j])];
        for (int s : sigma0)
            if (ext[static_cast<std::size_t>(s)] != 0)
                throw Error("InternalError", "unreduced sigma0 divisor");
        for (std::size_t i = 0; i < l; ++i) {
            if (e_col[i] >= 0)
                out[static_cast<std::size_t>(e_col[i])] = ext[l + i];
            else if (ext[l + i] != 0)
                throw Error("InternalError", "exceptional class over an empty base curve");
        }
        return out;
    };
    auto reduce_ext = [&](std::vector<Rational> ext) {
        // Replace D_s (s in sigma0) by its expression in the free D's: D_s is
        // the combination with m = e_t chosen so that only s survives in sigma0.
        for (int c = 0; c < 3; ++c) {
            const std::size_t s = static_cast<std::size_t>(sigma0[static_cast<std::size_t>(c)]);
            const Rational coef = ext[s];
            if (coef == 0)
                continue;
            // Linear relation: Sum_x <m_c, u_x> D_x = 0 with <m_c, u_{sigma0_c'}> = delta.
            ext[s] = 0;
            for (std::size_t x = 0; x < l; ++x) {
                if (std::binary_search(sigma0.begin(), sigma0.end(), static_cast<int>(x)))
                    continue;
                Rational mc = 0;
                for (int t = 0; t < 3; ++t)
                    mc += Sinv(static_cast<std::size_t>(c), static_cast<std::size_t>(t)) *
                          f.rays[x][static_cast<std::size_t>(t)];
                ext[x] -= coef * mc;
            }
        }
        return ext;
    };

    B.deg_b.assign(l * l, Rational(0));
    for (std::size_t x = 0; x < l; ++x)
        for (std::size_t i = 0; i < l; ++i) {
            Rational s = 0;
            for (std::size_t r = 0; r < l; ++r)
                s += T.triple(static_cast<int>(x), static_cast<int>(i), static_cast<int>(r));
            B.deg_b[x * l + i] = s;
        }
    B.e_cube.assign(l, Rational(0));
    for (std::size_t a = 0; a < l; ++a) {
        Rational kb = 0;
        for (std::size_t r = 0; r < l; ++r)
            kb -= B.deg_b[r * l + a];
        long prev = 0;
        for (std::size_t b = 0; b < l; ++b)
            if (b != a && B.earlier(static_cast<int>(b), static_cast<int>(a)))
                prev += B.mult(static_cast<int>(a), static_cast<int>(b));
        B.e_cube[a] = kb + prev + 2;
    }

    // Kahler class pi^*A - Sum eta_i E_i with eta decreasing along the order.
    if (f.ample.size() != l)
        throw Error("InconsistentGeometry", "fan carries no ample class");
    Rational min_wall = -1;
    long max_m = 1;
    for (const auto& [ab, mm] : B.m) {
        Rational d = 0;
        for (std::size_t x = 0; x < l; ++x)
            d += f.ample[x] * T.wall_degree(ab.first, ab.second, static_cast<int>(x));
        if (d <= 0)
            throw Error("InconsistentGeometry", "fan polarization is not ample on wall " + pair_str(ab.first, ab.second));
        if (min_wall < 0 || d < min_wall)
            min_wall = d;
        max_m = std::max(max_m, mm);
    }
    std::vector<Rational> omega_ext(2 * l);
    for (std::size_t x = 0; x < l; ++x)
        omega_ext[x] = f.ample[x];
    {
        Rational eta = min_wall / (2 * (1 + max_m));
        std::vector<Rational> eta_of(l);
        for (std::size_t i = 0; i < l; ++i) {
            if (e_col[static_cast<std::size_t>(ray_order[i])] < 0)
                continue;
            eta_of[static_cast<std::size_t>(ray_order[i])] = eta;
            eta /= 2;
        }
        for (std::size_t i = 0; i < l; ++i)
            omega_ext[l + i] = -eta_of[i];
    }
    omega_ext = reduce_ext(omega_ext);
    const std::vector<Rational> omega = to_basis(omega_ext);

    // T(omega, -, -) on the extended generators, then on the basis.
    Matrix Mext(2 * l, 2 * l);
    for (std::size_t u = 0; u < 2 * l; ++u)
        for (std::size_t v = u; v < 2 * l; ++v) {
            Rational s = 0;
            for (std::size_t w = 0; w < 2 * l; ++w)
                if (omega_ext[w] != 0)
                    s += omega_ext[w] * B.value(w, u, v);
            Mext(u, v) = s;
            Mext(v, u) = s;
        }
    Matrix L2 = B.lift.transpose() * Mext * B.lift;

    StrataComplex sc;
    sc.label = "toric blow-up";
    sc.n = 3;
    sc.strata.resize(4);
    {
        StratumComponent x;
        x.dim = 3;
        x.betti = {{0, 1}, {2, h}, {4, h}, {6, 1}};
        x.pairing = {{0, Matrix::identity(1)}, {2, Matrix::identity(h)}, {4, Matrix::identity(h)},
                     {6, Matrix::identity(1)}};
        x.lefschetz = {{0, Matrix::column(omega)}, {2, L2}, {4, Matrix::column(omega).transpose()}};
        sc.strata[0].push_back(x);
    }

    // Surfaces D_j.
    struct Gen {
        int curve = -1; // neighbor k for C_k, else -1
        int owner = -1; // for e: the earlier ray i_p
    };
    std::map<std::pair<int, int>, std::size_t> curve_comp;
    std::vector<std::vector<Gen>> gens(l);
    std::vector<std::vector<std::size_t>> basis_idx(l);
    std::vector<Matrix> gram(l);
    std::vector<std::vector<Rational>> omega_on(l);
    std::map<std::pair<int, int>, Rational> curve_deg;
    const auto walls = f.faces(2);
    const auto cones3 = f.faces(3);
    std::set<std::vector<int>> cone_set(cones3.begin(), cones3.end());
    auto is_cone = [&](int a, int b, int c) {
        std::vector<int> s{a, b, c};
        std::sort(s.begin(), s.end());
        return cone_set.count(s) > 0;
    };
    // Intersection of an extended generator with a curve in D_j.
    auto meet = [&](std::size_t g, int j, const Gen& c) -> Rational {
        if (c.curve >= 0) {
            const int k = c.curve;
            if (g < l)
                return T.triple(static_cast<int>(g), j, k);
            const int i = static_cast<int>(g - l);
            const int first = B.earlier(j, k) ? j : k;
            return i == first ? Rational(B.mult(j, k)) : Rational(0);
        }
        if (g < l)
            return 0;
        const int i = static_cast<int>(g - l);
        if (i == c.owner)
            return -1;
        if (i == j)
            return 1;
        return 0;
    };
    for (std::size_t j = 0; j < l; ++j) {
        const int J = static_cast<int>(j);
        std::vector<int> nbr;
        for (const auto& w : walls)
            if (w[0] == J || w[1] == J)
                nbr.push_back(w[0] == J ? w[1] : w[0]);
        auto& G = gens[j];
        for (int k : nbr)
            G.push_back({k, -1});
        for (int k : nbr)
            if (B.earlier(k, J))
                for (long t = 0; t < B.mult(J, k); ++t)
                    G.push_back({-1, k});
        const std::size_t g = G.size();
        Matrix gm(g, g);
        for (std::size_t a = 0; a < g; ++a)
            for (std::size_t b = 0; b < g; ++b) {
                const Gen &x = G[a], &y = G[b];
                Rational v = 0;
                if (x.curve >= 0 && y.curve >= 0) {
                    if (a == b)
                        v = T.wall_degree(J, x.curve, x.curve) - (B.earlier(x.curve, J) ? B.mult(J, x.curve) : 0);
                    else
                        v = is_cone(J, x.curve, y.curve) ? 1 : 0;
                } else if (x.curve < 0 && y.curve < 0) {
                    v = a == b ? -1 : 0;
                } else {
                    const Gen& c = x.curve >= 0 ? x : y;
                    const Gen& e = x.curve >= 0 ? y : x;
                    v = c.curve == e.owner ? 1 : 0;
                }
                gm(a, b) = v;
            }
        // Rank: Picard rank of the toric surface plus the points blown up.
        std::size_t expected = nbr.size() - 2;
        for (const auto& x : G)
            expected += x.curve < 0;
        RrefResult rr = rref(gm);
        if (rr.rank != expected)
            throw Error("InconsistentGeometry", "surface D_" + std::to_string(j) + ": Gram rank " +
                                                    std::to_string(rr.rank) + ", expected " + std::to_string(expected));
        basis_idx[j] = rr.pivots;
        gram[j] = gm;
        StratumComponent c;
        c.index = {J};
        c.dim = 2;
        const auto& bi = basis_idx[j];
        const std::size_t b2 = bi.size();
        Matrix gbb = gm.rows_subset(bi).cols_subset(bi);
        c.betti = {{0, 1}, {2, b2}, {4, 1}};
        c.pairing = {{0, Matrix::identity(1)}, {2, gbb}, {4, Matrix::identity(1)}};
        // Restriction of an extended class: G_BB^{-1} (class . basis curves);
        // checked against every generator.
        std::vector<Rational> ow(b2);
        auto restrict_ext = [&](const std::vector<Rational>& ext) {
            Matrix v(g, 1);
            for (std::size_t a = 0; a < g; ++a) {
                Rational s = 0;
                for (std::size_t u = 0; u < 2 * l; ++u)
                    if (ext[u] != 0)
                        s += ext[u] * meet(u, J, G[a]);
                v(a, 0) = s;
            }
            Matrix coords = inverse(gbb) * v.rows_subset(bi);
            if (gm.cols_subset(bi) * coords != v)
                throw Error("InconsistentGeometry", "restriction to D_" + std::to_string(j) +
                                                        " disagrees with the curve intersections");
            return coords;
        };
        Matrix r2(b2, h);
        for (std::size_t col = 0; col < h; ++col) {
            std::vector<Rational> ext(2 * l);
            for (std::size_t u = 0; u < 2 * l; ++u)
                ext[u] = B.lift(u, col);
            r2.set_block(0, col, restrict_ext(ext));
        }
        Matrix om = restrict_ext(omega_ext);
        c.lefschetz = {{0, om}, {2, (gbb * om).transpose()}};
        sc.strata[1].push_back(c);
        // [D_j] = pi^* D_j - E_j.
        std::vector<Rational> dj(2 * l);
        dj[j] = 1;
        if (e_col[j] >= 0)
            dj[l + j] = -1;
        std::vector<Rational> djb = to_basis(reduce_ext(dj));
        StratumRestriction r;
        r.m = 0;
        r.from = 0;
        r.to = j;
        r.maps = {{0, Matrix::identity(1)}, {2, r2}, {4, Matrix::column(djb).transpose()}};
        sc.restrictions.push_back(r);
        for (std::size_t a = 0; a < nbr.size(); ++a) {
            Rational d = 0;
            for (std::size_t u = 0; u < 2 * l; ++u)
                if (omega_ext[u] != 0)
                    d += omega_ext[u] * meet(u, J, G[a]);
            curve_deg[{std::min(J, nbr[a]), std::max(J, nbr[a])}] = d;
        }
    }
    // Curves D_tau.
    for (const auto& w : walls) {
        curve_comp[{w[0], w[1]}] = sc.strata[2].size();
        sc.strata[2].push_back(p1_component({w[0], w[1]}, 0, curve_deg.at({w[0], w[1]})));
    }
    for (std::size_t j = 0; j < l; ++j) {
        const auto& G = gens[j];
        const auto& bi = basis_idx[j];
        for (std::size_t a = 0; a < G.size(); ++a) {
            if (G[a].curve < 0)
                continue;
            const int k = G[a].curve;
            const int J = static_cast<int>(j);
            StratumRestriction r;
            r.m = 1;
            r.from = j;
            r.to = curve_comp.at({std::min(J, k), std::max(J, k)});
            Matrix row(1, bi.size());
            for (std::size_t b = 0; b < bi.size(); ++b)
                row(0, b) = gram[j](a, bi[b]);
            r.maps = {{0, Matrix::identity(1)}, {2, row}};
            sc.restrictions.push_back(r);
        }
    }
    // Points D_sigma.
    for (const auto& c : cones3) {
        const std::size_t pt = sc.strata[3].size();
        sc.strata[3].push_back(point_component(c, 0));
        for (auto [a, b] : {std::pair{c[0], c[1]}, std::pair{c[0], c[2]}, std::pair{c[1], c[2]}}) {
            StratumRestriction r;
            r.m = 2;
            r.from = curve_comp.at({a, b});
            r.to = pt;
            r.maps = {{0, Matrix::identity(1)}};
            sc.restrictions.push_back(r);
        }
    }
    if (summary) {
        summary->order = ray_order;
        summary->points = B.m;
        summary->h2_rank = h;
        summary->euler_x = static_cast<long>(cones3.size() + 2 * active.size());
    }
    return make_strata(std::move(sc));
}

ToricPipeline run_toric(const std::vector<IVec>& points, const LaurentData* laurent, int trials, std::uint64_t seed,
                        std::vector<int> ray_order)
{
    ToricPipeline out;
    out.polytope = make_polytope(points);
    validate_reflexive(out.polytope);
    out.normal = spanning_fan(out.polytope);
    out.refined = smooth_refine(out.normal, out.polytope);
    LaurentData l = laurent ? *laurent : standard_laurent(out.polytope);
    check_support(l, out.polytope);
    out.poles = pole_analysis(out.refined, l, out.polytope);
    out.probe = nondegeneracy_probe(l, trials, seed);
    out.strata = blowup_strata(out.refined, l, out.polytope, ray_order, &out.blowup);
    return out;
}

std::vector<IVec> p3_polytope()
{
    return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}};
}

std::vector<IVec> octahedron_polytope()
{
    return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

} // namespace hodgeforge
