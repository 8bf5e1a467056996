#pragma once

// Polytope kernel shared by the slicer and isotropy modules: double-description
// conversion between V- and H-representations, combinatorial fan triangulation,
// volumes and uniform-measure moments. Templated over the scalar so the same
// code runs in float64 and exact-rational mode.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "simplexslice/errors.hpp"
#include "simplexslice/rational.hpp"

namespace sslice::geom {

template <class S>
using Vec = std::vector<S>;
template <class S>
using Mat = std::vector<std::vector<S>>;

template <class S>
struct Traits;

template <>
struct Traits<double> {
    static constexpr bool exact = false;
    static bool is_zero(const double& x, double scale) {
        return std::abs(x) <= 1e-9 * std::max(1.0, scale);
    }
    static double abs(const double& x) { return std::abs(x); }
    static double dbl(const double& x) { return x; }
};

template <>
struct Traits<Rational> {
    static constexpr bool exact = true;
    static bool is_zero(const Rational& x, double) { return x == 0; }
    static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
    static double dbl(const Rational& x) { return to_double(x); }
};

template <class S>
S dot(const Vec<S>& a, const Vec<S>& b) {
    S acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

template <class S>
double inf_norm_dbl(const Vec<S>& a) {
    double m = 0.0;
    for (const auto& x : a) m = std::max(m, std::abs(Traits<S>::dbl(x)));
    return m;
}

// |det| of a square matrix, by Gaussian elimination with pivoting.
template <class S>
S abs_det(Mat<S> m) {
    const std::size_t k = m.size();
    S det(1);
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        double best = std::abs(Traits<S>::dbl(m[c][c]));
        for (std::size_t r = c + 1; r < k; ++r) {
            double cand = std::abs(Traits<S>::dbl(m[r][c]));
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (Traits<S>::is_zero(m[piv][c], 1.0) && m[piv][c] == S(0)) return S(0);
        if (piv != c) std::swap(m[piv], m[c]);
        if (m[c][c] == S(0)) return S(0);
        det *= m[c][c];
        for (std::size_t r = c + 1; r < k; ++r) {
            if (m[r][c] == S(0)) continue;
            S f = m[r][c] / m[c][c];
            for (std::size_t j = c; j < k; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return Traits<S>::abs(det);
}

// Affine rank of a point set (rank of the differences to the first point).
template <class S>
int affine_rank(const Mat<S>& pts, double scale = 1.0) {
    if (pts.size() <= 1) return 0;
    const std::size_t d = pts[0].size();
    Mat<S> rows;
    rows.reserve(pts.size() - 1);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Vec<S> r(d);
        for (std::size_t k = 0; k < d; ++k) r[k] = pts[i][k] - pts[0][k];
        rows.push_back(std::move(r));
    }
    int rank = 0;
    std::size_t col = 0;
    std::size_t top = 0;
    while (col < d && top < rows.size()) {
        std::size_t piv = top;
        double best = std::abs(Traits<S>::dbl(rows[top][col]));
        for (std::size_t r = top + 1; r < rows.size(); ++r) {
            double cand = std::abs(Traits<S>::dbl(rows[r][col]));
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (rows[piv][col] == S(0) || Traits<S>::is_zero(rows[piv][col], scale)) {
            ++col;
            continue;
        }
        std::swap(rows[piv], rows[top]);
        for (std::size_t r = top + 1; r < rows.size(); ++r) {
            if (rows[r][col] == S(0)) continue;
            S f = rows[r][col] / rows[top][col];
            for (std::size_t j = col; j < d; ++j) rows[r][j] -= f * rows[top][j];
        }
        ++rank;
        ++top;
        ++col;
    }
    return rank;
}

namespace detail {

using Bitset = std::vector<std::uint64_t>;

inline Bitset bitset_make(std::size_t n) { return Bitset((n + 63) / 64, 0); }
inline void bitset_set(Bitset& b, std::size_t i) { b[i / 64] |= (1ULL << (i % 64)); }
inline bool bitset_get(const Bitset& b, std::size_t i) {
    return (b[i / 64] >> (i % 64)) & 1ULL;
}
inline Bitset bitset_and(const Bitset& a, const Bitset& b) {
    Bitset r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] & b[i];
    return r;
}
inline bool bitset_subset(const Bitset& a, const Bitset& b) {  // a subset of b
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] & ~b[i]) return false;
    return true;
}

// Inverse of a square matrix by Gauss-Jordan; throws HullFailure if singular.
template <class S>
Mat<S> inverse(Mat<S> m) {
    const std::size_t k = m.size();
    Mat<S> inv(k, Vec<S>(k, S(0)));
    for (std::size_t i = 0; i < k; ++i) inv[i][i] = S(1);
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        double best = std::abs(Traits<S>::dbl(m[c][c]));
        for (std::size_t r = c + 1; r < k; ++r) {
            double cand = std::abs(Traits<S>::dbl(m[r][c]));
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (m[piv][c] == S(0)) throw HullFailure("singular matrix in cone initialization");
        if (piv != c) {
            std::swap(m[piv], m[c]);
            std::swap(inv[piv], inv[c]);
        }
        S p = m[c][c];
        for (std::size_t j = 0; j < k; ++j) {
            m[c][j] /= p;
            inv[c][j] /= p;
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c || m[r][c] == S(0)) continue;
            S f = m[r][c];
            for (std::size_t j = 0; j < k; ++j) {
                m[r][j] -= f * m[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

template <class S>
void normalize_ray(Vec<S>& f) {
    if constexpr (Traits<S>::exact) {
        Rational m(0);
        for (const auto& x : f) {
            Rational a = Traits<S>::abs(x);
            if (a > m) m = a;
        }
        if (m != 0)
            for (auto& x : f) x /= m;
    } else {
        double m = inf_norm_dbl(f);
        if (m > 0)
            for (auto& x : f) x /= m;
    }
}

}  // namespace detail

template <class S>
struct ConeFacets {
    Mat<S> normals;                         // f with <f, g> >= 0 for every generator g
    std::vector<std::vector<int>> tight;    // per facet: generator indices with <f, g> = 0
    bool whole_space = false;               // cone(gens) = R^D, no facets
};

// Double description, generators -> facets. The input cone must be
// full-dimensional (else HullFailure). Facets come back as supporting
// normals of cone(gens) together with their tight generator sets.
template <class S>
ConeFacets<S> dual_cone_facets(const Mat<S>& gens_in) {
    if (gens_in.empty()) throw HullFailure("no generators");
    const std::size_t D = gens_in[0].size();
    // drop zero generators
    Mat<S> gens;
    for (const auto& g : gens_in) {
        bool nonzero = false;
        for (const auto& x : g)
            if (!(x == S(0))) nonzero = true;
        if (nonzero) gens.push_back(g);
    }
    const std::size_t m = gens.size();
    if (m < D) throw HullFailure("cone is not full-dimensional");

    double gscale = 1.0;
    for (const auto& g : gens) gscale = std::max(gscale, inf_norm_dbl(g));

    // greedy selection of D independent generators (elimination with pivoting)
    std::vector<std::size_t> base;
    {
        Mat<S> work = gens;
        std::vector<bool> used(m, false);
        for (std::size_t col = 0; col < D; ++col) {
            std::size_t piv = m;
            double best = 0.0;
            for (std::size_t r = 0; r < m; ++r) {
                if (used[r]) continue;
                double cand = std::abs(Traits<S>::dbl(work[r][col]));
                if (cand > best) {
                    best = cand;
                    piv = r;
                }
            }
            if (piv == m || Traits<S>::is_zero(work[piv][col], gscale)) continue;
            used[piv] = true;
            base.push_back(piv);
            for (std::size_t r = 0; r < m; ++r) {
                if (used[r] || work[r][col] == S(0)) continue;
                S f = work[r][col] / work[piv][col];
                for (std::size_t j = 0; j < D; ++j) work[r][j] -= f * work[piv][j];
            }
        }
        if (base.size() != D) throw HullFailure("cone is not full-dimensional");
    }

    // processing order: base first, then the rest
    std::vector<std::size_t> order = base;
    {
        std::vector<bool> inbase(m, false);
        for (auto i : base) inbase[i] = true;
        for (std::size_t i = 0; i < m; ++i)
            if (!inbase[i]) order.push_back(i);
    }

    struct Facet {
        Vec<S> f;
        detail::Bitset tight;
    };
    std::vector<Facet> facets;

    // initial simplicial cone: facet j vanishes on all base generators but j
    {
        Mat<S> B(D, Vec<S>(D));
        for (std::size_t j = 0; j < D; ++j) B[j] = gens[base[j]];
        Mat<S> Binv = detail::inverse(B);  // columns of Binv are the facet normals
        for (std::size_t j = 0; j < D; ++j) {
            Facet fc;
            fc.f.resize(D);
            for (std::size_t i = 0; i < D; ++i) fc.f[i] = Binv[i][j];
            detail::normalize_ray(fc.f);
            fc.tight = detail::bitset_make(m);
            facets.push_back(std::move(fc));
        }
    }

    auto recompute_tight = [&](Facet& fc, std::size_t processed) {
        fc.tight = detail::bitset_make(m);
        for (std::size_t t = 0; t < processed; ++t) {
            std::size_t gi = order[t];
            S val = dot(fc.f, gens[gi]);
            if (Traits<S>::is_zero(val, gscale)) detail::bitset_set(fc.tight, gi);
        }
    };
    for (auto& fc : facets) recompute_tight(fc, D);

    for (std::size_t step = D; step < m; ++step) {
        const std::size_t gi = order[step];
        const Vec<S>& g = gens[gi];
        std::vector<int> pos, neg, zer;
        std::vector<S> vals(facets.size());
        for (std::size_t i = 0; i < facets.size(); ++i) {
            vals[i] = dot(facets[i].f, g);
            if (Traits<S>::is_zero(vals[i], gscale))
                zer.push_back(static_cast<int>(i));
            else if (vals[i] > S(0))
                pos.push_back(static_cast<int>(i));
            else
                neg.push_back(static_cast<int>(i));
        }
        for (int i : zer) detail::bitset_set(facets[i].tight, gi);
        if (neg.empty()) continue;

        std::vector<Facet> next;
        next.reserve(pos.size() + zer.size() + pos.size() * neg.size());
        for (int i : pos) next.push_back(facets[i]);
        for (int i : zer) next.push_back(facets[i]);

        for (int ip : pos) {
            for (int in : neg) {
                // adjacency: no third facet whose tight set contains the intersection
                detail::Bitset common = detail::bitset_and(facets[ip].tight, facets[in].tight);
                bool adjacent = true;
                for (std::size_t k = 0; k < facets.size(); ++k) {
                    if (static_cast<int>(k) == ip || static_cast<int>(k) == in) continue;
                    if (detail::bitset_subset(common, facets[k].tight)) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                Facet fc;
                fc.f.resize(D);
                for (std::size_t j = 0; j < D; ++j)
                    fc.f[j] = vals[ip] * facets[in].f[j] - vals[in] * facets[ip].f[j];
                detail::normalize_ray(fc.f);
                recompute_tight(fc, step + 1);
                next.push_back(std::move(fc));
            }
        }
        facets = std::move(next);
        if (facets.empty()) {
            ConeFacets<S> out;
            out.whole_space = true;
            return out;
        }
        if (facets.size() > 200000) throw HullFailure("facet explosion in double description");
    }

    ConeFacets<S> out;
    out.normals.reserve(facets.size());
    out.tight.reserve(facets.size());
    for (auto& fc : facets) {
        std::vector<int> ts;
        for (std::size_t i = 0; i < m; ++i) {
            S val = dot(fc.f, gens[i]);
            if (Traits<S>::is_zero(val, gscale)) ts.push_back(static_cast<int>(i));
        }
        out.normals.push_back(std::move(fc.f));
        out.tight.push_back(std::move(ts));
    }
    return out;
}

// H-representation A x <= b.
template <class S>
struct HRep {
    Mat<S> A;
    Vec<S> b;
    std::size_t size() const { return A.size(); }
};

template <class S>
struct FacetEnum {
    HRep<S> hrep;
    std::vector<std::vector<int>> facet_vertices;  // per facet, incident point indices
};

// Facets of conv(points); points must be full-dimensional in R^d.
template <class S>
FacetEnum<S> facets_of_points(const Mat<S>& pts) {
    if (pts.empty()) throw HullFailure("no points");
    const std::size_t d = pts[0].size();
    Mat<S> gens;
    gens.reserve(pts.size());
    for (const auto& p : pts) {
        Vec<S> g(d + 1);
        for (std::size_t i = 0; i < d; ++i) g[i] = p[i];
        g[d] = S(1);
        gens.push_back(std::move(g));
    }
    ConeFacets<S> cf = dual_cone_facets(gens);
    if (cf.whole_space) throw HullFailure("degenerate hull");
    FacetEnum<S> out;
    for (std::size_t i = 0; i < cf.normals.size(); ++i) {
        const Vec<S>& f = cf.normals[i];
        // <(w, c), (x, 1)> >= 0  ->  -w. x <= c
        bool pure_t = true;
        for (std::size_t j = 0; j < d; ++j)
            if (!(f[j] == S(0))) pure_t = false;
        if (pure_t) continue;
        Vec<S> row(d);
        for (std::size_t j = 0; j < d; ++j) row[j] = -f[j];
        out.hrep.A.push_back(std::move(row));
        out.hrep.b.push_back(f[d]);
        out.facet_vertices.push_back(cf.tight[i]);
    }
    return out;
}

template <class S>
struct VertexEnum {
    Mat<S> vertices;
    std::vector<std::vector<int>> tight_rows;  // per vertex, indices of tight rows of A
    bool empty = false;
};

// Vertices of {x : A x <= b}; the polyhedron must be bounded.
template <class S>
VertexEnum<S> enumerate_vertices(const HRep<S>& H) {
    VertexEnum<S> out;
    if (H.A.empty()) throw HullFailure("no inequalities");
    const std::size_t d = H.A[0].size();
    Mat<S> gens;
    gens.reserve(H.A.size() + 1);
    for (std::size_t i = 0; i < H.A.size(); ++i) {
        Vec<S> g(d + 1);
        for (std::size_t j = 0; j < d; ++j) g[j] = -H.A[i][j];
        g[d] = H.b[i];
        gens.push_back(std::move(g));
    }
    {
        Vec<S> g(d + 1, S(0));
        g[d] = S(1);
        gens.push_back(std::move(g));
    }
    ConeFacets<S> cf;
    try {
        cf = dual_cone_facets(gens);
    } catch (const HullFailure&) {
        // homogenization cone not full-dimensional: feasible set is empty or
        // degenerate beyond vertex enumeration
        out.empty = true;
        return out;
    }
    if (cf.whole_space) {
        out.empty = true;
        return out;
    }
    double scale = 1.0;
    for (const auto& z : cf.normals) scale = std::max(scale, inf_norm_dbl(z));
    for (std::size_t i = 0; i < cf.normals.size(); ++i) {
        const Vec<S>& z = cf.normals[i];
        const S& t = z[d];
        if (Traits<S>::is_zero(t, scale)) {
            if constexpr (Traits<S>::exact) {
                if (t == 0) throw HullFailure("unbounded polyhedron in vertex enumeration");
            } else {
                throw HullFailure("unbounded polyhedron in vertex enumeration");
            }
        }
        if (t < S(0)) continue;  // cannot occur: t >= 0 is one of the cone constraints
        Vec<S> v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = z[j] / t;
        std::vector<int> rows;
        for (int gi : cf.tight[i])
            if (gi < static_cast<int>(H.A.size())) rows.push_back(gi);
        out.vertices.push_back(std::move(v));
        out.tight_rows.push_back(std::move(rows));
    }
    if (out.vertices.empty()) out.empty = true;
    if constexpr (!Traits<S>::exact) {
        // merge float near-duplicates
        double vscale = 1.0;
        for (const auto& v : out.vertices) vscale = std::max(vscale, inf_norm_dbl(v));
        Mat<S> verts;
        std::vector<std::vector<int>> tights;
        for (std::size_t i = 0; i < out.vertices.size(); ++i) {
            bool dup = false;
            for (std::size_t k = 0; k < verts.size(); ++k) {
                double dm = 0.0;
                for (std::size_t j = 0; j < d; ++j)
                    dm = std::max(dm, std::abs(out.vertices[i][j] - verts[k][j]));
                if (dm <= 1e-9 * vscale) {
                    std::set<int> merged(tights[k].begin(), tights[k].end());
                    merged.insert(out.tight_rows[i].begin(), out.tight_rows[i].end());
                    tights[k].assign(merged.begin(), merged.end());
                    dup = true;
                    break;
                }
            }
            if (!dup) {
                verts.push_back(out.vertices[i]);
                tights.push_back(out.tight_rows[i]);
            }
        }
        out.vertices = std::move(verts);
        out.tight_rows = std::move(tights);
    }
    return out;
}

// Fan triangulation of a polytope given its vertices and per-facet vertex
// sets. Purely combinatorial apart from affine-rank tests; returns simplices
// as (k+1)-tuples of vertex indices.
template <class S>
class Triangulator {
  public:
    Triangulator(const Mat<S>& pts, std::vector<std::vector<int>> facet_vsets, double scale)
        : pts_(pts), scale_(scale) {
        for (auto& fv : facet_vsets) {
            std::sort(fv.begin(), fv.end());
            facets_.push_back(std::move(fv));
        }
    }

    std::vector<std::vector<int>> run(std::vector<int> all, int k) {
        std::sort(all.begin(), all.end());
        return face(all, k);
    }

  private:
    std::vector<std::vector<int>> face(const std::vector<int>& vset, int k) {
        if (k <= 0) return {{vset[0]}};
        if (static_cast<int>(vset.size()) == k + 1) return {vset};
        auto it = memo_.find(vset);
        if (it != memo_.end()) return it->second;

        std::vector<std::vector<int>> out;
        const int v0 = vset[0];
        std::set<std::vector<int>> seen;
        for (const auto& fv : facets_) {
            std::vector<int> sub;
            std::set_intersection(vset.begin(), vset.end(), fv.begin(), fv.end(),
                                  std::back_inserter(sub));
            if (static_cast<int>(sub.size()) < k) continue;
            if (sub.size() == vset.size()) continue;
            if (std::binary_search(sub.begin(), sub.end(), v0)) continue;
            if (!seen.insert(sub).second) continue;
            Mat<S> sp;
            sp.reserve(sub.size());
            for (int i : sub) sp.push_back(pts_[i]);
            if (affine_rank(sp, scale_) != k - 1) continue;
            for (auto& t : face(sub, k - 1)) {
                std::vector<int> simplex;
                simplex.reserve(t.size() + 1);
                simplex.push_back(v0);
                simplex.insert(simplex.end(), t.begin(), t.end());
                out.push_back(std::move(simplex));
            }
        }
        if (out.empty()) throw HullFailure("triangulation found no boundary facets");
        memo_[vset] = out;
        return out;
    }

    const Mat<S>& pts_;
    double scale_;
    std::vector<std::vector<int>> facets_;
    std::map<std::vector<int>, std::vector<std::vector<int>>> memo_;
};

// Volume of a full-dimensional point set in R^k (k = pts[0].size()).
template <class S>
S volume_fulldim(const Mat<S>& pts, const std::vector<std::vector<int>>& facet_vsets) {
    const int k = static_cast<int>(pts[0].size());
    double scale = 1.0;
    for (const auto& p : pts) scale = std::max(scale, inf_norm_dbl(p));
    Triangulator<S> tri(pts, facet_vsets, scale);
    std::vector<int> all(pts.size());
    std::iota(all.begin(), all.end(), 0);
    auto simplices = tri.run(all, k);
    S vol(0);
    S factorial(1);
    for (int i = 2; i <= k; ++i) factorial *= S(i);
    for (const auto& sx : simplices) {
        Mat<S> edges(k, Vec<S>(k));
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) edges[r][c] = pts[sx[r + 1]][c] - pts[sx[0]][c];
        vol += abs_det(edges);
    }
    return vol / factorial;
}

template <class S>
struct UniformMoments {
    S volume;
    Vec<S> barycentre;
    Mat<S> covariance;  // central second moment of the uniform distribution
};

// Moments of the uniform distribution on a full-dimensional polytope in R^k.
template <class S>
UniformMoments<S> moments_fulldim(const Mat<S>& pts,
                                  const std::vector<std::vector<int>>& facet_vsets) {
    const int k = static_cast<int>(pts[0].size());
    double scale = 1.0;
    for (const auto& p : pts) scale = std::max(scale, inf_norm_dbl(p));
    Triangulator<S> tri(pts, facet_vsets, scale);
    std::vector<int> all(pts.size());
    std::iota(all.begin(), all.end(), 0);
    auto simplices = tri.run(all, k);

    S factorial(1);
    for (int i = 2; i <= k; ++i) factorial *= S(i);
    S vol_total(0);
    Vec<S> first(k, S(0));          // integral of x
    Mat<S> second(k, Vec<S>(k, S(0)));  // integral of x x^T
    const S denom = S((k + 1) * (k + 2));
    for (const auto& sx : simplices) {
        Mat<S> edges(k, Vec<S>(k));
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) edges[r][c] = pts[sx[r + 1]][c] - pts[sx[0]][c];
        S vol = abs_det(edges) / factorial;
        if (vol == S(0)) continue;
        vol_total += vol;
        Vec<S> vsum(k, S(0));
        for (int vi : sx)
            for (int c = 0; c < k; ++c) vsum[c] += pts[vi][c];
        for (int c = 0; c < k; ++c) first[c] += vol * vsum[c] / S(k + 1);
        // integral over the simplex of x x^T = vol/((k+1)(k+2)) (sum v v^T + (sum v)(sum v)^T)
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) {
                S acc = vsum[r] * vsum[c];
                for (int vi : sx) acc += pts[vi][r] * pts[vi][c];
                second[r][c] += vol * acc / denom;
            }
    }
    if (vol_total == S(0)) throw HullFailure("zero volume in moment computation");
    UniformMoments<S> out;
    out.volume = vol_total;
    out.barycentre.resize(k);
    for (int c = 0; c < k; ++c) out.barycentre[c] = first[c] / vol_total;
    out.covariance.assign(k, Vec<S>(k, S(0)));
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            out.covariance[r][c] = second[r][c] / vol_total - out.barycentre[r] * out.barycentre[c];
    return out;
}

// Affine chart of a (possibly lower-dimensional) point set. Float charts are
// orthonormal (gram_det = 1); rational charts use difference-vector bases and
// report det(B^T B) so callers can rescale volumes.
template <class S>
struct AffineChart {
    Vec<S> origin;
    Mat<S> basis_cols;  // ambient_dim x rank
    Mat<S> local;       // per point, rank coordinates
    S gram_det = S(1);
    int rank = 0;
};

template <class S>
AffineChart<S> make_chart(const Mat<S>& pts);

template <>
inline AffineChart<double> make_chart<double>(const Mat<double>& pts) {
    AffineChart<double> ch;
    if (pts.empty()) throw HullFailure("no points for chart");
    const std::size_t d = pts[0].size();
    ch.origin = pts[0];
    double scale = 1.0;
    for (const auto& p : pts) scale = std::max(scale, inf_norm_dbl(p));
    // modified Gram-Schmidt over difference vectors, two passes
    Mat<double> q;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Vec<double> w(d);
        for (std::size_t k = 0; k < d; ++k) w[k] = pts[i][k] - ch.origin[k];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : q) {
                double c = dot(e, w);
                for (std::size_t k = 0; k < d; ++k) w[k] -= c * e[k];
            }
        double nw = std::sqrt(dot(w, w));
        if (nw <= 1e-9 * scale) continue;
        for (double& x : w) x /= nw;
        q.push_back(std::move(w));
    }
    ch.rank = static_cast<int>(q.size());
    ch.basis_cols.assign(d, Vec<double>(ch.rank, 0.0));
    for (int j = 0; j < ch.rank; ++j)
        for (std::size_t i = 0; i < d; ++i) ch.basis_cols[i][j] = q[j][i];
    ch.local.reserve(pts.size());
    for (const auto& p : pts) {
        Vec<double> y(ch.rank, 0.0);
        for (int j = 0; j < ch.rank; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < d; ++i) acc += q[j][i] * (p[i] - ch.origin[i]);
            y[j] = acc;
        }
        ch.local.push_back(std::move(y));
    }
    ch.gram_det = 1.0;
    return ch;
}

template <>
inline AffineChart<Rational> make_chart<Rational>(const Mat<Rational>& pts) {
    AffineChart<Rational> ch;
    if (pts.empty()) throw HullFailure("no points for chart");
    const std::size_t d = pts[0].size();
    ch.origin = pts[0];
    // greedy linearly independent difference vectors
    Mat<Rational> basis;          // rows
    Mat<Rational> reduced;        // row-reduced copies for the independence test
    std::vector<int> pivot_cols;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Vec<Rational> w(d);
        for (std::size_t k = 0; k < d; ++k) w[k] = pts[i][k] - ch.origin[k];
        Vec<Rational> r = w;
        for (std::size_t bi = 0; bi < reduced.size(); ++bi) {
            const int pc = pivot_cols[bi];
            if (r[pc] == 0) continue;
            Rational f = r[pc] / reduced[bi][pc];
            for (std::size_t k = 0; k < d; ++k) r[k] -= f * reduced[bi][k];
        }
        int pc = -1;
        for (std::size_t k = 0; k < d; ++k)
            if (r[k] != 0) {
                pc = static_cast<int>(k);
                break;
            }
        if (pc < 0) continue;
        basis.push_back(w);
        reduced.push_back(r);
        pivot_cols.push_back(pc);
    }
    ch.rank = static_cast<int>(basis.size());
    ch.basis_cols.assign(d, Vec<Rational>(ch.rank, Rational(0)));
    for (int j = 0; j < ch.rank; ++j)
        for (std::size_t i = 0; i < d; ++i) ch.basis_cols[i][j] = basis[j][i];
    // Gram matrix and its determinant
    Mat<Rational> gram(ch.rank, Vec<Rational>(ch.rank));
    for (int a = 0; a < ch.rank; ++a)
        for (int b = 0; b < ch.rank; ++b) gram[a][b] = dot(basis[a], basis[b]);
    ch.gram_det = ch.rank == 0 ? Rational(1) : abs_det(gram);
    // local coordinates: solve gram * y = B^T (p - origin)  (normal equations, exact)
    for (const auto& p : pts) {
        Vec<Rational> rhs(ch.rank, Rational(0));
        for (int a = 0; a < ch.rank; ++a) {
            Rational acc(0);
            for (std::size_t i = 0; i < d; ++i) acc += basis[a][i] * (p[i] - ch.origin[i]);
            rhs[a] = acc;
        }
        // gaussian solve of the (small) SPD rational system
        Mat<Rational> m = gram;
        Vec<Rational> y = rhs;
        for (int c = 0; c < ch.rank; ++c) {
            int piv = -1;
            for (int r = c; r < ch.rank; ++r)
                if (m[r][c] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) throw HullFailure("singular gram matrix");
            std::swap(m[piv], m[c]);
            std::swap(y[piv], y[c]);
            for (int r = 0; r < ch.rank; ++r) {
                if (r == c || m[r][c] == 0) continue;
                Rational f = m[r][c] / m[c][c];
                for (int k = c; k < ch.rank; ++k) m[r][k] -= f * m[c][k];
                y[r] -= f * y[c];
            }
        }
        for (int c = 0; c < ch.rank; ++c) y[c] /= m[c][c];
        ch.local.push_back(std::move(y));
    }
    return ch;
}

// Volume of conv(pts) in its own affine hull; chart_volume * sqrt(gram_det).
template <class S>
struct VolumeResult {
    S chart_volume = S(0);
    S gram_det = S(1);
    int rank = 0;
    double value() const {
        return Traits<S>::dbl(chart_volume) * std::sqrt(Traits<S>::dbl(gram_det));
    }
};

template <class S>
VolumeResult<S> volume_of_points(const Mat<S>& pts) {
    VolumeResult<S> out;
    if (pts.empty()) {
        out.chart_volume = S(0);
        return out;
    }
    const int ambient = static_cast<int>(pts[0].size());
    double scale = 1.0;
    for (const auto& p : pts) scale = std::max(scale, inf_norm_dbl(p));
    if (affine_rank(pts, scale) == ambient) {
        // full-dimensional: no chart needed, the volume is exact in S
        out.rank = ambient;
        out.gram_det = S(1);
        FacetEnum<S> fe = facets_of_points(pts);
        out.chart_volume = volume_fulldim(pts, fe.facet_vertices);
        return out;
    }
    AffineChart<S> ch = make_chart(pts);
    out.rank = ch.rank;
    out.gram_det = ch.gram_det;
    if (ch.rank == 0) {
        out.chart_volume = S(1);  // a point has 0-dimensional volume 1
        out.gram_det = S(1);
        return out;
    }
    if (ch.rank == 1) {
        // segment: extent along the single chart coordinate
        S lo = ch.local[0][0], hi = ch.local[0][0];
        for (const auto& y : ch.local) {
            if (y[0] < lo) lo = y[0];
            if (y[0] > hi) hi = y[0];
        }
        out.chart_volume = hi - lo;
        return out;
    }
    FacetEnum<S> fe = facets_of_points(ch.local);
    out.chart_volume = volume_fulldim(ch.local, fe.facet_vertices);
    return out;
}

}  // namespace sslice::geom
