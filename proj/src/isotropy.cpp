#include "simplexslice/isotropy.hpp"

#include <algorithm>
#include <cmath>

#include "simplexslice/geometry.hpp"
#include "simplexslice/parallel.hpp"

namespace sslice {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

std::vector<double> from_eigen(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

PolytopeMoments polytope_moments(const Polytope& P) {
    if (P.is_empty()) throw HullFailure("moments of an empty polytope");
    if (P.dim() > 10) throw DomainError("geometric operations cap at ambient dimension 10");
    const int d = P.dim();
    const auto& pts = P.vertices();
    const int rank = geom::affine_rank(pts);
    PolytopeMoments out;
    if (rank == d) {
        auto fe = geom::facets_of_points(pts);
        auto mom = geom::moments_fulldim(pts, fe.facet_vertices);
        out.volume = mom.volume;
        out.barycentre = to_eigen(mom.barycentre);
        out.covariance = Eigen::MatrixXd(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out.covariance(i, j) = mom.covariance[i][j];
        return out;
    }
    // lower-dimensional body: compute in the orthonormal hull chart
    auto ch = geom::make_chart<double>(pts);
    if (ch.rank == 0) throw HullFailure("moments of a single point");
    auto fe = geom::facets_of_points(ch.local);
    auto mom = geom::moments_fulldim(ch.local, fe.facet_vertices);
    Eigen::MatrixXd B(d, ch.rank);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < ch.rank; ++j) B(i, j) = ch.basis_cols[i][j];
    Eigen::VectorXd bar_loc = to_eigen(mom.barycentre);
    Eigen::MatrixXd cov_loc(ch.rank, ch.rank);
    for (int i = 0; i < ch.rank; ++i)
        for (int j = 0; j < ch.rank; ++j) cov_loc(i, j) = mom.covariance[i][j];
    out.volume = mom.volume;
    out.barycentre = to_eigen(ch.origin) + B * bar_loc;
    out.covariance = B * cov_loc * B.transpose();
    return out;
}

RationalMoments polytope_moments_exact(const Polytope& P) {
    const auto& pts = P.rational_vertices();
    if (pts.empty()) throw HullFailure("moments of an empty polytope");
    const int d = P.dim();
    const int rank = geom::affine_rank(pts);
    RationalMoments out;
    if (rank == d) {
        auto fe = geom::facets_of_points(pts);
        auto mom = geom::moments_fulldim(pts, fe.facet_vertices);
        out.chart_volume = mom.volume;
        out.gram_det = 1;
        out.barycentre = mom.barycentre;
        out.covariance = mom.covariance;
        return out;
    }
    auto ch = geom::make_chart<Rational>(pts);
    if (ch.rank == 0) throw HullFailure("moments of a single point");
    auto fe = geom::facets_of_points(ch.local);
    auto mom = geom::moments_fulldim(ch.local, fe.facet_vertices);
    out.chart_volume = mom.volume;
    out.gram_det = ch.gram_det;
    out.barycentre.assign(d, Rational(0));
    for (int i = 0; i < d; ++i) {
        Rational acc = ch.origin[i];
        for (int j = 0; j < ch.rank; ++j) acc += ch.basis_cols[i][j] * mom.barycentre[j];
        out.barycentre[i] = acc;
    }
    out.covariance.assign(d, std::vector<Rational>(d, Rational(0)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Rational acc(0);
            for (int p = 0; p < ch.rank; ++p)
                for (int q = 0; q < ch.rank; ++q)
                    acc += ch.basis_cols[i][p] * mom.covariance[p][q] * ch.basis_cols[j][q];
            out.covariance[i][j] = acc;
        }
    return out;
}

IsotropicForm to_isotropic(const Polytope& P) {
    const int n = P.dim();
    PolytopeMoments mom = polytope_moments(P);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mom.covariance);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 1e-14)
        throw SingularCovariance("covariance is numerically singular");
    Eigen::MatrixXd isqrt = es.eigenvectors() *
                            es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                            es.eigenvectors().transpose();
    double det_isqrt = 1.0;
    for (int i = 0; i < n; ++i) det_isqrt /= std::sqrt(es.eigenvalues()[i]);
    const double v1 = mom.volume * det_isqrt;
    const double alpha = std::pow(v1, -1.0 / n);

    IsotropicForm out;
    out.map = alpha * isqrt;
    out.shift = -out.map * mom.barycentre;
    std::vector<std::vector<double>> verts;
    for (const auto& x : P.vertices()) {
        Eigen::VectorXd y = out.map * to_eigen(x) + out.shift;
        verts.push_back(from_eigen(y));
    }
    out.body = Polytope::from_points(n, std::move(verts));

    PolytopeMoments mom2 = polytope_moments(out.body);
    out.L_K = std::sqrt(mom2.covariance.trace() / n);
    if (std::abs(mom2.volume - 1.0) > 1e-9)
        throw SingularCovariance("isotropic normalization failed (volume)");
    if (mom2.barycentre.lpNorm<Eigen::Infinity>() > 1e-9)
        throw SingularCovariance("isotropic normalization failed (barycentre)");
    Eigen::MatrixXd dev =
        mom2.covariance - out.L_K * out.L_K * Eigen::MatrixXd::Identity(n, n);
    if (dev.lpNorm<Eigen::Infinity>() > 1e-8)
        throw SingularCovariance("isotropic normalization failed (covariance)");
    if (out.L_K < 1.0 / 12.0)
        throw SingularCovariance("isotropic constant below the universal lower bound");
    return out;
}

std::pair<double, double> hensley_interval(int ell, double L_K, double C_ell) {
    if (ell < 1 || !(L_K > 0.0) || !(C_ell >= 1.0))
        throw DomainError("hensley_interval needs ell >= 1, L_K > 0, C_ell >= 1");
    const double lo = std::pow(2.0 * M_PI * std::exp(3.0), -0.5 * ell) / std::pow(L_K, ell);
    const double hi = std::pow(C_ell, ell) / std::pow(L_K, ell);
    return {lo, hi};
}

namespace {

// Section of P by the subspace spanned by [basis(W_perp) | theta] through 0,
// returned as a local polytope whose LAST coordinate runs along theta.
struct ProfileSection {
    Polytope local = Polytope::empty(1);
    bool empty = true;
};

ProfileSection profile_section(const Polytope& P, const Subspace& Ebar,
                               const Eigen::VectorXd& theta_unit) {
    const int n = P.dim();
    ProfileSection out;
    if (Ebar.dim() == 1) {
        // the cutting flat is all of R^n: just rotate so theta runs last
        Subspace rest = Subspace(Eigen::MatrixXd(theta_unit)).complement();
        Eigen::MatrixXd R(n, n);
        R.leftCols(n - 1) = rest.basis();
        R.col(n - 1) = theta_unit;
        std::vector<std::vector<double>> locals;
        for (const auto& v : P.vertices()) {
            Eigen::VectorXd y = R.transpose() * to_eigen(v);
            locals.push_back(from_eigen(y));
        }
        out.local = Polytope::from_points(n, locals, true);
        out.empty = false;
        return out;
    }
    Subspace inner = Ebar.complement();  // Ebar-perp
    Eigen::MatrixXd W(n, inner.dim() + 1);
    W.leftCols(inner.dim()) = inner.basis();
    W.col(inner.dim()) = theta_unit;
    Subspace cut(W);
    SectionPolytope S = polytope_section(P, cut, std::vector<double>(n, 0.0));
    if (S.is_empty()) return out;
    out.local = Polytope::from_points(cut.dim(), S.vertices_local, true);
    out.empty = false;
    return out;
}

}  // namespace

double grunbaum_ratio(const Polytope& P, const Subspace& Ebar,
                      const Eigen::VectorXd& theta) {
    PolytopeMoments mom = polytope_moments(P);
    if (mom.barycentre.lpNorm<Eigen::Infinity>() > 1e-8)
        throw DomainError("grunbaum_ratio needs a centred body");
    if (Ebar.ambient_dim() != P.dim()) throw DimensionMismatch("Ebar ambient mismatch");
    Eigen::VectorXd t_in_bar = Ebar.projector() * theta;
    if ((theta - t_in_bar).norm() > 1e-8 * std::max(1.0, theta.norm()))
        throw DomainError("theta must lie in Ebar");
    Eigen::VectorXd th = theta / theta.norm();

    ProfileSection S = profile_section(P, Ebar, th);
    if (S.empty) throw EmptySection("section through the origin is empty");
    const int k = S.local.dim();
    std::vector<double> last(k, 0.0);
    last[k - 1] = 1.0;
    double total = volume(S.local);
    if (total <= 0.0) throw EmptySection("section has zero mass");
    Polytope clipped = halfspace_clip(S.local, last, 0.0);
    return volume(clipped) / total;
}

double busemann_N(const Polytope& P, const Subspace& Ebar, const Eigen::VectorXd& x,
                  Side side) {
    const int n = P.dim();
    if (Ebar.ambient_dim() != n) throw DimensionMismatch("Ebar ambient mismatch");
    const double xn = x.norm();
    if (xn < 1e-14) return 0.0;  // N(0) = 0
    Eigen::VectorXd x_in = Ebar.projector() * x;
    if ((x - x_in).norm() > 1e-8 * xn) throw DomainError("x must lie in Ebar");
    Eigen::VectorXd th = x / xn;
    if (side == Side::Minus) th = -th;

    ProfileSection S = profile_section(P, Ebar, th);
    if (S.empty) throw UnboundedIntegral("section mass is zero along the ray");
    const int k = S.local.dim();
    std::vector<double> last(k, 0.0);
    last[k - 1] = 1.0;
    Polytope clipped = halfspace_clip(S.local, last, 0.0);
    double mass = volume(clipped);
    if (!(mass > 0.0)) throw UnboundedIntegral("section mass is zero along the ray");
    return xn / mass;
}

PrincipalBases principal_bases(const Subspace& E, const Subspace& F) {
    if (E.ambient_dim() != F.ambient_dim())
        throw DimensionMismatch("subspace ambient dimensions differ");
    if (E.dim() != F.dim()) throw DimensionMismatch("subspace dimensions differ");
    Eigen::MatrixXd G = E.basis().transpose() * F.basis();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeFullU | Eigen::ComputeFullV);
    PrincipalBases out;
    out.U = E.basis() * svd.matrixU();
    out.V = F.basis() * svd.matrixV();
    out.cosines = svd.singularValues();
    out.case1_block = 0;
    for (int i = 0; i < out.cosines.size(); ++i)
        if (out.cosines[i] > 1e-9) ++out.case1_block;
    out.case2 = out.case1_block < E.dim();
    return out;
}

std::vector<Subspace> subspace_chain(const Subspace& E, const Subspace& F) {
    PrincipalBases pb = principal_bases(E, F);
    const int l = E.dim();
    std::vector<Subspace> chain;
    for (int j = 0; j <= l; ++j) {
        Eigen::MatrixXd cols(E.ambient_dim(), l);
        for (int i = 0; i < l; ++i) cols.col(i) = i < j ? pb.V.col(i) : pb.U.col(i);
        chain.emplace_back(cols);
    }
    return chain;
}

std::vector<ChainStep> chain_steps(const Subspace& E, const Subspace& F) {
    PrincipalBases pb = principal_bases(E, F);
    auto chain = subspace_chain(E, F);
    const int l = E.dim();
    std::vector<ChainStep> steps;
    for (int j = 1; j <= l; ++j) {
        ChainStep st(j, chain[j - 1].complement(), chain[j].complement());
        st.u = pb.U.col(j - 1);
        st.v = pb.V.col(j - 1);
        Eigen::MatrixXd Pprev = chain[j - 1].projector();
        Eigen::MatrixXd Pnext = chain[j].projector();
        st.a = st.v - Pprev * st.v;
        st.b = -(st.u - Pnext * st.u);
        const double cos_uv = st.u.dot(st.v);
        st.lambda = std::sqrt(std::max(0.0, 1.0 - cos_uv * cos_uv));
        steps.push_back(std::move(st));
    }
    return steps;
}

LipschitzReport lipschitz_experiment(const Polytope& P, int ell, int trials,
                                     std::uint64_t seed, double C_ell) {
    IsotropicForm iso = to_isotropic(P);
    const Polytope& K = iso.body;
    const int n = K.dim();
    if (ell < 1 || ell >= n) throw DomainError("need 1 <= ell < n");
    if (trials < 1) throw DomainError("need at least one trial");

    LipschitzReport rep;
    rep.ell = ell;
    rep.L_K = iso.L_K;
    rep.C_ell = C_ell;
    rep.trials = trials;
    rep.seed = seed;
    rep.rhs_constant =
        std::exp(5.0 * ell) * std::pow(C_ell, 2 * ell) / std::pow(iso.L_K, ell);
    auto [h_lo, h_hi] = hensley_interval(ell, iso.L_K, C_ell);
    rep.hensley_lo = h_lo;
    rep.hensley_hi = h_hi;

    // H-representation of K, computed once and restricted per subspace
    auto fe = geom::facets_of_points(K.vertices());
    auto section_volume = [&](const Subspace& Eperp) {
        const Eigen::MatrixXd& B = Eperp.basis();
        geom::HRep<double> H;
        for (std::size_t i = 0; i < fe.hrep.size(); ++i) {
            Eigen::VectorXd row = to_eigen(fe.hrep.A[i]);
            Eigen::VectorXd ai = B.transpose() * row;
            H.A.push_back(from_eigen(ai));
            H.b.push_back(fe.hrep.b[i]);
        }
        auto ve = geom::enumerate_vertices(H);
        if (ve.empty) return 0.0;
        return geom::volume_of_points(ve.vertices).value();
    };

    struct Trial {
        double ratio = -1.0;
        double vol_e = 0.0, vol_f = 0.0;
        bool skipped = false;
    };
    std::vector<Trial> results(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
        Rng rng(mix_seed(seed, i));
        Subspace E = random_subspace(n, ell, rng);
        Subspace F = random_subspace(n, ell, rng);
        double d = subspace_distance(E, F);
        Trial t;
        if (d <= 1e-8) {
            t.skipped = true;
        } else {
            t.vol_e = section_volume(E.complement());
            t.vol_f = section_volume(F.complement());
            t.ratio = std::abs(t.vol_e - t.vol_f) / d;
        }
        results[i] = t;
    });

    for (int i = 0; i < trials; ++i) {
        const Trial& t = results[static_cast<std::size_t>(i)];
        if (t.skipped) {
            ++rep.skipped_pairs;
            continue;
        }
        ++rep.evaluated_pairs;
        rep.max_ratio = std::max(rep.max_ratio, t.ratio);
        if (t.ratio > rep.rhs_constant && ell == 1)
            rep.violations.push_back("trial " + std::to_string(i) +
                                     ": ratio exceeds the theorem constant");
        for (double vol : {t.vol_e, t.vol_f}) {
            if (ell == 1 && (vol < h_lo - 1e-9 || vol > h_hi + 1e-9))
                rep.violations.push_back("trial " + std::to_string(i) +
                                         ": section volume outside the Hensley interval");
        }
    }
    return rep;
}

nlohmann::json lipschitz_report_json(const LipschitzReport& r) {
    nlohmann::json j;
    j["ell"] = r.ell;
    j["L_K"] = r.L_K;
    j["C_ell"] = r.C_ell;
    j["rhs_constant"] = r.rhs_constant;
    j["max_ratio"] = r.max_ratio;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["violations"] = r.violations;
    j["margin"] = r.rhs_constant - r.max_ratio;
    j["hensley_lo"] = r.hensley_lo;
    j["hensley_hi"] = r.hensley_hi;
    j["evaluated_pairs"] = r.evaluated_pairs;
    j["skipped_pairs"] = r.skipped_pairs;
    return j;
}

Polytope cube_body(int n) {
    std::vector<std::vector<double>> pts;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = (mask >> i & 1) ? 0.5 : -0.5;
        pts.push_back(std::move(v));
    }
    return Polytope::from_points(n, std::move(pts));
}

Polytope cube_body_rational(int n) {
    std::vector<std::vector<Rational>> pts;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<Rational> v(n);
        for (int i = 0; i < n; ++i) v[i] = (mask >> i & 1) ? Rational(1, 2) : Rational(-1, 2);
        pts.push_back(std::move(v));
    }
    return Polytope::from_rational_points(n, std::move(pts));
}

Polytope simplex_body(int n) {
    Polytope embedded = regular_simplex(n);
    auto ch = geom::make_chart<double>(embedded.vertices());
    return Polytope::from_points(n, ch.local);
}

Polytope random_body(int n, int vertices, std::uint64_t seed) {
    if (vertices < n + 1) throw DomainError("need at least n + 1 vertices");
    Rng rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < vertices; ++i) {
            std::vector<double> v(n);
            for (auto& x : v) x = rng.normal();
            pts.push_back(std::move(v));
        }
        try {
            return Polytope::from_points(n, std::move(pts));
        } catch (const HullFailure&) {
            continue;
        }
    }
    throw HullFailure("failed to sample a full-dimensional body");
}

Subspace random_subspace(int n, int ell, Rng& rng) {
    for (;;) {
        Eigen::MatrixXd g(n, ell);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < ell; ++j) g(i, j) = rng.normal();
        try {
            return Subspace(g);
        } catch (const Error&) {
            continue;
        }
    }
}

}  // namespace sslice
