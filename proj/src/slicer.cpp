#include "simplexslice/slicer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "simplexslice/expdensity.hpp"
#include "simplexslice/geometry.hpp"

namespace sslice {

namespace {

constexpr double kZeroCoeff = 1e-14;
constexpr int kGeometryDimCap = 10;

void check_dim_cap(int dim) {
    if (dim > kGeometryDimCap)
        throw DomainError("geometric operations cap at ambient dimension 10");
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

std::vector<double> from_eigen(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

// H-representation of a full-dimensional float polytope.
geom::FacetEnum<double> float_facets(const Polytope& P) {
    return geom::facets_of_points(P.vertices());
}

// Chart data of a (possibly lower-dimensional) float polytope.
struct FloatChart {
    Eigen::VectorXd origin;
    Eigen::MatrixXd basis;  // ambient x rank, orthonormal
    std::vector<std::vector<double>> local;
    int rank = 0;
};

FloatChart float_chart(const Polytope& P) {
    auto ch = geom::make_chart<double>(P.vertices());
    FloatChart out;
    out.rank = ch.rank;
    const int d = P.dim();
    out.origin = to_eigen(ch.origin);
    out.basis = Eigen::MatrixXd::Zero(d, ch.rank);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < ch.rank; ++j) out.basis(i, j) = ch.basis_cols[i][j];
    out.local = ch.local;
    return out;
}

}  // namespace

std::vector<std::vector<double>> SectionPolytope::vertices_ambient() const {
    std::vector<std::vector<double>> out;
    if (is_empty()) return out;
    const int d = static_cast<int>(origin.size());
    for (const auto& y : vertices_local) {
        std::vector<double> x = origin;
        if (subspace) {
            const Eigen::MatrixXd& B = subspace->basis();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < subspace->dim(); ++j) x[i] += B(i, j) * y[j];
        }
        out.push_back(std::move(x));
    }
    return out;
}

Polytope regular_simplex(int n) {
    if (n < 1) throw DimensionTooSmall("simplex dimension must be >= 1");
    std::vector<std::vector<double>> pts;
    for (int i = 0; i <= n; ++i) {
        std::vector<double> e(n + 1, 0.0);
        e[i] = 1.0;
        pts.push_back(std::move(e));
    }
    return Polytope::from_points(n + 1, std::move(pts), /*allow_lower_dim=*/true);
}

Polytope regular_simplex_rational(int n) {
    if (n < 1) throw DimensionTooSmall("simplex dimension must be >= 1");
    std::vector<std::vector<Rational>> pts;
    for (int i = 0; i <= n; ++i) {
        std::vector<Rational> e(n + 1, Rational(0));
        e[i] = 1;
        pts.push_back(std::move(e));
    }
    return Polytope::from_rational_points(n + 1, std::move(pts), /*allow_lower_dim=*/true);
}

SectionPolytope simplex_section(const Direction& a) {
    const int n = a.n();
    const auto& c = a.coeffs();
    const int dim = n + 1;

    SectionPolytope out;
    out.parent = regular_simplex(n);
    out.origin.assign(dim, 1.0 / dim);

    // ambient vertices: edge intersections between opposite-sign coefficients
    // plus the simplex vertices with zero coefficient
    std::vector<std::vector<double>> ambient;
    for (int j = 0; j < dim; ++j) {
        if (std::abs(c[j]) < kZeroCoeff) {
            std::vector<double> e(dim, 0.0);
            e[j] = 1.0;
            ambient.push_back(std::move(e));
        }
    }
    for (int j = 0; j < dim; ++j) {
        if (c[j] < kZeroCoeff) continue;
        for (int k = 0; k < dim; ++k) {
            if (c[k] > -kZeroCoeff) continue;
            std::vector<double> x(dim, 0.0);
            x[j] = -c[k] / (c[j] - c[k]);
            x[k] = c[j] / (c[j] - c[k]);
            ambient.push_back(std::move(x));
        }
    }
    if (ambient.empty()) throw DegenerateSection("hyperplane misses the simplex interior");

    for (const auto& x : ambient) {
        double dotc = 0.0, sum = 0.0, mn = 0.0;
        for (int i = 0; i < dim; ++i) {
            dotc += c[i] * x[i];
            sum += x[i];
            mn = std::min(mn, x[i]);
        }
        if (std::abs(dotc) > 1e-10 || std::abs(sum - 1.0) > 1e-10 || mn < -1e-12)
            throw DegenerateSection("section vertex left the simplex");
    }

    if (n == 1) {
        // the section is the single midpoint; 0-dimensional chart
        out.vertices_local.push_back({});
        return out;
    }

    // orthonormal chart of {sum x = 0, <a, x> = 0}, orthogonalizing the
    // standard basis in index order for reproducibility
    Eigen::VectorXd ones = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(double(dim)));
    Eigen::VectorXd av = to_eigen(c);
    Eigen::MatrixXd basis(dim, n - 1);
    int got = 0;
    for (int j = 0; j < dim && got < n - 1; ++j) {
        Eigen::VectorXd w = Eigen::VectorXd::Unit(dim, j);
        for (int pass = 0; pass < 2; ++pass) {
            w -= ones.dot(w) * ones;
            w -= av.dot(w) * av;
            for (int k = 0; k < got; ++k) w -= basis.col(k).dot(w) * basis.col(k);
        }
        double nw = w.norm();
        if (nw < 1e-8) continue;
        basis.col(got++) = w / nw;
    }
    if (got != n - 1) throw DegenerateSection("failed to build section chart");
    out.subspace = Subspace(basis);

    Eigen::VectorXd origin = to_eigen(out.origin);
    for (const auto& x : ambient) {
        Eigen::VectorXd loc = basis.transpose() * (to_eigen(x) - origin);
        out.vertices_local.push_back(from_eigen(loc));
    }
    return out;
}

double volume(const Polytope& P) {
    if (P.is_empty()) return 0.0;
    check_dim_cap(P.dim());
    if (P.mode() == NumericMode::ExactRational) {
        auto r = geom::volume_of_points(P.rational_vertices());
        return r.value();
    }
    return geom::volume_of_points(P.vertices()).value();
}

double volume(const SectionPolytope& S) {
    if (S.is_empty()) return 0.0;
    if (S.chart_dim() == 0) return 1.0;
    check_dim_cap(S.chart_dim());
    return geom::volume_of_points(S.vertices_local).value();
}

Rational volume_exact(const Polytope& P) {
    if (P.is_empty()) return Rational(0);
    check_dim_cap(P.dim());
    const auto& pts = P.rational_vertices();
    if (geom::affine_rank(pts) != P.dim())
        throw DomainError("exact volume requires a full-dimensional polytope");
    auto fe = geom::facets_of_points(pts);
    return geom::volume_fulldim(pts, fe.facet_vertices);
}

double section_volume_via_density(const Direction& a) {
    const int n = a.n();
    double factor = std::sqrt(double(n + 1));
    for (int i = 2; i <= n - 1; ++i) factor /= i;
    return factor * density_at_zero(a);
}

SectionPolytope polytope_section(const Polytope& P, const Subspace& S,
                                 const std::vector<double>& offset) {
    check_dim_cap(P.dim());
    if (S.ambient_dim() != P.dim())
        throw DimensionMismatch("cutting subspace has wrong ambient dimension");
    if (static_cast<int>(offset.size()) != P.dim())
        throw DimensionMismatch("offset has wrong dimension");

    SectionPolytope out;
    out.parent = P;
    out.subspace = S;
    out.origin = offset;
    if (P.is_empty()) return out;

    const int d = P.dim();
    const int l = S.dim();
    const Eigen::MatrixXd& B = S.basis();
    const Eigen::VectorXd off = to_eigen(offset);

    FloatChart ch = float_chart(P);
    geom::HRep<double> restricted;

    if (ch.rank == d) {
        auto fe = float_facets(P);
        for (std::size_t i = 0; i < fe.hrep.size(); ++i) {
            Eigen::VectorXd row = to_eigen(fe.hrep.A[i]);
            Eigen::VectorXd ai = B.transpose() * row;
            restricted.A.push_back(from_eigen(ai));
            restricted.b.push_back(fe.hrep.b[i] - row.dot(off));
        }
    } else {
        // lower-dimensional parent: the flat must be reduced to the part lying
        // in the affine hull of P.  Equality constraints: Q^T (x - o) = 0 with
        // Q an orthonormal basis of the hull complement.
        Eigen::MatrixXd full(d, d);
        full.leftCols(ch.rank) = ch.basis;
        Eigen::MatrixXd Q(d, d - ch.rank);
        int got = 0;
        for (int j = 0; j < d && got < d - ch.rank; ++j) {
            Eigen::VectorXd w = Eigen::VectorXd::Unit(d, j);
            for (int pass = 0; pass < 2; ++pass) {
                for (int k = 0; k < ch.rank; ++k) w -= ch.basis.col(k).dot(w) * ch.basis.col(k);
                for (int k = 0; k < got; ++k) w -= Q.col(k).dot(w) * Q.col(k);
            }
            double nw = w.norm();
            if (nw < 1e-8) continue;
            Q.col(got++) = w / nw;
        }
        if (got != d - ch.rank) throw HullFailure("hull complement construction failed");

        // solve Q^T (off + B z - o) = 0 for z
        Eigen::MatrixXd C = Q.transpose() * B;              // (d-rank) x l
        Eigen::VectorXd rhs = Q.transpose() * (ch.origin - off);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
        const double sthr = 1e-10 * std::max(1.0, smax);
        int rankC = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > sthr) ++rankC;
        // minimum-norm solution restricted to the numerically nonzero block
        Eigen::VectorXd z0 = Eigen::VectorXd::Zero(l);
        {
            Eigen::VectorXd proj = svd.matrixU().transpose() * rhs;
            for (int i = 0; i < rankC; ++i)
                z0 += proj[i] / svd.singularValues()[i] * svd.matrixV().col(i);
        }
        if ((C * z0 - rhs).norm() > 1e-9) return out;  // flat misses the hull: empty
        Eigen::MatrixXd N = svd.matrixV().rightCols(l - rankC);  // nullspace of C
        if (N.cols() == 0) {
            // unique point: inside P?
            Eigen::VectorXd x = off + B * z0;
            Eigen::VectorXd y = ch.basis.transpose() * (x - ch.origin);
            if (ch.rank == 0) {
                out.vertices_local.push_back(from_eigen(z0));
                return out;
            }
            auto fe = geom::facets_of_points(ch.local);
            for (std::size_t i = 0; i < fe.hrep.size(); ++i) {
                double s = geom::dot(fe.hrep.A[i], from_eigen(y)) - fe.hrep.b[i];
                if (s > 1e-9) return out;  // outside: empty
            }
            out.vertices_local.push_back(from_eigen(z0));
            return out;
        }
        // chart coordinates of the flat point: y(s) = y0 + M s
        Eigen::VectorXd y0 = ch.basis.transpose() * (off + B * z0 - ch.origin);
        Eigen::MatrixXd M = ch.basis.transpose() * B * N;
        auto fe = geom::facets_of_points(ch.local);
        geom::HRep<double> sub;
        for (std::size_t i = 0; i < fe.hrep.size(); ++i) {
            Eigen::VectorXd row = to_eigen(fe.hrep.A[i]);
            Eigen::VectorXd ai = M.transpose() * row;
            sub.A.push_back(from_eigen(ai));
            sub.b.push_back(fe.hrep.b[i] - row.dot(y0));
        }
        auto ve = geom::enumerate_vertices(sub);
        if (ve.empty) return out;
        for (const auto& sv : ve.vertices) {
            Eigen::VectorXd s = to_eigen(sv);
            Eigen::VectorXd z = z0 + N * s;
            out.vertices_local.push_back(from_eigen(z));
        }
        return out;
    }

    auto ve = geom::enumerate_vertices(restricted);
    if (ve.empty) return out;
    out.vertices_local = ve.vertices;
    // guard against stray numeric vertices outside the parent
    (void)l;
    return out;
}

Polytope halfspace_clip(const Polytope& P, const std::vector<double>& normal, double level) {
    if (P.is_empty()) return Polytope::empty(P.dim());
    check_dim_cap(P.dim());
    if (static_cast<int>(normal.size()) != P.dim())
        throw DimensionMismatch("normal has wrong dimension");
    const int d = P.dim();
    FloatChart ch = float_chart(P);
    Eigen::VectorXd nvec = to_eigen(normal);

    if (ch.rank == d) {
        auto fe = float_facets(P);
        geom::HRep<double> H = fe.hrep;
        std::vector<double> row(d);
        for (int i = 0; i < d; ++i) row[i] = -normal[i];
        H.A.push_back(row);
        H.b.push_back(-level);
        auto ve = geom::enumerate_vertices(H);
        if (ve.empty) return Polytope::empty(d);
        return Polytope::from_points(d, ve.vertices, /*allow_lower_dim=*/true);
    }

    // lower-dimensional polytope: clip inside its chart
    Eigen::VectorXd nloc = ch.basis.transpose() * nvec;
    const double base = nvec.dot(ch.origin);
    if (nloc.norm() <= 1e-12 * std::max(1.0, nvec.norm())) {
        // hyperplane parallel to the hull: all or nothing
        if (base >= level - 1e-12) return P;
        return Polytope::empty(d);
    }
    if (ch.rank == 0) {
        if (base >= level - 1e-12) return P;
        return Polytope::empty(d);
    }
    geom::HRep<double> H;
    if (ch.rank >= 1 && ch.local.size() > static_cast<std::size_t>(ch.rank)) {
        auto fe = geom::facets_of_points(ch.local);
        H = fe.hrep;
    } else if (ch.rank == 1) {
        // segment: bounds along the single coordinate
        double lo = ch.local[0][0], hi = lo;
        for (const auto& y : ch.local) {
            lo = std::min(lo, y[0]);
            hi = std::max(hi, y[0]);
        }
        H.A = {{1.0}, {-1.0}};
        H.b = {hi, -lo};
    } else {
        auto fe = geom::facets_of_points(ch.local);
        H = fe.hrep;
    }
    std::vector<double> row(ch.rank);
    for (int i = 0; i < ch.rank; ++i) row[i] = -nloc[i];
    H.A.push_back(row);
    H.b.push_back(-(level - base));
    auto ve = geom::enumerate_vertices(H);
    if (ve.empty) return Polytope::empty(d);
    std::vector<std::vector<double>> ambient;
    for (const auto& y : ve.vertices) {
        Eigen::VectorXd x = ch.origin + ch.basis * to_eigen(y);
        ambient.push_back(from_eigen(x));
    }
    return Polytope::from_points(d, ambient, /*allow_lower_dim=*/true);
}

ExactSection polytope_section_exact(const Polytope& P,
                                    const std::vector<std::vector<Rational>>& basis_cols,
                                    const std::vector<Rational>& offset) {
    const auto& pts = P.rational_vertices();
    const int d = P.dim();
    if (geom::affine_rank(pts) != d)
        throw DomainError("exact sections require a full-dimensional polytope");
    if (static_cast<int>(basis_cols.size()) != d || static_cast<int>(offset.size()) != d)
        throw DimensionMismatch("flat data has wrong ambient dimension");
    const int l = static_cast<int>(basis_cols[0].size());

    ExactSection out;
    out.basis_cols = basis_cols;
    out.offset = offset;
    // gram determinant of the chart basis
    std::vector<std::vector<Rational>> gram(l, std::vector<Rational>(l, Rational(0)));
    for (int a = 0; a < l; ++a)
        for (int b = 0; b < l; ++b) {
            Rational acc(0);
            for (int i = 0; i < d; ++i) acc += basis_cols[i][a] * basis_cols[i][b];
            gram[a][b] = acc;
        }
    out.gram_det = geom::abs_det(gram);
    if (out.gram_det == 0) throw DimensionMismatch("chart basis is rank-deficient");

    auto fe = geom::facets_of_points(pts);
    geom::HRep<Rational> H;
    for (std::size_t i = 0; i < fe.hrep.size(); ++i) {
        std::vector<Rational> ai(l, Rational(0));
        Rational shift(0);
        for (int k = 0; k < d; ++k) shift += fe.hrep.A[i][k] * offset[k];
        for (int j = 0; j < l; ++j) {
            Rational acc(0);
            for (int k = 0; k < d; ++k) acc += fe.hrep.A[i][k] * basis_cols[k][j];
            ai[j] = acc;
        }
        H.A.push_back(std::move(ai));
        H.b.push_back(fe.hrep.b[i] - shift);
    }
    auto ve = geom::enumerate_vertices(H);
    if (ve.empty) {
        out.empty = true;
        return out;
    }
    out.vertices_local = ve.vertices;
    return out;
}

Rational exact_section_chart_volume(const ExactSection& S) {
    if (S.empty) return Rational(0);
    const int l = static_cast<int>(S.basis_cols[0].size());
    if (geom::affine_rank(S.vertices_local) != l)
        throw DomainError("section is lower-dimensional inside the flat");
    auto fe = geom::facets_of_points(S.vertices_local);
    return geom::volume_fulldim(S.vertices_local, fe.facet_vertices);
}

double exact_section_volume(const ExactSection& S) {
    if (S.empty) return 0.0;
    return to_double(exact_section_chart_volume(S)) * std::sqrt(to_double(S.gram_det));
}

Polytope polytope_from_json(const nlohmann::json& j) {
    if (!j.contains("dim") || !j.contains("vertices"))
        throw DomainError("polytope JSON needs 'dim' and 'vertices'");
    const int dim = j.at("dim").get<int>();
    std::string mode = j.value("mode", "float");
    bool lower = j.value("allow_lower_dim", false);
    if (mode == "rational") {
        std::vector<std::vector<Rational>> pts;
        for (const auto& row : j.at("vertices")) {
            std::vector<Rational> v;
            for (const auto& x : row) {
                if (x.is_string())
                    v.push_back(rational_from_string(x.get<std::string>()));
                else if (x.is_number_integer())
                    v.push_back(Rational(x.get<long long>()));
                else
                    throw DomainError("rational vertices must be 'p/q' strings or integers");
            }
            pts.push_back(std::move(v));
        }
        return Polytope::from_rational_points(dim, std::move(pts), lower);
    }
    if (mode != "float") throw DomainError("mode must be 'float' or 'rational'");
    std::vector<std::vector<double>> pts;
    for (const auto& row : j.at("vertices")) {
        std::vector<double> v;
        for (const auto& x : row) v.push_back(x.get<double>());
        pts.push_back(std::move(v));
    }
    return Polytope::from_points(dim, std::move(pts), lower);
}

nlohmann::json polytope_to_json(const Polytope& P) {
    nlohmann::json j;
    j["dim"] = P.dim();
    if (P.mode() == NumericMode::ExactRational) {
        j["mode"] = "rational";
        nlohmann::json verts = nlohmann::json::array();
        for (const auto& v : P.rational_vertices()) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& x : v) row.push_back(rational_to_string(x));
            verts.push_back(row);
        }
        j["vertices"] = verts;
    } else {
        j["mode"] = "float";
        j["vertices"] = P.vertices();
    }
    if (P.lower_dim_allowed()) j["allow_lower_dim"] = true;
    return j;
}

}  // namespace sslice
