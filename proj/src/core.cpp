#include "simplexslice/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace sslice {

namespace {

constexpr double kUnitTol = 1e-12;

void validate_direction(const std::vector<double>& c) {
    double norm2 = 0.0, sum = 0.0;
    for (double x : c) {
        norm2 += x * x;
        sum += x;
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > kUnitTol)
        throw DomainError("direction is not unit norm");
    if (std::abs(sum) > kUnitTol) throw DomainError("direction does not sum to zero");
    if (!std::is_sorted(c.begin(), c.end(), std::greater<double>()))
        throw DomainError("direction coefficients not sorted non-increasing");
    if (!(c.front() > 0.0) || !(c.back() < 0.0))
        throw DomainError("direction needs a positive and a negative coefficient");
}

}  // namespace

Direction Direction::normalized(std::vector<double> raw) {
    if (raw.size() < 2) throw DimensionTooSmall("need at least 2 coefficients (n >= 1)");
    const int n = static_cast<int>(raw.size()) - 1;
    double inmag = 0.0;
    for (double x : raw) inmag = std::max(inmag, std::abs(x));
    if (inmag == 0.0) throw ZeroAfterProjection("zero input vector");
    double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / raw.size();
    double norm2 = 0.0;
    for (double& x : raw) {
        x -= mean;
        norm2 += x * x;
    }
    double norm = std::sqrt(norm2);
    if (norm <= 1e-13 * inmag)
        throw ZeroAfterProjection("input is parallel to the all-ones vector");
    for (double& x : raw) x /= norm;
    std::sort(raw.begin(), raw.end(), std::greater<double>());
    // one renormalization pass keeps the unit invariant tight after rounding
    norm2 = 0.0;
    for (double x : raw) norm2 += x * x;
    norm = std::sqrt(norm2);
    for (double& x : raw) x /= norm;
    validate_direction(raw);
    return Direction(n, std::move(raw));
}

Direction Direction::from_unit(std::vector<double> coeffs) {
    if (coeffs.size() < 2) throw DimensionTooSmall("need at least 2 coefficients (n >= 1)");
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::sort(coeffs.begin(), coeffs.end(), std::greater<double>());
    validate_direction(coeffs);
    return Direction(n, std::move(coeffs));
}

Direction Direction::negated() const {
    std::vector<double> c(coeffs_);
    for (double& x : c) x = -x;
    std::sort(c.begin(), c.end(), std::greater<double>());
    return Direction(n_, std::move(c));
}

double delta(const Direction& a) {
    const auto& c = a.coeffs();
    const double r = 1.0 / std::sqrt(2.0);
    double d = 0.0;
    d += (c.front() - r) * (c.front() - r);
    for (std::size_t j = 1; j + 1 < c.size(); ++j) d += c[j] * c[j];
    d += (c.back() + r) * (c.back() + r);
    return d;
}

Polytope Polytope::from_points(int dim, std::vector<std::vector<double>> pts,
                               bool allow_lower_dim) {
    if (dim < 1) throw DimensionTooSmall("polytope dimension must be >= 1");
    Polytope p;
    p.dim_ = dim;
    p.mode_ = NumericMode::Float64;
    p.allow_lower_dim_ = allow_lower_dim;
    double scale = 1.0;
    for (const auto& v : pts) {
        if (static_cast<int>(v.size()) != dim)
            throw DimensionMismatch("vertex coordinate count != dim");
        for (double x : v) scale = std::max(scale, std::abs(x));
    }
    // dedup within 1e-12 * scale
    for (const auto& v : pts) {
        bool dup = false;
        for (const auto& w : p.vertices_) {
            double m = 0.0;
            for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(v[i] - w[i]));
            if (m <= 1e-12 * scale) {
                dup = true;
                break;
            }
        }
        if (!dup) p.vertices_.push_back(v);
    }
    if (!allow_lower_dim && !p.vertices_.empty()) {
        // affine rank check via Gaussian elimination on difference vectors
        std::vector<std::vector<double>> diffs;
        for (std::size_t i = 1; i < p.vertices_.size(); ++i) {
            std::vector<double> d(dim);
            for (int k = 0; k < dim; ++k) d[k] = p.vertices_[i][k] - p.vertices_[0][k];
            diffs.push_back(std::move(d));
        }
        int rank = 0;
        std::vector<bool> used(diffs.size(), false);
        for (int col = 0; col < dim; ++col) {
            int piv = -1;
            double best = 1e-9 * scale;
            for (std::size_t r = 0; r < diffs.size(); ++r)
                if (!used[r] && std::abs(diffs[r][col]) > best) {
                    best = std::abs(diffs[r][col]);
                    piv = static_cast<int>(r);
                }
            if (piv < 0) continue;
            used[piv] = true;
            ++rank;
            for (std::size_t r = 0; r < diffs.size(); ++r) {
                if (static_cast<int>(r) == piv) continue;
                double f = diffs[r][col] / diffs[piv][col];
                for (int k = 0; k < dim; ++k) diffs[r][k] -= f * diffs[piv][k];
            }
        }
        if (rank < dim)
            throw HullFailure("vertex set is not full-dimensional (affine rank " +
                              std::to_string(rank) + " < " + std::to_string(dim) + ")");
    }
    return p;
}

Polytope Polytope::from_rational_points(int dim, std::vector<std::vector<Rational>> pts,
                                        bool allow_lower_dim) {
    if (dim < 1) throw DimensionTooSmall("polytope dimension must be >= 1");
    Polytope p;
    p.dim_ = dim;
    p.mode_ = NumericMode::ExactRational;
    p.allow_lower_dim_ = allow_lower_dim;
    for (const auto& v : pts) {
        if (static_cast<int>(v.size()) != dim)
            throw DimensionMismatch("vertex coordinate count != dim");
        bool dup = false;
        for (const auto& w : p.rational_vertices_)
            if (v == w) {
                dup = true;
                break;
            }
        if (!dup) p.rational_vertices_.push_back(v);
    }
    for (const auto& v : p.rational_vertices_) {
        std::vector<double> vf(dim);
        for (int i = 0; i < dim; ++i) vf[i] = to_double(v[i]);
        p.vertices_.push_back(std::move(vf));
    }
    if (!allow_lower_dim && !p.rational_vertices_.empty()) {
        auto diffs = p.rational_vertices_;
        std::size_t m = diffs.size();
        for (std::size_t i = 1; i < m; ++i)
            for (int k = 0; k < dim; ++k) diffs[i][k] -= diffs[0][k];
        int rank = 0;
        std::vector<bool> used(m, false);
        used[0] = true;
        for (int col = 0; col < dim; ++col) {
            std::size_t piv = 0;
            bool found = false;
            for (std::size_t r = 1; r < m; ++r)
                if (!used[r] && diffs[r][col] != 0) {
                    piv = r;
                    found = true;
                    break;
                }
            if (!found) continue;
            used[piv] = true;
            ++rank;
            for (std::size_t r = 1; r < m; ++r) {
                if (r == piv || diffs[r][col] == 0) continue;
                Rational f = diffs[r][col] / diffs[piv][col];
                for (int k = 0; k < dim; ++k) diffs[r][k] -= f * diffs[piv][k];
            }
        }
        if (rank < dim) throw HullFailure("rational vertex set is not full-dimensional");
    }
    return p;
}

Polytope Polytope::empty(int dim, NumericMode mode) {
    Polytope p;
    p.dim_ = dim;
    p.mode_ = mode;
    p.allow_lower_dim_ = true;
    return p;
}

const std::vector<std::vector<Rational>>& Polytope::rational_vertices() const {
    if (mode_ != NumericMode::ExactRational)
        throw DomainError("polytope is not in exact-rational mode");
    return rational_vertices_;
}

Subspace::Subspace(int ambient_dim, const std::vector<std::vector<double>>& basis_vectors) {
    if (basis_vectors.empty()) throw DimensionTooSmall("subspace needs at least one basis vector");
    Eigen::MatrixXd b(ambient_dim, static_cast<int>(basis_vectors.size()));
    for (std::size_t j = 0; j < basis_vectors.size(); ++j) {
        if (static_cast<int>(basis_vectors[j].size()) != ambient_dim)
            throw DimensionMismatch("basis vector length != ambient dim");
        for (int i = 0; i < ambient_dim; ++i) b(i, static_cast<int>(j)) = basis_vectors[j][i];
    }
    *this = Subspace(std::move(b));
}

Subspace::Subspace(Eigen::MatrixXd basis_columns) {
    const int n = static_cast<int>(basis_columns.rows());
    const int l = static_cast<int>(basis_columns.cols());
    if (l < 1 || l >= n) throw DimensionMismatch("subspace dimension must satisfy 1 <= l < n");
    // modified Gram-Schmidt with a second pass
    Eigen::MatrixXd q(n, l);
    int col = 0;
    for (int j = 0; j < l; ++j) {
        Eigen::VectorXd w = basis_columns.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < col; ++k) w -= q.col(k).dot(w) * q.col(k);
        double nw = w.norm();
        if (nw < 1e-10) throw DimensionMismatch("subspace basis is rank-deficient");
        q.col(col++) = w / nw;
    }
    basis_ = q;
}

Subspace Subspace::complement() const {
    const int n = ambient_dim();
    const int l = dim();
    Eigen::MatrixXd full(n, n);
    full.leftCols(l) = basis_;
    // complete with standard basis vectors, then orthonormalize the tail
    Eigen::MatrixXd comp(n, n - l);
    int got = 0;
    for (int j = 0; j < n && got < n - l; ++j) {
        Eigen::VectorXd w = Eigen::VectorXd::Unit(n, j);
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < l; ++k) w -= basis_.col(k).dot(w) * basis_.col(k);
            for (int k = 0; k < got; ++k) w -= comp.col(k).dot(w) * comp.col(k);
        }
        double nw = w.norm();
        if (nw < 1e-8) continue;
        comp.col(got++) = w / nw;
    }
    if (got != n - l) throw DimensionMismatch("failed to complete orthonormal complement");
    return Subspace(comp);
}

double subspace_distance(const Subspace& E, const Subspace& F) {
    if (E.ambient_dim() != F.ambient_dim())
        throw DimensionMismatch("subspace ambient dimensions differ");
    if (E.dim() != F.dim()) throw DimensionMismatch("subspace dimensions differ");
    return (E.projector() - F.projector()).norm();
}

}  // namespace sslice
