#pragma once

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "simplexslice/errors.hpp"
#include "simplexslice/rational.hpp"

namespace sslice {

// Unit, sum-zero coefficient vector a in R^{n+1}, stored sorted non-increasing.
// Defines the central hyperplane a-perp cutting the regular simplex.
class Direction {
  public:
    // Projects raw onto {sum x = 0}, scales to unit norm, sorts descending.
    static Direction normalized(std::vector<double> raw);

    // Accepts an already unit, sum-zero vector (any order); sorts and validates.
    static Direction from_unit(std::vector<double> coeffs);

    int n() const { return n_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double u() const { return coeffs_.front(); }        // a_1
    double v() const { return -coeffs_.back(); }        // -a_{n+1}
    Direction negated() const;                          // -a, re-sorted

  private:
    Direction(int n, std::vector<double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {}
    int n_ = 0;
    std::vector<double> coeffs_;
};

// delta(a) = |a - (e_1 - e_{n+1})/sqrt(2)|^2, squared distance to the nearest
// two-coordinate extremiser.
double delta(const Direction& a);

enum class NumericMode { Float64, ExactRational };

// V-representation convex body. Rational mode keeps exact coordinates
// alongside the float mirror used by float-mode operations.
class Polytope {
  public:
    static Polytope from_points(int dim, std::vector<std::vector<double>> pts,
                                bool allow_lower_dim = false);
    static Polytope from_rational_points(int dim, std::vector<std::vector<Rational>> pts,
                                         bool allow_lower_dim = false);
    static Polytope empty(int dim, NumericMode mode = NumericMode::Float64);

    int dim() const { return dim_; }
    NumericMode mode() const { return mode_; }
    bool is_empty() const { return vertices_.empty(); }
    bool lower_dim_allowed() const { return allow_lower_dim_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    const std::vector<std::vector<double>>& vertices() const { return vertices_; }
    const std::vector<std::vector<Rational>>& rational_vertices() const;

  private:
    Polytope() = default;
    int dim_ = 0;
    NumericMode mode_ = NumericMode::Float64;
    bool allow_lower_dim_ = false;
    std::vector<std::vector<double>> vertices_;
    std::vector<std::vector<Rational>> rational_vertices_;
};

// An l-dimensional linear subspace of R^n held as an orthonormal basis
// (columns). Bases are re-orthonormalized on construction.
class Subspace {
  public:
    Subspace(int ambient_dim, const std::vector<std::vector<double>>& basis_vectors);
    explicit Subspace(Eigen::MatrixXd basis_columns);

    int ambient_dim() const { return static_cast<int>(basis_.rows()); }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Eigen::MatrixXd& basis() const { return basis_; }
    Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

    // Orthonormal basis of the orthogonal complement.
    Subspace complement() const;

  private:
    Eigen::MatrixXd basis_;
};

// ||P_E - P_F||_HS
double subspace_distance(const Subspace& E, const Subspace& F);

struct InequalityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

enum class Regime { Near, Far };

// Classified proof regime of a direction with the intermediate quantities
// and inequality verdicts of the branch taken.
struct CaseTrace {
    double delta = 0.0;
    double u = 0.0;
    double v = 0.0;
    double sigma = 0.0;
    double s = 0.0;
    double t = 0.0;
    double m = 0.0;
    double eta = 5e-5;
    Regime regime = Regime::Near;
    std::string case_label;
    std::vector<InequalityCheck> checks;

    bool all_hold() const {
        for (const auto& c : checks)
            if (!c.holds) return false;
        return true;
    }
};

// p_a(0) from each evaluator plus every upper bound and deficit certificate.
struct BoundReport {
    explicit BoundReport(Direction d) : direction(std::move(d)) {}

    Direction direction;
    double p0_exact = 0.0;
    double p0_quadrature = 0.0;
    double p0_montecarlo = std::numeric_limits<double>::quiet_NaN();
    double mc_stderr = std::numeric_limits<double>::quiet_NaN();
    double webb = 0.0;
    double fourier = 0.0;
    double logconcavity = 0.0;
    double stability_bound = 0.0;  // certified deficit lower bound
    double global_linear = 0.0;
    double deficit = 0.0;          // 1/sqrt(2) - p0_exact

    struct Verdict {
        std::string bound;
        double slack = 0.0;  // how far the inequality holds; negative = violation
        bool pass = false;
    };
    std::vector<Verdict> verdicts;

    bool all_pass() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

}  // namespace sslice
