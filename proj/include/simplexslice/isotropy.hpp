#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "simplexslice/core.hpp"
#include "simplexslice/rng.hpp"
#include "simplexslice/slicer.hpp"

namespace sslice {

struct PolytopeMoments {
    double volume = 0.0;
    Eigen::VectorXd barycentre;
    Eigen::MatrixXd covariance;  // central second moment of the uniform measure
};

// Exact moments by triangulation and closed-form simplex formulas. For
// lower-dimensional input the volume is relative to the affine hull.
PolytopeMoments polytope_moments(const Polytope& P);

struct RationalMoments {
    Rational chart_volume;  // ambient volume when full-dimensional (gram_det 1)
    Rational gram_det;
    std::vector<Rational> barycentre;
    std::vector<std::vector<Rational>> covariance;
};

RationalMoments polytope_moments_exact(const Polytope& P);

// Body in isotropic position: volume 1, barycentre 0, covariance L_K^2 I.
struct IsotropicForm {
    Polytope body = Polytope::empty(1);
    Eigen::MatrixXd map;     // y = map x + shift
    Eigen::VectorXd shift;
    double L_K = 0.0;
    double C_ell = 1.0;
};

IsotropicForm to_isotropic(const Polytope& P);

// Bounds for vol_{n-l}(K cap E) of an isotropic body (l-th powers of the
// normalized Hensley bounds).
std::pair<double, double> hensley_interval(int ell, double L_K, double C_ell);

// One-sided to total mass ratio of the section profile along theta; at least
// e^{-l} for centred bodies, l = dim(Ebar).
double grunbaum_ratio(const Polytope& P, const Subspace& Ebar,
                      const Eigen::VectorXd& theta);

enum class Side { Plus, Minus };

// Busemann functional N(x) = 1 / int_0^inf f(t x) dt on Ebar; positively
// homogeneous and subadditive.
double busemann_N(const Polytope& P, const Subspace& Ebar, const Eigen::VectorXd& x,
                  Side side);

struct PrincipalBases {
    Eigen::MatrixXd U;         // columns u_j (basis of E)
    Eigen::MatrixXd V;         // columns v_j (basis of F)
    Eigen::VectorXd cosines;   // <u_j, v_j>, non-increasing
    int case1_block = 0;       // number of nonzero cosines
    bool case2 = false;        // F-perp cap E is nontrivial
};

PrincipalBases principal_bases(const Subspace& E, const Subspace& F);

struct ChainStep {
    ChainStep(int idx, Subspace prev_perp, Subspace next_perp)
        : index(idx), E_prev_perp(std::move(prev_perp)), E_next_perp(std::move(next_perp)) {}

    int index;
    Subspace E_prev_perp;
    Subspace E_next_perp;
    Eigen::VectorXd a;
    Eigen::VectorXd b;
    double lambda = 0.0;
    Eigen::VectorXd u;
    Eigen::VectorXd v;
    double step_volume_gap = std::numeric_limits<double>::quiet_NaN();
};

// E = E_0, ..., E_l = F, swapping one principal basis vector at a time.
std::vector<Subspace> subspace_chain(const Subspace& E, const Subspace& F);
std::vector<ChainStep> chain_steps(const Subspace& E, const Subspace& F);

struct LipschitzReport {
    int ell = 0;
    double L_K = 0.0;
    double C_ell = 1.0;
    double rhs_constant = 0.0;
    double max_ratio = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> violations;
    double hensley_lo = 0.0;
    double hensley_hi = 0.0;
    int evaluated_pairs = 0;
    int skipped_pairs = 0;  // d(E, F) below the degeneracy cutoff
};

LipschitzReport lipschitz_experiment(const Polytope& P, int ell, int trials,
                                     std::uint64_t seed, double C_ell = 1.0);
nlohmann::json lipschitz_report_json(const LipschitzReport& r);

// built-in bodies (full-dimensional)
Polytope cube_body(int n);
Polytope cube_body_rational(int n);
Polytope simplex_body(int n);  // regular simplex mapped to R^n chart coordinates
Polytope random_body(int n, int vertices, std::uint64_t seed);

Subspace random_subspace(int n, int ell, Rng& rng);

}  // namespace sslice
