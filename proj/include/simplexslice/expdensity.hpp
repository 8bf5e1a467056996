#pragma once

#include <cstdint>
#include <vector>

#include "simplexslice/core.hpp"

namespace sslice {

// One summand of a signed-mixture exponential density: on the positive axis
// coeff * x^degree * exp(-x/scale), on the negative axis
// coeff * (-x)^degree * exp(x/scale).
struct HypoexpTerm {
    double scale = 1.0;  // > 0
    int side = +1;       // +1 or -1
    int degree = 0;      // polynomial power (multiplicity - 1)
    double coeff = 0.0;
};

// Exact closed-form density of sum_j w_j X_j (X_j i.i.d. standard exponential)
// built by iterated convolution; repeated weights handled confluently.
class HypoexpDensity {
  public:
    static HypoexpDensity from_weights(const std::vector<double>& weights);
    static HypoexpDensity from_direction(const Direction& a);

    double operator()(double x) const;
    double at_zero_plus() const;
    double at_zero_minus() const;
    double at_zero() const;
    double total_integral() const;
    const std::vector<HypoexpTerm>& terms() const { return terms_; }

  private:
    std::vector<HypoexpTerm> terms_;
};

// density of aX - bY at x, for a, b > 0
double g_ab(double x, double a, double b);

// p_a(0) by partial fractions of the characteristic product (distinct
// coefficients) or the confluent convolution representation (ties).
double density_at_zero(const Direction& a);

// p_a(0) = (1/2pi) int Re prod (1 - i a_j t)^{-1} dt by adaptive quadrature
// with absolute error <= tol.
double density_at_zero_quadrature(const Direction& a, double tol = 1e-10);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

// Kernel estimate of p_a(0) from seeded draws; reproducible for fixed seed.
McEstimate density_at_zero_montecarlo(const Direction& a, std::int64_t samples,
                                      std::uint64_t seed);

// sup-bound 1/(e min(a,b)) for the density of aX + bY
double minmax_density_bound(double a, double b);

// sharp maximum of int f * g_{a,b} over densities with ||f||_inf <= C
double capped_overlap_bound(double a, double b, double C);

// sharp L-infinity bound variance^{-1/2} for log-concave densities
double variance_linf_bound(double variance);

}  // namespace sslice
