#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "simplexslice/core.hpp"

namespace sslice {

// Webb's sharp bound: p_a(0) <= 1/sqrt(2).
double webb_bound();

// Psi(x) = Gamma(1/(2x) - 1/2) / (sqrt(2 pi x) Gamma(1/(2x))) for 0 < x < 1.
double psi(double x);

struct PsiTable {
    std::vector<std::pair<double, double>> grid;  // (x, Psi(x)), sorted by x
};

// Evaluates Psi on the given abscissas (re-sorted, deduplicated) and checks
// the table invariants: strict monotonicity, Psi(1/2) = 1 within 1e-12.
PsiTable make_psi_table(std::vector<double> xs);

// (1/sqrt 2) prod_j Psi(a_j^2)^{a_j^2}; zero coefficients contribute factor 1.
double fourier_bound(const Direction& a);

// 1/(2 max(a_1, -a_{n+1}))
double logconcavity_bound(const Direction& a);

// certified deficit lower bound from the stability theorem
double stability_deficit_bound(const Direction& a);
double stability_deficit_bound_from_delta(double delta_value);

// 1/sqrt(2) - 2e-5 sqrt(delta(a)), valid for every direction
double global_linear_bound(const Direction& a);

// Replays the proof's case analysis for a, recording every intermediate
// inequality of the branch taken. Throws NotApplicable for n = 1.
CaseTrace classify_case(const Direction& a);

struct VerifyOptions {
    double quad_tol = 1e-10;
    std::int64_t mc_samples = 0;  // 0 = skip the Monte Carlo evaluator
    std::uint64_t seed = 0;
    double dominance_tol = 1e-10;   // fourier / log-concavity slack
    double stability_tol = 1e-12;   // webb / stability / global-linear slack
    double oracle_agreement = 1e-8;
};

// All three density evaluations, all bounds, deficit, per-bound verdicts.
BoundReport verify_direction(const Direction& a, const VerifyOptions& opts = {});

struct SearchResult {
    Direction best;
    double p_star = 0.0;
};

// Projected gradient ascent of p_a(0) over {|a| = 1, sum a = 0} with random
// restarts; deterministic for a fixed seed.
SearchResult search_extremiser(int n, int restarts, std::uint64_t seed);

}  // namespace sslice
