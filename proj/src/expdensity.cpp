#include "simplexslice/expdensity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>

#include "simplexslice/errors.hpp"
#include "simplexslice/rng.hpp"

namespace sslice {

namespace {

constexpr double kDropTol = 1e-14;       // weights below this are exact zeros
constexpr double kClusterTol = 1e-12;    // weights closer than this are a tie
constexpr double kConditionTol = 1e-9;   // distinct weights closer than this: refuse

// Sorted descending list of distinct weights with multiplicities. Throws when
// two distinct values are too close for stable float evaluation.
std::vector<std::pair<double, int>> cluster_weights(const std::vector<double>& in) {
    std::vector<double> w;
    for (double x : in)
        if (std::abs(x) >= kDropTol) w.push_back(x);
    std::sort(w.begin(), w.end(), std::greater<double>());
    std::vector<std::pair<double, int>> out;
    std::size_t i = 0;
    while (i < w.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < w.size() && std::abs(w[i] - w[j]) <= kClusterTol) {
            sum += w[j];
            ++j;
        }
        out.emplace_back(sum / static_cast<double>(j - i), static_cast<int>(j - i));
        i = j;
    }
    for (std::size_t k = 0; k + 1 < out.size(); ++k) {
        double gap = out[k].first - out[k + 1].first;
        if (gap < kConditionTol)
            throw NumericallyIllConditioned(
                "two distinct coefficients differ by less than 1e-9; "
                "use the quadrature evaluator");
    }
    return out;
}

double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

}  // namespace

HypoexpDensity HypoexpDensity::from_weights(const std::vector<double>& weights) {
    auto clusters = cluster_weights(weights);
    if (clusters.empty()) throw DomainError("all weights are zero");

    HypoexpDensity d;
    auto add_term = [](std::vector<HypoexpTerm>& ts, double scale, int side, int degree,
                       double coeff) {
        for (auto& t : ts)
            if (t.side == side && t.degree == degree && t.scale == scale) {
                t.coeff += coeff;
                return;
            }
        ts.push_back({scale, side, degree, coeff});
    };

    bool first = true;
    for (const auto& [w, mult] : clusters) {
        const double s_new = std::abs(w);
        const int side_new = w > 0 ? +1 : -1;
        for (int rep = 0; rep < mult; ++rep) {
            if (first) {
                d.terms_.push_back({s_new, side_new, 0, 1.0 / s_new});
                first = false;
                continue;
            }
            std::vector<HypoexpTerm> next;
            for (const auto& t : d.terms_) {
                const double c = t.coeff / s_new;  // prefactor of the new exponential
                if (t.side == side_new) {
                    if (t.scale == s_new) {
                        // confluent case: degree goes up by one
                        add_term(next, t.scale, t.side, t.degree + 1, c / (t.degree + 1));
                    } else {
                        const double g = 1.0 / t.scale - 1.0 / s_new;
                        add_term(next, s_new, side_new, 0,
                                 c * factorial(t.degree) / std::pow(g, t.degree + 1));
                        for (int k = 0; k <= t.degree; ++k)
                            add_term(next, t.scale, t.side, k,
                                     -c * factorial(t.degree) / factorial(k) /
                                         std::pow(g, t.degree + 1 - k));
                    }
                } else {
                    const double rho = 1.0 / t.scale + 1.0 / s_new;
                    add_term(next, s_new, side_new, 0,
                             c * factorial(t.degree) / std::pow(rho, t.degree + 1));
                    for (int k = 0; k <= t.degree; ++k)
                        add_term(next, t.scale, t.side, k,
                                 c * factorial(t.degree) / factorial(k) /
                                     std::pow(rho, t.degree + 1 - k));
                }
            }
            d.terms_ = std::move(next);
        }
    }
    return d;
}

HypoexpDensity HypoexpDensity::from_direction(const Direction& a) {
    return from_weights(a.coeffs());
}

double HypoexpDensity::operator()(double x) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
        if (t.side == +1 && x >= 0.0)
            acc += t.coeff * std::pow(x, t.degree) * std::exp(-x / t.scale);
        else if (t.side == -1 && x < 0.0)
            acc += t.coeff * std::pow(-x, t.degree) * std::exp(x / t.scale);
    }
    return acc;
}

double HypoexpDensity::at_zero_plus() const {
    double acc = 0.0;
    for (const auto& t : terms_)
        if (t.side == +1 && t.degree == 0) acc += t.coeff;
    return acc;
}

double HypoexpDensity::at_zero_minus() const {
    double acc = 0.0;
    for (const auto& t : terms_)
        if (t.side == -1 && t.degree == 0) acc += t.coeff;
    return acc;
}

double HypoexpDensity::at_zero() const {
    bool has_pos = false, has_neg = false;
    for (const auto& t : terms_) {
        has_pos |= t.side == +1;
        has_neg |= t.side == -1;
    }
    if (!has_pos) return at_zero_minus();
    if (!has_neg) return at_zero_plus();
    return 0.5 * (at_zero_plus() + at_zero_minus());
}

double HypoexpDensity::total_integral() const {
    double acc = 0.0;
    for (const auto& t : terms_)
        acc += t.coeff * factorial(t.degree) * std::pow(t.scale, t.degree + 1);
    return acc;
}

double g_ab(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw NonpositiveScale("g_ab needs a, b > 0");
    if (x >= 0.0) return std::exp(-x / a) / (a + b);
    return std::exp(x / b) / (a + b);
}

double density_at_zero(const Direction& a) {
    auto clusters = cluster_weights(a.coeffs());
    bool distinct = true;
    for (const auto& [w, mult] : clusters)
        if (mult > 1) distinct = false;

    if (!distinct) return HypoexpDensity::from_weights(a.coeffs()).at_zero();

    // partial fractions: p(0+) = sum_{a_j > 0} (1/a_j) prod_{k != j} a_j/(a_j - a_k)
    // and the mirrored sum for p(0-) over the negative coefficients; terms are
    // exp(sum log) with separate sign tracking.  The two one-sided limits agree
    // by continuity; evaluate whichever side is better conditioned (smaller
    // terms), averaging when both are tame.
    struct SideTerms {
        std::vector<std::pair<long double, int>> lg_sign;
        long double max_lg = -1e30L;
    };
    SideTerms side[2];  // 0: plus, 1: minus
    const std::size_t count = clusters.size();
    std::vector<long double> logabs(count);
    for (std::size_t j = 0; j < count; ++j)
        logabs[j] = std::log(std::abs(static_cast<long double>(clusters[j].first)));
    for (std::size_t j = 0; j < count; ++j) {
        const long double aj = clusters[j].first;
        long double lg = static_cast<long double>(count - 2) * logabs[j];
        int sign = 1;
        for (std::size_t k = 0; k < count; ++k) {
            if (k == j) continue;
            const long double diff = aj - static_cast<long double>(clusters[k].first);
            lg -= std::log(std::abs(diff));
            if (diff < 0.0L) sign = -sign;
            if (aj < 0.0L) sign = -sign;  // sign of each numerator a_j
        }
        SideTerms& s = side[aj > 0.0L ? 0 : 1];
        s.lg_sign.emplace_back(lg, sign);
        s.max_lg = std::max(s.max_lg, lg);
    }
    auto eval_side = [](const SideTerms& s) {
        long double acc = 0.0L;
        for (const auto& [lg, sign] : s.lg_sign) acc += sign * std::exp(lg);
        return acc;
    };
    const long double tame = 33.0L;
    const bool plus_ok = side[0].max_lg <= tame;
    const bool minus_ok = side[1].max_lg <= tame;
    if (plus_ok && minus_ok)
        return static_cast<double>(0.5L * (eval_side(side[0]) + eval_side(side[1])));
    if (side[0].max_lg > 690.0L && side[1].max_lg > 690.0L)
        throw NumericallyIllConditioned(
            "partial-fraction terms overflow on both sides; "
            "use the quadrature evaluator");
    return static_cast<double>(
        eval_side(side[0].max_lg <= side[1].max_lg ? side[0] : side[1]));
}

namespace {

struct SimpsonState {
    double tol;
    int max_depth;
    bool converged = true;
};

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth, SimpsonState& st) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol || depth >= st.max_depth) {
        if (std::abs(err) > 15.0 * tol) st.converged = false;
        return left + right + err / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, st) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, st);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, bool& converged) {
    SimpsonState st{tol, 52, true};
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double val = adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0, st);
    converged = st.converged;
    return val;
}

}  // namespace

double density_at_zero_quadrature(const Direction& a, double tol) {
    if (tol <= 0.0) throw DomainError("tolerance must be positive");
    std::vector<double> w;
    for (double x : a.coeffs())
        if (std::abs(x) >= kDropTol) w.push_back(x);
    const int m = static_cast<int>(w.size());

    auto integrand = [&](double t) {
        std::complex<double> prod(1.0, 0.0);
        for (double aj : w) prod /= std::complex<double>(1.0, -aj * t);
        return prod.real();
    };
    auto envelope = [&](double t) {
        double lg = 0.0;
        for (double aj : w) lg -= 0.5 * std::log1p(aj * aj * t * t);
        return std::exp(lg);
    };

    // truncation point: envelope below tol/10
    double T = 1.0;
    for (int it = 0; it < 200 && envelope(T) >= tol / 10.0; ++it) T *= 2.0;

    bool ok1 = true, ok2 = true;
    const double budget = tol * M_PI / 2.0;  // two pieces, each tol/2 in p units
    double head = adaptive_simpson(integrand, 0.0, T, budget, ok1);

    // tail via u = 1/t; integrand decays like t^{-(m)} so G(u) ~ u^{m-2}
    auto tail_integrand = [&](double u) {
        if (u <= 0.0) {
            if (m == 2) {
                double prod = 1.0;
                for (double aj : w) prod *= std::abs(aj);
                return 1.0 / prod;
            }
            return 0.0;
        }
        double t = 1.0 / u;
        return integrand(t) / (u * u);
    };
    double tail = adaptive_simpson(tail_integrand, 0.0, 1.0 / T, budget, ok2);

    if (!ok1 || !ok2)
        throw QuadratureNonConvergent("adaptive quadrature failed to reach tolerance");
    return (head + tail) / M_PI;
}

McEstimate density_at_zero_montecarlo(const Direction& a, std::int64_t samples,
                                      std::uint64_t seed) {
    const auto& w = a.coeffs();
    Rng rng(seed);
    std::vector<double> draws(static_cast<std::size_t>(samples));
    double mean = 0.0;
    for (auto& x : draws) {
        double s = 0.0;
        for (double aj : w) s += aj * rng.exponential();
        x = s;
        mean += s;
    }
    mean /= static_cast<double>(samples);
    double var = 0.0;
    for (double x : draws) var += (x - mean) * (x - mean);
    var /= std::max<std::int64_t>(1, samples - 1);
    const double sigma = std::sqrt(var);

    // triangular kernel; h ~ sigma * N^{-1/3} keeps the kink bias at 0 below
    // the sampling noise (the densities have a corner exactly at 0)
    const double h = sigma * std::pow(static_cast<double>(samples), -1.0 / 3.0);

    const int batches = 32;
    std::vector<double> batch_means(batches, 0.0);
    std::vector<std::int64_t> batch_counts(batches, 0);
    for (std::int64_t i = 0; i < samples; ++i) {
        const int b = static_cast<int>(i % batches);
        const double x = draws[static_cast<std::size_t>(i)];
        const double k = std::abs(x) < h ? (1.0 - std::abs(x) / h) / h : 0.0;
        batch_means[b] += k;
        batch_counts[b] += 1;
    }
    double est = 0.0;
    for (int b = 0; b < batches; ++b) {
        batch_means[b] /= static_cast<double>(batch_counts[b]);
        est += batch_means[b];
    }
    est /= batches;
    double bvar = 0.0;
    for (int b = 0; b < batches; ++b)
        bvar += (batch_means[b] - est) * (batch_means[b] - est);
    bvar /= (batches - 1);
    McEstimate out;
    out.estimate = est;
    out.stderr_ = std::sqrt(bvar / batches);
    return out;
}

double minmax_density_bound(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw NonpositiveScale("scales must be positive");
    return 1.0 / (M_E * std::min(a, b));
}

double capped_overlap_bound(double a, double b, double C) {
    if (!(a > 0.0) || !(b > 0.0) || !(C > 0.0))
        throw NonpositiveScale("scales and cap must be positive");
    return C * (-std::expm1(-1.0 / (C * (a + b))));
}

double variance_linf_bound(double variance) {
    if (!(variance > 0.0)) throw NonpositiveVariance("variance must be positive");
    return 1.0 / std::sqrt(variance);
}

}  // namespace sslice
