#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "simplexslice/expdensity.hpp"
#include "simplexslice/rng.hpp"

using namespace sslice;

namespace {

// test-local composite Simpson, kept independent of the library quadrature
double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    double h = (b - a) / (2 * panels);
    double acc = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

Direction random_direction(Rng& rng, int n) {
    std::vector<double> raw(n + 1);
    for (auto& x : raw) x = rng.normal();
    return Direction::normalized(raw);
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("g_ab closed form values") {
    CHECK(g_ab(0.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g_ab(0.0, kInvSqrt2, kInvSqrt2) == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK_THROWS_AS(g_ab(0.0, -1.0, 1.0), NonpositiveScale);
}

TEST_CASE("g_ab integrates to one") {
    auto f = [](double x) { return g_ab(x, 2.0, 3.0); };
    double total = simpson(f, -90.0, 0.0, 40000) + simpson(f, 0.0, 60.0, 40000);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("density_at_zero at the extremiser") {
    auto a = Direction::normalized({1.0, -1.0});
    CHECK(density_at_zero(a) == doctest::Approx(kInvSqrt2).epsilon(1e-14));
    // zero weight is dropped, reducing to the n=1 case
    auto b = Direction::normalized({1.0, 0.0, -1.0});
    CHECK(density_at_zero(b) == doctest::Approx(kInvSqrt2).epsilon(1e-14));
}

TEST_CASE("density_at_zero with a repeated coefficient vs 1d quadrature oracle") {
    auto a = Direction::normalized({2.0, -1.0, -1.0});
    // S = X - Y with X = 2b X1, Y = b (X2 + X3), b = 1/sqrt(6);
    // p(0) = int_0^inf f_X f_Y = int (1/2b) e^{-t/2b} (t/b^2) e^{-t/b} dt
    const double b = 1.0 / std::sqrt(6.0);
    auto f = [&](double t) {
        return (1.0 / (2.0 * b)) * std::exp(-t / (2.0 * b)) * (t / (b * b)) *
               std::exp(-t / b);
    };
    double oracle = simpson(f, 0.0, 2.0 * b * 60.0, 60000);
    double p = density_at_zero(a);
    CHECK(p == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(p == doctest::Approx(2.0 * std::sqrt(6.0) / 9.0).epsilon(1e-13));
}

TEST_CASE("hypoexp representation integrates to one and is continuous at zero") {
    Rng rng(31);
    for (int n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 25; ++trial) {
            auto a = random_direction(rng, n);
            auto d = HypoexpDensity::from_direction(a);
            CHECK(d.total_integral() == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(d.at_zero_plus() == doctest::Approx(d.at_zero_minus()).epsilon(1e-8));
        }
    }
}

TEST_CASE("hypoexp handles constructed ties confluently") {
    auto a = Direction::normalized({3.0, 3.0, -2.0, -2.0, -2.0});
    auto d = HypoexpDensity::from_direction(a);
    CHECK(d.total_integral() == doctest::Approx(1.0).epsilon(1e-10));
    double pf = density_at_zero(a);
    double q = density_at_zero_quadrature(a, 1e-11);
    CHECK(pf == doctest::Approx(q).epsilon(1e-9));
}

TEST_CASE("quadrature evaluator hits the stated tolerance at the extremiser") {
    auto a = Direction::normalized({1.0, -1.0});
    double q = density_at_zero_quadrature(a, 1e-10);
    CHECK(std::abs(q - kInvSqrt2) <= 1e-10);
}

TEST_CASE("evaluator triangle: partial fractions vs quadrature vs monte carlo") {
    Rng rng(7);
    for (int n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 500; ++trial) {
            auto a = random_direction(rng, n);
            double p = density_at_zero(a);
            double q = density_at_zero_quadrature(a, 1e-10);
            CHECK(std::abs(p - q) <= 1e-8);
            if (trial % 25 == 0) {
                auto mc = density_at_zero_montecarlo(a, 30000, mix_seed(1234, trial));
                CHECK(std::abs(mc.estimate - p) <= 4.0 * mc.stderr_);
                CHECK(std::abs(mc.estimate - q) <= 4.0 * mc.stderr_);
            }
        }
    }
}

TEST_CASE("monte carlo examples and determinism") {
    auto a = Direction::normalized({1.0, -1.0});
    auto mc = density_at_zero_montecarlo(a, 1000000, 99);
    CHECK(std::abs(mc.estimate - kInvSqrt2) <= 3.0 * mc.stderr_);

    auto b = Direction::normalized({2.0, -1.0, -1.0});
    auto mcb = density_at_zero_montecarlo(b, 1000000, 77);
    CHECK(std::abs(mcb.estimate - 2.0 * std::sqrt(6.0) / 9.0) <= 3.0 * mcb.stderr_);

    auto again = density_at_zero_montecarlo(b, 1000000, 77);
    CHECK(mcb.estimate == again.estimate);
    CHECK(mcb.stderr_ == again.stderr_);
}

TEST_CASE("density is invariant under negating the direction") {
    Rng rng(83);
    for (int trial = 0; trial < 60; ++trial) {
        auto a = random_direction(rng, 2 + trial % 7);
        CHECK(density_at_zero(a) ==
              doctest::Approx(density_at_zero(a.negated())).epsilon(1e-10));
    }
}

TEST_CASE("two-coefficient directions match g_ab at zero") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        double x = rng.uniform(0.3, 3.0), y = rng.uniform(0.3, 3.0);
        auto a = Direction::normalized({x, -y});
        double u = a.coeffs()[0], v = -a.coeffs()[1];
        CHECK(density_at_zero(a) == doctest::Approx(g_ab(0.0, u, v)).epsilon(1e-13));
        CHECK(g_ab(0.0, u, v) == doctest::Approx(1.0 / (u + v)).epsilon(1e-13));
    }
}

TEST_CASE("ill-conditioned near-ties are refused") {
    std::vector<double> raw = {1.0, 0.5, 0.5 + 5e-10, -1.0, -1.0000001};
    auto a = Direction::normalized(raw);
    CHECK_THROWS_AS(density_at_zero(a), NumericallyIllConditioned);
    // quadrature still works there
    double q = density_at_zero_quadrature(a, 1e-9);
    CHECK(q > 0.0);
    CHECK(q < kInvSqrt2 + 1e-9);
}

TEST_CASE("log-space product survives larger n") {
    Rng rng(2024);
    auto a = random_direction(rng, 40);
    double p = density_at_zero(a);
    CHECK(std::isfinite(p));
    CHECK(p > 0.0);
    CHECK(p <= kInvSqrt2 + 1e-12);
    double q = density_at_zero_quadrature(a, 1e-10);
    CHECK(std::abs(p - q) <= 1e-8);
}

TEST_CASE("minmax density bound") {
    CHECK(minmax_density_bound(1.0, 1.0) == doctest::Approx(1.0 / M_E).epsilon(1e-15));
    CHECK(minmax_density_bound(0.5, 3.0) == doctest::Approx(2.0 / M_E).epsilon(1e-15));
    CHECK_THROWS_AS(minmax_density_bound(0.0, 1.0), NonpositiveScale);

    // density of aX + bY on a grid stays below the bound, (a,b) = (0.3, 0.7)
    const double a = 0.3, b = 0.7;
    const double bound = minmax_density_bound(a, b);
    auto dens = [&](double x) {
        return (std::exp(-x / b) - std::exp(-x / a)) / (b - a);
    };
    auto cls = HypoexpDensity::from_weights({a, b});
    for (double x = 0.0; x <= 8.0; x += 0.002) {
        CHECK(dens(x) <= bound + 1e-12);
        CHECK(cls(x) == doctest::Approx(dens(x)).epsilon(1e-9));
    }
}

TEST_CASE("capped overlap bound") {
    // C -> infinity recovers g_{a,b}(0) = 1/(a+b)
    const double a = 0.9, b = 1.7;
    double big = capped_overlap_bound(a, b, 1e8);
    CHECK(big == doctest::Approx(1.0 / (a + b)).epsilon(1e-7));

    CHECK(capped_overlap_bound(1.0, 1.0, 1.0) ==
          doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-14));

    // exact integral of g_{a,b} over a segment
    auto seg_mass = [&](double l, double r) {
        double acc = 0.0;
        if (l < 0.0) {
            double rr = std::min(r, 0.0);
            acc += b / (a + b) * (std::exp(rr / b) - std::exp(l / b));
        }
        if (r > 0.0) {
            double ll = std::max(l, 0.0);
            acc += a / (a + b) * (std::exp(-ll / a) - std::exp(-r / a));
        }
        return acc;
    };

    // the extremal uniform density achieves the bound
    const double C = 1.3;
    const double alpha = a / (C * (a + b)), beta = b / (C * (a + b));
    double attained = C * seg_mass(-beta, alpha);
    CHECK(attained == doctest::Approx(capped_overlap_bound(a, b, C)).epsilon(1e-12));

    // random capped densities stay below the bound
    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        double cap = rng.uniform(0.4, 2.5);
        // a random mixture of two boxes with total mass 1 and sup <= h1 + h2
        double w1 = rng.uniform(0.2, 0.8);
        double h1 = rng.uniform(0.2, 1.0) * cap;
        double h2 = rng.uniform(0.2, 1.0) * cap;
        double c1 = rng.uniform(-1.5, 1.5), c2 = rng.uniform(-1.5, 1.5);
        double wid1 = w1 / h1, wid2 = (1.0 - w1) / h2;
        double overlap = h1 * seg_mass(c1 - wid1 / 2, c1 + wid1 / 2) +
                         h2 * seg_mass(c2 - wid2 / 2, c2 + wid2 / 2);
        CHECK(overlap <= capped_overlap_bound(a, b, h1 + h2) + 1e-12);
    }
}

TEST_CASE("variance sup bound and exponential equality case") {
    CHECK(variance_linf_bound(1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(variance_linf_bound(0.0), NonpositiveVariance);
    // standard exponential: variance 1, sup 1, equality
    CHECK(variance_linf_bound(1.0) == doctest::Approx(1.0));

    // KDE sup of Y = -sum_{j>=2} a_j X_j stays below 1/sigma plus slack
    Rng rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_direction(rng, 6);
        std::vector<double> mid(a.coeffs().begin() + 1, a.coeffs().end() - 1);
        double s2 = 0.0;
        for (double m : mid) s2 += m * m;
        if (s2 < 1e-12) continue;
        std::vector<double> negw;
        for (double m : mid) negw.push_back(-m);
        bool all_zero = true;
        for (double m : negw)
            if (std::abs(m) > 1e-14) all_zero = false;
        if (all_zero) continue;
        auto d = HypoexpDensity::from_weights(negw);
        double bound = variance_linf_bound(s2);
        double sup = 0.0;
        for (double x = -6.0; x <= 6.0; x += 0.01) sup = std::max(sup, d(x));
        CHECK(sup <= bound + 1e-9);
    }
}
