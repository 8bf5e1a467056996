#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "simplexslice/bounds.hpp"
#include "simplexslice/expdensity.hpp"
#include "simplexslice/families.hpp"
#include "simplexslice/rng.hpp"

using namespace sslice;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    double h = (b - a) / (2 * panels);
    double acc = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// independent oracle for Psi: substituting t = tan(phi)/sqrt(x) turns
// (sqrt2/pi) int_0^inf (1 + x t^2)^{-1/(2x)} dt into
// (sqrt2/(pi sqrt x)) int_0^{pi/2} cos(phi)^{1/x - 2} dphi, evaluated by
// tanh-sinh quadrature (handles the endpoint singularity for x > 1/2)
double psi_quadrature(double x) {
    const double expo = 1.0 / x - 2.0;
    const double h = 0.002;
    double acc = 0.0;
    for (int k = -3000; k <= 3000; ++k) {
        double tau = k * h;
        double sh = M_PI_2 * std::sinh(tau);
        if (std::abs(sh) > 700.0) continue;
        double w = M_PI_4 * M_PI_2 * std::cosh(tau) / std::pow(std::cosh(sh), 2);
        if (w < 1e-300) continue;
        double cosphi;
        if (sh > 0.0) {
            // pi/2 - phi = (pi/2)/(1 + e^{2 sh}), computed without cancellation
            double eps = M_PI_2 / (1.0 + std::exp(2.0 * sh));
            cosphi = std::sin(eps);
        } else {
            cosphi = std::cos(M_PI_4 * (1.0 + std::tanh(sh)));
        }
        if (cosphi <= 0.0) continue;
        acc += w * std::pow(cosphi, expo);
    }
    acc *= h;
    return std::sqrt(2.0) / (M_PI * std::sqrt(x)) * acc;
}

Direction random_direction(Rng& rng, int n) {
    std::vector<double> raw(n + 1);
    for (auto& x : raw) x = rng.normal();
    return Direction::normalized(raw);
}

}  // namespace

TEST_CASE("psi special values and limits") {
    CHECK(std::abs(psi(0.5) - 1.0) <= 1e-12);
    CHECK(psi(1e-6) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-5));
    CHECK_THROWS_AS(psi(0.0), DomainError);
    CHECK_THROWS_AS(psi(1.0), DomainError);
}

TEST_CASE("psi agrees with direct quadrature of its integral form") {
    for (double x : {0.7, 0.5, 0.3, 0.12}) {
        CHECK(psi(x) == doctest::Approx(psi_quadrature(x)).epsilon(1e-9));
    }
}

TEST_CASE("psi series branch joins the lgamma branch smoothly") {
    for (double x : {9.9e-5, 1.00001e-4, 5e-5, 2e-4}) {
        const double w = (1.0 - x) / (2.0 * x);
        const double series =
            (1.0 + 1.0 / (8.0 * w) + 1.0 / (128.0 * w * w) - 5.0 / (1024.0 * w * w * w)) /
            std::sqrt(2.0 * M_PI * x * w);
        const double direct = std::exp(std::lgamma(1.0 / (2.0 * x) - 0.5) -
                                       std::lgamma(1.0 / (2.0 * x))) /
                              std::sqrt(2.0 * M_PI * x);
        CHECK(series == doctest::Approx(direct).epsilon(1e-10));
        CHECK(psi(x) == doctest::Approx(series).epsilon(1e-10));
    }
}

TEST_CASE("psi table is strictly increasing and pins psi(1/2) = 1") {
    std::vector<double> xs;
    for (int i = 1; i <= 1000; ++i) xs.push_back(i / 1001.0);
    xs.push_back(0.5);
    auto table = make_psi_table(xs);
    CHECK(table.grid.size() >= 1000);
    for (std::size_t i = 0; i + 1 < table.grid.size(); ++i)
        CHECK(table.grid[i].second < table.grid[i + 1].second);
}

TEST_CASE("fourier bound examples") {
    auto ext = Direction::normalized({1.0, -1.0});
    CHECK(std::abs(fourier_bound(ext) - kInvSqrt2) <= 1e-12);
    auto ext_padded = Direction::normalized({1.0, 0.0, 0.0, -1.0});
    CHECK(std::abs(fourier_bound(ext_padded) - kInvSqrt2) <= 1e-12);

    auto a = Direction::normalized({2.0, -1.0, -1.0});
    double expected = kInvSqrt2 * std::pow(psi(2.0 / 3.0), 2.0 / 3.0) *
                      std::pow(psi(1.0 / 6.0), 1.0 / 3.0);
    CHECK(fourier_bound(a) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(fourier_bound(a) >= density_at_zero(a));

    // strictly below 1/sqrt2 when every |a_j| < 1/sqrt2
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        auto d = random_direction(rng, 4 + trial % 4);
        if (d.u() < kInvSqrt2 - 1e-6 && d.v() < kInvSqrt2 - 1e-6)
            CHECK(fourier_bound(d) < kInvSqrt2);
    }
}

TEST_CASE("log-concavity bound examples") {
    auto ext = Direction::normalized({1.0, -1.0});
    CHECK(logconcavity_bound(ext) == doctest::Approx(kInvSqrt2).epsilon(1e-14));

    const double d = std::sqrt(0.014);
    auto a = Direction::from_unit({0.9, -0.18 + d, -0.18 - d, -0.18, -0.18, -0.18});
    CHECK(logconcavity_bound(a) == doctest::Approx(1.0 / 1.8).epsilon(1e-12));

    Rng rng(9);
    for (int trial = 0; trial < 500; ++trial) {
        auto dir = random_direction(rng, 1 + trial % 10);
        CHECK(logconcavity_bound(dir) >= density_at_zero(dir) - 1e-10);
    }
}

TEST_CASE("stability and global linear bounds") {
    CHECK(stability_deficit_bound_from_delta(0.0) == 0.0);
    CHECK(stability_deficit_bound_from_delta(1.0 / 2000.0) ==
          doctest::Approx(std::sqrt(1.0 / 2000.0) / 10.0).epsilon(1e-14));
    CHECK(stability_deficit_bound_from_delta(1.0) ==
          doctest::Approx(2.0 * std::sqrt(2.0) * 1e-5).epsilon(1e-14));

    auto ext = Direction::normalized({1.0, 0.0, -1.0});
    CHECK(global_linear_bound(ext) == doctest::Approx(kInvSqrt2).epsilon(1e-14));
    CHECK(stability_deficit_bound(ext) <= 1e-12);  // delta is float-noise small
}

TEST_CASE("classify_case: constructed families hit their branches") {
    CHECK_THROWS_AS(classify_case(Direction::normalized({1.0, -1.0})), NotApplicable);

    // padded extremiser: delta = 0, sigma = 0, tie-break to near-1
    auto ext = Direction::normalized({1.0, 0.0, -1.0});
    auto tr0 = classify_case(ext);
    CHECK(tr0.case_label == "near-1");
    CHECK(tr0.regime == Regime::Near);
    CHECK(tr0.all_hold());
    CHECK(tr0.delta == doctest::Approx(0.0).epsilon(1e-14));

    // sigma-rich near direction
    auto near1 = near_direction_sigma(1e-4, 3);
    auto tr1 = classify_case(near1);
    CHECK(tr1.case_label == "near-1");
    CHECK(tr1.all_hold());
    CHECK(tr1.delta == doctest::Approx(1e-4).epsilon(1e-9));

    // flat near direction: sigma below sqrt(delta/2)
    for (double dv : {1e-7, 1e-5, 1e-4, 4.9e-4}) {
        auto near2 = near_direction_flat(dv, 4);
        auto tr2 = classify_case(near2);
        CHECK(tr2.regime == Regime::Near);
        CHECK(tr2.case_label == "near-2");
        CHECK(tr2.all_hold());
        CHECK(tr2.delta == doctest::Approx(dv).epsilon(1e-6));
    }

    // far regime, big leading coefficient
    auto far2 = Direction::normalized({0.8, -0.2, -0.6});
    auto trf2 = classify_case(far2);
    CHECK(trf2.regime == Regime::Far);
    CHECK(trf2.case_label == "far-2");
    CHECK(trf2.all_hold());

    // far regime, flat profile: fourier branch
    auto far11 = Direction::normalized({0.5, 0.3, -0.2, -0.6});
    auto trf11 = classify_case(far11);
    CHECK(trf11.case_label == "far-1.1");
    CHECK(trf11.all_hold());

    // normalization flip: u < v input must classify like its negation
    auto flipped = Direction::normalized({0.2, 0.6, -0.8});
    auto trf = classify_case(flipped);
    CHECK(trf.u >= trf.v);
    CHECK(trf.all_hold());
}

TEST_CASE("classify_case: far-1.2 needs two coefficients near 1/sqrt2") {
    // the pairing branch requires a_2 > (1 - 1/4000)/sqrt2 while u stays below
    // sqrt(1/2 + eta); the sum-zero constraint forces a huge dimension
    auto a = far_pairing_direction(14000);
    REQUIRE(a.u() <= std::sqrt(0.5 + 5e-5));
    REQUIRE(a.coeffs()[1] > (1.0 - 1.0 / 4000.0) / std::sqrt(2.0));

    auto tr = classify_case(a);
    CHECK(tr.regime == Regime::Far);
    CHECK(tr.case_label == "far-1.2");
    CHECK(tr.all_hold());
}

TEST_CASE("psi product check from the far regime") {
    const double eta = 5e-5;
    double prod = std::pow(psi(0.5 + eta), 0.5 + eta) *
                  std::pow(psi(0.5 - 1.0 / 8000.0), 0.5 - eta);
    CHECK(prod < 1.0 - 5e-5 + 1e-12);
}

TEST_CASE("classified verdicts hold on random batches") {
    Rng rng(777);
    for (int trial = 0; trial < 400; ++trial) {
        auto a = random_direction(rng, 2 + trial % 9);
        auto tr = classify_case(a);
        for (const auto& c : tr.checks) {
            INFO("case ", tr.case_label, " check ", c.name, " lhs ", c.lhs, " rhs ", c.rhs);
            CHECK(c.holds);
        }
    }
}

TEST_CASE("case trace scalar identities") {
    Rng rng(31415);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_direction(rng, 2 + trial % 9);
        auto tr = classify_case(a);
        CHECK(tr.s * tr.s + tr.t * tr.t ==
              doctest::Approx(tr.u * tr.u + tr.v * tr.v).epsilon(1e-10));
        CHECK(tr.delta ==
              doctest::Approx(2.0 - std::sqrt(2.0) * (tr.u + tr.v)).epsilon(1e-9));
        CHECK((tr.regime == Regime::Near) == (tr.delta <= 1.0 / 2000.0));
        CHECK(tr.eta == 5e-5);
        CHECK(tr.u >= tr.v);
    }
}

TEST_CASE("verify_direction at the extremiser and a generic point") {
    VerifyOptions opts;
    opts.mc_samples = 30000;
    opts.seed = 5;
    auto ext = Direction::normalized({1.0, -1.0, 0.0});
    auto rep = verify_direction(ext, opts);
    CHECK(rep.all_pass());
    CHECK(std::abs(rep.p0_exact - kInvSqrt2) <= 1e-12);
    CHECK(std::abs(rep.webb - kInvSqrt2) <= 1e-15);
    CHECK(std::abs(rep.fourier - kInvSqrt2) <= 1e-12);
    CHECK(std::abs(rep.logconcavity - kInvSqrt2) <= 1e-12);
    CHECK(std::abs(rep.global_linear - kInvSqrt2) <= 1e-12);
    CHECK(std::abs(rep.deficit) <= 1e-12);

    auto a = Direction::normalized({2.0, -1.0, -1.0});
    auto rep2 = verify_direction(a, opts);
    CHECK(rep2.all_pass());
    CHECK(rep2.deficit ==
          doctest::Approx(kInvSqrt2 - 2.0 * std::sqrt(6.0) / 9.0).epsilon(1e-10));
}

TEST_CASE("dominance of every bound on a random batch") {
    Rng rng(4321);
    VerifyOptions opts;
    for (int trial = 0; trial < 1500; ++trial) {
        auto a = random_direction(rng, 1 + trial % 20);
        auto rep = verify_direction(a, opts);
        INFO("n ", a.n());
        CHECK(rep.all_pass());
        double upper = std::min({rep.webb, rep.fourier, rep.logconcavity, rep.global_linear});
        CHECK(rep.p0_exact <= upper + 1e-10);
        CHECK(rep.deficit >= rep.stability_bound - 1e-12);
    }
}

TEST_CASE("search_extremiser finds the two-coordinate pattern") {
    auto r1 = search_extremiser(1, 1, 0);
    CHECK(r1.p_star == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(r1.best.coeffs()[0] == doctest::Approx(kInvSqrt2).epsilon(1e-14));

    auto r3 = search_extremiser(3, 30, 5);
    CHECK(r3.p_star >= kInvSqrt2 - 1e-6);
    CHECK(std::abs(r3.best.coeffs()[0] - kInvSqrt2) <= 1e-3);
    CHECK(std::abs(r3.best.coeffs()[3] + kInvSqrt2) <= 1e-3);
    CHECK(std::abs(r3.best.coeffs()[1]) <= 1e-3);
    CHECK(std::abs(r3.best.coeffs()[2]) <= 1e-3);

    auto again = search_extremiser(3, 30, 5);
    CHECK(again.p_star == r3.p_star);
    CHECK(again.best.coeffs() == r3.best.coeffs());
}
