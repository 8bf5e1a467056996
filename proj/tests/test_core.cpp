#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "simplexslice/core.hpp"
#include "simplexslice/rng.hpp"

using namespace sslice;

TEST_CASE("normalize_direction on already normalized input") {
    const double r = 1.0 / std::sqrt(2.0);
    auto a = Direction::normalized({r, -r});
    CHECK(a.n() == 1);
    CHECK(a.coeffs()[0] == doctest::Approx(r).epsilon(1e-14));
    CHECK(a.coeffs()[1] == doctest::Approx(-r).epsilon(1e-14));
}

TEST_CASE("normalize_direction scales and keeps sum-zero input") {
    auto a = Direction::normalized({2.0, 0.0, -2.0});
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(a.coeffs()[0] == doctest::Approx(r));
    CHECK(a.coeffs()[1] == doctest::Approx(0.0));
    CHECK(a.coeffs()[2] == doctest::Approx(-r));
}

TEST_CASE("normalize_direction rejects the all-ones direction") {
    CHECK_THROWS_AS(Direction::normalized({1.0, 1.0, 1.0}), ZeroAfterProjection);
    CHECK_THROWS_AS(Direction::normalized({2.0}), DimensionTooSmall);
}

TEST_CASE("normalize_direction sorts descending and projects") {
    auto a = Direction::normalized({-1.0, 5.0, 2.0, -3.0});
    double sum = 0.0, norm2 = 0.0;
    for (double c : a.coeffs()) {
        sum += c;
        norm2 += c * c;
    }
    CHECK(std::abs(sum) < 1e-12);
    CHECK(std::abs(norm2 - 1.0) < 1e-12);
    CHECK(std::is_sorted(a.coeffs().rbegin(), a.coeffs().rend()));
}

TEST_CASE("delta at the extremisers") {
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(delta(Direction::normalized({r, -r})) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(delta(Direction::normalized({r, 0.0, -r})) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("delta closed form matches squared distance") {
    auto a = Direction::normalized({2.0, -1.0, -1.0});
    // closed form 2 - sqrt(2)*(a_1 - a_{n+1}) = 2 - sqrt(2)*3/sqrt(6) = 2 - sqrt(3)
    CHECK(delta(a) == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-13));
    // squared-distance definition, spelled out
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<double> e = {r, 0.0, -r};
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) d2 += (a.coeffs()[i] - e[i]) * (a.coeffs()[i] - e[i]);
    CHECK(delta(a) == doctest::Approx(d2).epsilon(1e-12));
}

TEST_CASE("delta invariant under renormalizing a valid direction") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> raw(6);
        for (auto& x : raw) x = rng.normal();
        auto a = Direction::normalized(raw);
        auto b = Direction::normalized(a.coeffs());
        CHECK(delta(a) == doctest::Approx(delta(b)).epsilon(1e-14));
    }
}

TEST_CASE("subspace distance basics") {
    Subspace e1(3, {{1.0, 0.0, 0.0}});
    Subspace e1_flip(3, {{-1.0, 0.0, 0.0}});
    Subspace e2(3, {{0.0, 1.0, 0.0}});
    CHECK(subspace_distance(e1, e1_flip) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(subspace_distance(e1, e2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("subspace distance against explicitly built projectors") {
    const double th = M_PI / 6.0;
    Subspace E(3, {{1.0, 0.0, 0.0}});
    Subspace F(3, {{std::cos(th), std::sin(th), 0.0}});
    Eigen::Matrix3d pe = Eigen::Matrix3d::Zero(), pf;
    pe(0, 0) = 1.0;
    Eigen::Vector3d f(std::cos(th), std::sin(th), 0.0);
    pf = f * f.transpose();
    double expected = (pe - pf).norm();
    CHECK(subspace_distance(E, F) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("subspace distance is a metric and basis independent") {
    Rng rng(99);
    auto random_subspace = [&](int n, int l) {
        Eigen::MatrixXd g(n, l);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < l; ++j) g(i, j) = rng.normal();
        return Subspace(g);
    };
    for (int trial = 0; trial < 30; ++trial) {
        auto E = random_subspace(5, 2);
        auto F = random_subspace(5, 2);
        auto G = random_subspace(5, 2);
        double ef = subspace_distance(E, F);
        double fg = subspace_distance(F, G);
        double eg = subspace_distance(E, G);
        CHECK(eg <= ef + fg + 1e-10);
        CHECK(ef == doctest::Approx(subspace_distance(F, E)).epsilon(1e-13));

        // re-parameterize E by a random rotation of its basis
        double a = rng.uniform(0.0, 2.0 * M_PI);
        Eigen::Matrix2d rot;
        rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        Subspace E2(Eigen::MatrixXd(E.basis() * rot));
        CHECK(subspace_distance(E, E2) < 1e-10);
        CHECK(subspace_distance(E2, F) == doctest::Approx(ef).epsilon(1e-10));
    }
}

TEST_CASE("subspace complement is orthogonal and complete") {
    Rng rng(5);
    Eigen::MatrixXd g(4, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) g(i, j) = rng.normal();
    Subspace E(g);
    Subspace C = E.complement();
    CHECK(C.dim() == 2);
    CHECK((E.basis().transpose() * C.basis()).norm() < 1e-12);
}

TEST_CASE("polytope construction validates and dedups") {
    auto p = Polytope::from_points(2, {{0, 0}, {1, 0}, {0, 1}, {0, 0}});
    CHECK(p.vertex_count() == 3);
    CHECK_THROWS_AS(Polytope::from_points(2, {{0, 0}, {1, 0}, {2, 0}}), HullFailure);
    auto flat = Polytope::from_points(2, {{0, 0}, {1, 0}, {2, 0}}, true);
    CHECK(flat.vertex_count() == 3);
    auto q = Polytope::from_rational_points(
        2, {{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
    CHECK(q.mode() == NumericMode::ExactRational);
    CHECK(q.rational_vertices().size() == 3);
    CHECK(Polytope::empty(3).is_empty());
}
