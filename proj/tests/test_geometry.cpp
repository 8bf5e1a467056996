#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "simplexslice/geometry.hpp"
#include "simplexslice/rng.hpp"

using namespace sslice;
using namespace sslice::geom;

namespace {

Mat<double> cube_vertices(int d, double lo, double hi) {
    Mat<double> pts;
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec<double> v(d);
        for (int i = 0; i < d; ++i) v[i] = (mask >> i & 1) ? hi : lo;
        pts.push_back(v);
    }
    return pts;
}

Mat<Rational> cube_vertices_q(int d, const Rational& lo, const Rational& hi) {
    Mat<Rational> pts;
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec<Rational> v(d);
        for (int i = 0; i < d; ++i) v[i] = (mask >> i & 1) ? hi : lo;
        pts.push_back(v);
    }
    return pts;
}

}  // namespace

TEST_CASE("facet enumeration of the unit square") {
    Mat<double> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto fe = facets_of_points(pts);
    CHECK(fe.hrep.size() == 4);
    // every vertex satisfies all inequalities, tight on exactly two
    for (std::size_t vi = 0; vi < pts.size(); ++vi) {
        int tight = 0;
        for (std::size_t i = 0; i < fe.hrep.size(); ++i) {
            double s = dot(fe.hrep.A[i], pts[vi]) - fe.hrep.b[i];
            CHECK(s <= 1e-12);
            if (std::abs(s) < 1e-12) ++tight;
        }
        CHECK(tight == 2);
    }
}

TEST_CASE("vertex enumeration of a square from inequalities") {
    HRep<double> H;
    H.A = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    H.b = {1, 0, 1, 0};
    auto ve = enumerate_vertices(H);
    REQUIRE(!ve.empty);
    CHECK(ve.vertices.size() == 4);
}

TEST_CASE("vertex enumeration detects infeasibility") {
    HRep<double> H;
    H.A = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    H.b = {1, -2, 1, 0};  // x <= 1 and x >= 2
    auto ve = enumerate_vertices(H);
    CHECK(ve.empty);
}

TEST_CASE("volumes of cubes and simplices, float and rational") {
    auto cube3 = cube_vertices(3, 0.0, 1.0);
    CHECK(volume_of_points(cube3).value() == doctest::Approx(1.0).epsilon(1e-12));

    for (int k = 2; k <= 5; ++k) {
        Mat<double> pts(1, Vec<double>(k, 0.0));
        for (int i = 0; i < k; ++i) {
            Vec<double> e(k, 0.0);
            e[i] = 1.0;
            pts.push_back(e);
        }
        double expect = 1.0;
        for (int i = 2; i <= k; ++i) expect /= i;
        CHECK(volume_of_points(pts).value() == doctest::Approx(expect).epsilon(1e-12));
    }

    auto cube3q = cube_vertices_q(3, Rational(-1, 2), Rational(1, 2));
    auto vq = volume_of_points(cube3q);
    CHECK(vq.chart_volume == Rational(1));
    CHECK(vq.gram_det == Rational(1));
}

TEST_CASE("octahedron volume (degenerate vertices in the dual)") {
    Mat<double> pts;
    for (int i = 0; i < 3; ++i)
        for (double s : {1.0, -1.0}) {
            Vec<double> v(3, 0.0);
            v[i] = s;
            pts.push_back(v);
        }
    CHECK(volume_of_points(pts).value() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    Mat<Rational> ptsq;
    for (int i = 0; i < 3; ++i)
        for (int s : {1, -1}) {
            Vec<Rational> v(3, Rational(0));
            v[i] = s;
            ptsq.push_back(v);
        }
    CHECK(volume_of_points(ptsq).chart_volume == Rational(4, 3));
}

TEST_CASE("triangular prism: non-simplicial facets triangulate correctly") {
    Mat<double> pts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}};
    CHECK(volume_of_points(pts).value() == doctest::Approx(0.5).epsilon(1e-12));

    Mat<Rational> q;
    for (auto& p : pts) {
        Vec<Rational> v;
        for (double x : p) v.push_back(rational_from_double(x));
        q.push_back(v);
    }
    CHECK(volume_of_points(q).chart_volume == Rational(1, 2));
}

TEST_CASE("lower-dimensional point sets: segment, point, embedded square") {
    Mat<double> seg = {{0, 0, 0}, {0.5, 0.5, 1.0}};
    CHECK(volume_of_points(seg).value() ==
          doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
    Mat<double> pt = {{3.0, 4.0}};
    auto r = volume_of_points(pt);
    CHECK(r.rank == 0);
    CHECK(r.value() == doctest::Approx(1.0));
    // unit square sitting obliquely in R^3
    Mat<double> sq = {{0, 0, 0}, {1, 0, 0}, {0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0)},
                      {1, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}};
    CHECK(volume_of_points(sq).value() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rational chart reports gram determinant") {
    // segment from 0 to (1,1,1): chart volume 1, gram det 3
    Mat<Rational> seg = {{Rational(0), Rational(0), Rational(0)},
                         {Rational(1), Rational(1), Rational(1)}};
    auto r = volume_of_points(seg);
    CHECK(r.rank == 1);
    CHECK(r.chart_volume == Rational(1));
    CHECK(r.gram_det == Rational(3));
    CHECK(r.value() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("moments of the centred cube are exact in rational mode") {
    auto pts = cube_vertices_q(3, Rational(-1, 2), Rational(1, 2));
    auto fe = facets_of_points(pts);
    auto mom = moments_fulldim(pts, fe.facet_vertices);
    CHECK(mom.volume == Rational(1));
    for (int i = 0; i < 3; ++i) {
        CHECK(mom.barycentre[i] == Rational(0));
        for (int j = 0; j < 3; ++j)
            CHECK(mom.covariance[i][j] == (i == j ? Rational(1, 12) : Rational(0)));
    }
}

TEST_CASE("moments of the right triangle are exact in rational mode") {
    Mat<Rational> pts = {{Rational(0), Rational(0)},
                         {Rational(1), Rational(0)},
                         {Rational(0), Rational(1)}};
    auto fe = facets_of_points(pts);
    auto mom = moments_fulldim(pts, fe.facet_vertices);
    CHECK(mom.volume == Rational(1, 2));
    CHECK(mom.barycentre[0] == Rational(1, 3));
    CHECK(mom.barycentre[1] == Rational(1, 3));
    CHECK(mom.covariance[0][0] == Rational(1, 18));
    CHECK(mom.covariance[0][1] == Rational(-1, 36));
    CHECK(mom.covariance[1][1] == Rational(1, 18));
}

TEST_CASE("volume of random hulls is rotation and translation invariant") {
    Rng rng(4242);
    for (int trial = 0; trial < 10; ++trial) {
        Mat<double> pts;
        for (int i = 0; i < 9; ++i) {
            Vec<double> p(3);
            for (auto& x : p) x = rng.normal();
            pts.push_back(p);
        }
        double v0 = volume_of_points(pts).value();
        CHECK(v0 > 0.0);
        // random rotation from QR of a Gaussian matrix + a shift
        Eigen::MatrixXd g(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = rng.normal();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd Q = qr.householderQ();
        Vec<double> shift = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        Mat<double> moved;
        for (auto& p : pts) {
            Eigen::Vector3d x(p[0], p[1], p[2]);
            Eigen::Vector3d y = Q * x;
            moved.push_back({y[0] + shift[0], y[1] + shift[1], y[2] + shift[2]});
        }
        double v1 = volume_of_points(moved).value();
        CHECK(v1 == doctest::Approx(v0).epsilon(1e-10));
    }
}
