#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "critcluster/geom3.hpp"

#include <cmath>
#include <random>

using namespace critcluster;

namespace {

// Independent oracle: distance between infinite lines as the minimum over s
// of the point-to-line distance from p1 + s d1 to the second line. The
// squared objective is an exact quadratic in s, so a 3-point parabola fit
// finds the true minimizer; a golden-section pass around it guards against
// conditioning surprises.
double oracle_line_distance(const Vec3& p1, const Vec3& d1, const Vec3& p2, const Vec3& d2) {
    auto h2 = [&](double s) {
        Vec3 q = p1 + s * d1 - p2;
        Vec3 perp = q - d2 * q.dot(d2);
        return perp.squaredNorm();
    };
    // h2 is exactly quadratic: h2(s) = |w_perp|^2 + 2 s <w_perp, e_perp>
    // + s^2 |e_perp|^2 with v_perp = v - (v.d2) d2
    Vec3 w = p1 - p2;
    Vec3 wp = w - d2 * w.dot(d2);
    Vec3 ep = d1 - d2 * d1.dot(d2);
    double a = ep.squaredNorm();
    double b = 2.0 * wp.dot(ep);
    if (a <= 1e-30) return std::sqrt(h2(0));  // parallel: constant in s
    double s = -b / (2 * a);
    // exact minimum of the quadratic (stable for far-away vertices)
    double gmin = std::max(0.0, wp.squaredNorm() - b * b / (4 * a));
    if (std::abs(s) > 1e3) return std::sqrt(gmin);
    // golden-section polish around the vertex as a cross-check
    double lo = s - 1.0, hi = s + 1.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = h2(c), fd = h2(d);
    for (int it = 0; it < 80; ++it) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo); fc = h2(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo); fd = h2(d);
        }
    }
    return std::sqrt(std::max(0.0, std::min({gmin, fc, fd})));
}

TangentLine random_line(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ulat(-1.2, 1.2), ulon(0, 2 * kPi), ua(0, kPi);
    return TangentLine(SpherePoint{ulat(rng), ulon(rng)}, ua(rng));
}

}  // namespace

TEST_CASE("rotate_about_axis basics") {
    Vec3 r = rotate_about_axis(Vec3(0, 0, 1), kPi / 2, Vec3(1, 0, 0));
    CHECK((r - Vec3(0, 1, 0)).norm() < 1e-14);
    Vec3 axis = Vec3(1, 2, -1).normalized();
    Vec3 v(0.3, -0.4, 0.7);
    CHECK((rotate_about_axis(axis, 0.0, v) - v).norm() < 1e-14);
    Vec3 h = rotate_about_axis(Vec3(1, 0, 0), kPi, Vec3(0, 1, 0));
    CHECK((h - Vec3(0, -1, 0)).norm() < 1e-14);
    CHECK_THROWS_AS(rotate_about_axis(Vec3(1, 1, 0), 0.1, v), input_error);
}

TEST_CASE("sphere point embedding") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ulat(-kPi / 2, kPi / 2), ulon(0, 2 * kPi);
    for (int k = 0; k < 200; ++k) {
        SpherePoint x{ulat(rng), ulon(rng)};
        CHECK(std::abs(x.embed().norm() - 1.0) < 1e-12);
    }
    SpherePoint greenwich{0.4, 0.0};
    CHECK(greenwich.embed().y() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(greenwich.embed().x() > 0);
}

TEST_CASE("line_direction examples") {
    CHECK((line_direction(SpherePoint{0, 0}, 0.0) - Vec3(0, 0, 1)).norm() < 1e-14);
    CHECK((line_direction(SpherePoint{0, kPi / 2}, 0.0) - Vec3(0, 0, 1)).norm() < 1e-14);
    Vec3 t = line_direction(SpherePoint{0, 0}, kPi / 2);
    CHECK(std::abs(std::abs(t.y()) - 1.0) < 1e-14);  // +-east, unoriented
    // unit and orthogonal to the touch point
    std::mt19937_64 rng(2);
    for (int k = 0; k < 200; ++k) {
        TangentLine ln = random_line(rng);
        CHECK(std::abs(ln.dir().norm() - 1.0) < 1e-12);
        CHECK(std::abs(ln.dir().dot(ln.pos())) < 1e-12);
    }
    CHECK_THROWS_AS(line_direction(SpherePoint{kPi / 2, 0}, 0.0), chart_error);
}

TEST_CASE("tangent line chart round trip and canonical alpha") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 300; ++k) {
        TangentLine ln = random_line(rng);
        double a = ln.alpha();
        CHECK(a >= 0.0);
        CHECK(a < kPi);
        TangentLine back(ln.point(), a);
        CHECK((back.pos() - ln.pos()).norm() < 1e-12);
        CHECK(std::min((back.dir() - ln.dir()).norm(), (back.dir() + ln.dir()).norm()) <
              1e-12);
        // alpha and alpha + pi give the same unoriented line
        TangentLine flip(ln.point(), a + kPi);
        CHECK(line_distance(ln, flip) < 1e-12);
    }
}

TEST_CASE("pole-safe constructor") {
    TangentLine top = TangentLine::from_point_dir(Vec3(0, 0, 1), Vec3(1, 0, 0));
    CHECK(std::abs(top.pos().z() - 1.0) < 1e-14);
    CHECK_THROWS_AS(top.alpha(), chart_error);
    CHECK_THROWS_AS(TangentLine::from_point_dir(Vec3(0, 0, 2), Vec3(1, 0, 0)), input_error);
    CHECK_THROWS_AS(TangentLine::from_point_dir(Vec3(0, 0, 1), Vec3(0, 0.1, 1)), input_error);
}

TEST_CASE("line_distance examples") {
    TangentLine u(SpherePoint{0, kPi / 6}, 0.0);
    TangentLine v(SpherePoint{0, kPi / 2}, 0.0);
    CHECK(line_distance(u, v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(line_distance(u, u) == doctest::Approx(0.0));
    TangentLine a = TangentLine::from_point_dir(Vec3(0, 0, 1), Vec3(1, 0, 0));
    TangentLine b = TangentLine::from_point_dir(Vec3(0, 0, -1), Vec3(0, 1, 0));
    CHECK(line_distance(a, b) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("line_distance agrees with the brute-force oracle") {
    std::mt19937_64 rng(42);
    double worst = 0;
    for (int k = 0; k < 2000; ++k) {
        TangentLine u = random_line(rng), v = random_line(rng);
        double f = line_distance(u, v);
        double o = oracle_line_distance(u.pos(), u.dir(), v.pos(), v.dir());
        worst = std::max(worst, std::abs(f - o));
    }
    CHECK(worst < 1e-9);

    // near-parallel pairs: second touch point on the great circle with pole
    // d1, direction d1 twisted by a tiny angle
    std::uniform_real_distribution<double> ulon(0, 2 * kPi), ueps(-5, -3);
    double worst_np = 0;
    for (int k = 0; k < 300; ++k) {
        TangentLine u = random_line(rng);
        Vec3 axis = u.dir();
        Vec3 seed = std::abs(axis.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
        Vec3 e1 = (seed - axis * axis.dot(seed)).normalized();
        Vec3 e2 = axis.cross(e1);
        double t = ulon(rng);
        Vec3 p2 = std::cos(t) * e1 + std::sin(t) * e2;  // p2 orthogonal to d1
        double eps = std::pow(10.0, ueps(rng));
        Vec3 d2 = rotate_about_axis(p2, eps, axis);
        TangentLine v = TangentLine::from_point_dir(p2, d2);
        double f = line_distance(u, v);
        double o = oracle_line_distance(u.pos(), u.dir(), v.pos(), v.dir());
        worst_np = std::max(worst_np, std::abs(f - o));
    }
    CHECK(worst_np < 1e-9);

    // exactly parallel
    TangentLine u(SpherePoint{0, 0}, 0.0);
    TangentLine v(SpherePoint{0, kPi}, 0.0);
    CHECK(line_distance(u, v) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("line_distance is rotation invariant") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    double worst = 0;
    for (int k = 0; k < 300; ++k) {
        TangentLine u = random_line(rng), v = random_line(rng);
        Vec3 axis(gauss(rng), gauss(rng), gauss(rng));
        axis.normalize();
        std::uniform_real_distribution<double> uang(0, 2 * kPi);
        Eigen::Matrix3d g = rotation_matrix(axis, uang(rng));
        double before = line_distance(u, v);
        double after = line_distance(u.rotated(g), v.rotated(g));
        worst = std::max(worst, std::abs(before - after));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("cylinder radius conversions") {
    CHECK(cyl_radius_from_distance(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    double rm = cyl_radius_from_distance(std::sqrt(12.0 / 11.0));
    CHECK(rm == doctest::Approx((3.0 + std::sqrt(33.0)) / 8.0).epsilon(1e-12));
    CHECK(cyl_radius_from_distance(0.0) == 0.0);
    CHECK_THROWS_AS(cyl_radius_from_distance(2.0), input_error);

    CHECK(distance_from_radius(1.0) == doctest::Approx(1.0));
    CHECK(distance_from_radius(1.0 + std::sqrt(2.0)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(distance_from_radius(0.0) == 0.0);

    for (int k = 0; k <= 100; ++k) {
        double r = 0.1 * k;
        CHECK(cyl_radius_from_distance(distance_from_radius(r)) ==
              doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("ball radius from central angle") {
    double t3 = ball_radius_from_angle(2 * kPi / 3);
    CHECK(t3 == doctest::Approx(std::sqrt(3.0) / (2.0 - std::sqrt(3.0))).epsilon(1e-12));
    double neck = ball_radius_from_angle(kPi / 6);
    double neck_ref = (std::sqrt(3.0) - 1.0) / (2 * std::sqrt(2.0) - std::sqrt(3.0) + 1.0);
    CHECK(neck == doctest::Approx(neck_ref).epsilon(1e-12));
    double rmax12 = ball_radius_from_angle(std::acos(1.0 / std::sqrt(5.0)));
    CHECK(rmax12 == doctest::Approx(1.1085085).epsilon(1e-6));
    CHECK(ball_radius_from_angle(kPi / 3) == doctest::Approx(1.0).epsilon(1e-14));

    double prev = 0;
    for (int k = 1; k < 100; ++k) {
        double r = ball_radius_from_angle(k * (kPi - 0.02) / 100 + 0.01);
        CHECK(r > prev);
        prev = r;
    }
    CHECK_THROWS_AS(ball_radius_from_angle(0.0), input_error);
    CHECK_THROWS_AS(ball_radius_from_angle(kPi), input_error);
}
