#include "critcluster/geom3.hpp"

#include <algorithm>

namespace critcluster {

namespace {
constexpr double kPoleMargin = 1e-6;
constexpr double kUnitTol = 1e-9;
}  // namespace

SpherePoint SpherePoint::from_vec(const Vec3& v) {
    double z = std::clamp(v.z(), -1.0, 1.0);
    SpherePoint s;
    s.phi = std::asin(z);
    s.kappa = wrap_angle_2pi(std::atan2(v.y(), v.x()));
    return s;
}

Vec3 north_tangent(const SpherePoint& x) {
    return {-std::sin(x.phi) * std::cos(x.kappa),
            -std::sin(x.phi) * std::sin(x.kappa),
            std::cos(x.phi)};
}

Vec3 east_tangent(const SpherePoint& x) {
    return {-std::sin(x.kappa), std::cos(x.kappa), 0.0};
}

Vec3 rotate_about_axis(const Vec3& axis, double angle, const Vec3& v) {
    if (std::abs(axis.norm() - 1.0) > kUnitTol)
        throw input_error("rotate_about_axis: axis must be a unit vector");
    double c = std::cos(angle), s = std::sin(angle);
    return v * c + axis.cross(v) * s + axis * (axis.dot(v)) * (1.0 - c);
}

Eigen::Matrix3d rotation_matrix(const Vec3& axis, double angle) {
    return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

TangentLine::TangentLine(const Vec3& p, const Vec3& d, bool) : p_(p), d_(d) {
    p_.normalize();
    // remove any drift off the tangent plane, keep the direction unit
    d_ -= p_ * p_.dot(d_);
    d_.normalize();
    // canonical unoriented sign: first significant component positive
    for (int k = 2; k >= 0; --k) {
        if (std::abs(d_[k]) > 1e-12) {
            if (d_[k] < 0) d_ = -d_;
            break;
        }
    }
}

TangentLine::TangentLine(const SpherePoint& x, double alpha)
    : TangentLine(x.embed(), line_direction(x, alpha), true) {
    if (std::abs(x.phi) >= kPi / 2 - kPoleMargin)
        throw chart_error("TangentLine: chart requires |phi| < pi/2 - 1e-6");
}

TangentLine TangentLine::from_point_dir(const Vec3& point, const Vec3& dir) {
    if (std::abs(point.norm() - 1.0) > kUnitTol)
        throw input_error("TangentLine: touch point must be on the unit sphere");
    Vec3 d = dir;
    if (d.norm() < kUnitTol)
        throw input_error("TangentLine: zero direction");
    d.normalize();
    if (std::abs(point.normalized().dot(d)) > 1e-6)
        throw input_error("TangentLine: direction not tangent to the sphere");
    return TangentLine(point, d, true);
}

bool TangentLine::chart_valid() const {
    return std::abs(p_.z()) < std::sin(kPi / 2 - kPoleMargin);
}

double TangentLine::alpha() const {
    if (!chart_valid())
        throw chart_error("TangentLine::alpha: touch point too close to a pole");
    SpherePoint x = point();
    double a = std::atan2(d_.dot(east_tangent(x)), d_.dot(north_tangent(x)));
    return wrap_angle_pi(a);
}

Vec3 line_direction(const SpherePoint& x, double alpha) {
    if (std::abs(x.phi) >= kPi / 2 - kPoleMargin)
        throw chart_error("line_direction: |phi| too close to pi/2");
    return std::cos(alpha) * north_tangent(x) + std::sin(alpha) * east_tangent(x);
}

Vec3 line_direction(const TangentLine& line) { return line.dir(); }

double line_distance(const Vec3& p1, const Vec3& d1, const Vec3& p2, const Vec3& d2) {
    Vec3 w = p2 - p1;
    Vec3 n = d1.cross(d2);
    double nn = n.squaredNorm();
    if (nn < 1e-20) {
        // parallel: perpendicular offset
        return (w - d1 * w.dot(d1)).norm();
    }
    return std::abs(n.dot(w)) / std::sqrt(nn);
}

double line_distance(const TangentLine& u, const TangentLine& v) {
    return line_distance(u.pos(), u.dir(), v.pos(), v.dir());
}

Vec3 line_intersection_point(const TangentLine& u, const TangentLine& v) {
    // closest points: solve [1 -c; -c 1] [s;t] = [w.d1; -w.d2]
    Vec3 w = v.pos() - u.pos();
    double c = u.dir().dot(v.dir());
    double det = 1.0 - c * c;
    if (det < 1e-16)
        throw input_error("line_intersection_point: lines are parallel");
    double s = (w.dot(u.dir()) - c * w.dot(v.dir())) / det;
    double t = (c * w.dot(u.dir()) - w.dot(v.dir())) / det;
    return 0.5 * ((u.pos() + s * u.dir()) + (v.pos() + t * v.dir()));
}

double cyl_radius_from_distance(double d) {
    if (d < 0.0 || d >= 2.0)
        throw input_error("cyl_radius_from_distance: need 0 <= d < 2");
    return d / (2.0 - d);
}

double distance_from_radius(double r) {
    if (r < 0.0)
        throw input_error("distance_from_radius: need r >= 0");
    return 2.0 * r / (1.0 + r);
}

double ball_radius_from_angle(double theta) {
    if (theta <= 0.0 || theta > kPi)
        throw input_error("ball_radius_from_angle: need 0 < theta <= pi");
    double s = std::sin(theta / 2);
    if (s >= 1.0)
        throw input_error("ball_radius_from_angle: sin(theta/2) must be < 1");
    return s / (1.0 - s);
}

}  // namespace critcluster
