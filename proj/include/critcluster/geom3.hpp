#pragma once

// Core spherical geometry: tangent lines to the unit sphere, their chart
// coordinates (latitude, longitude, bearing), line-line distance and the
// touching-radius conversions for cylinders and balls.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace critcluster {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;

struct chart_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Latitude phi in [-pi/2, pi/2], longitude kappa in [0, 2*pi).
// Greenwich (kappa = 0) lies in the xz-plane with positive x.
struct SpherePoint {
    double phi = 0.0;
    double kappa = 0.0;

    Vec3 embed() const {
        return {std::cos(phi) * std::cos(kappa),
                std::cos(phi) * std::sin(kappa),
                std::sin(phi)};
    }
    static SpherePoint from_vec(const Vec3& v);
};

// Unit tangent pointing toward the north pole; undefined at the poles.
Vec3 north_tangent(const SpherePoint& x);
// Unit tangent pointing east (increasing longitude).
Vec3 east_tangent(const SpherePoint& x);

// Rodrigues rotation about a unit axis, counterclockwise viewed from the
// axis tip (right-hand rule).
Vec3 rotate_about_axis(const Vec3& axis, double angle, const Vec3& v);

Eigen::Matrix3d rotation_matrix(const Vec3& axis, double angle);

// Unoriented line tangent to the unit sphere. Stored as touch point plus
// unit direction; the chart view (phi, kappa, alpha) measures alpha as the
// bearing of the direction from north toward east, canonical in [0, pi).
// alpha is chart-valid only for |phi| < pi/2 - 1e-6.
class TangentLine {
public:
    TangentLine(const SpherePoint& x, double alpha);

    // Pole-safe: accepts any unit touch point with an orthogonal direction.
    static TangentLine from_point_dir(const Vec3& point, const Vec3& dir);

    const Vec3& pos() const { return p_; }
    const Vec3& dir() const { return d_; }

    SpherePoint point() const { return SpherePoint::from_vec(p_); }
    bool chart_valid() const;
    double alpha() const;  // throws chart_error near the poles

    TangentLine rotated(const Eigen::Matrix3d& g) const {
        return TangentLine(g * p_, g * d_, true);
    }

private:
    TangentLine(const Vec3& p, const Vec3& d, bool);
    Vec3 p_;
    Vec3 d_;
};

// Direction vector tau of the chart line (x, alpha):
// tau = cos(alpha) * north + sin(alpha) * east.
Vec3 line_direction(const TangentLine& line);
Vec3 line_direction(const SpherePoint& x, double alpha);

// Euclidean distance between two infinite lines. Uses the determinant
// formula d^2 = det^2[tau', tau'', x''-x'] / |tau' x tau''|^2 with the
// cross-product denominator; falls back to the parallel projection formula
// when |tau' x tau''|^2 < 1e-20.
double line_distance(const TangentLine& u, const TangentLine& v);
double line_distance(const Vec3& p1, const Vec3& d1, const Vec3& p2, const Vec3& d2);

// Point on each line realizing the closest approach; midpoint of the
// common-perpendicular segment. Requires non-parallel lines.
Vec3 line_intersection_point(const TangentLine& u, const TangentLine& v);

// r = d / (2 - d): radius of equal cylinders touching each other when their
// tangent lines are distance d apart. Domain 0 <= d < 2.
double cyl_radius_from_distance(double d);

// d = 2 r / (1 + r), the exact inverse on [0, 2).
double distance_from_radius(double r);

// Radius of two equal balls touching the unit core with touch points
// separated by central angle theta, touching each other:
// r = s / (1 - s), s = sin(theta / 2). Requires s < 1.
double ball_radius_from_angle(double theta);

inline double wrap_angle_2pi(double a) {
    a = std::fmod(a, 2 * kPi);
    if (a < 0) a += 2 * kPi;
    return a;
}
inline double wrap_angle_pi(double a) {
    a = std::fmod(a, kPi);
    if (a < 0) a += kPi;
    return a;
}

}  // namespace critcluster
