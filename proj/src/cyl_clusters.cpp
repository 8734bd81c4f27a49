#include "critcluster/cyl_clusters.hpp"

#include <algorithm>
#include <cmath>

namespace critcluster {

double min_distance(const LineCluster& c) {
    if (c.size() < 2) throw input_error("min_distance: need at least 2 lines");
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.size(); ++i)
        for (int j = i + 1; j < c.size(); ++j)
            best = std::min(best, line_distance(c.lines[i], c.lines[j]));
    return best;
}

std::vector<double> pairwise_distances(const LineCluster& c) {
    std::vector<double> out;
    out.reserve(c.size() * (c.size() - 1) / 2);
    for (int i = 0; i < c.size(); ++i)
        for (int j = i + 1; j < c.size(); ++j)
            out.push_back(line_distance(c.lines[i], c.lines[j]));
    return out;
}

ContactGraph contact_graph(const LineCluster& c, double tol) {
    if (tol <= 0) throw input_error("contact_graph: tol must be positive");
    ContactGraph g;
    g.tol = tol;
    g.min_distance = min_distance(c);
    for (int i = 0; i < c.size(); ++i)
        for (int j = i + 1; j < c.size(); ++j)
            if (line_distance(c.lines[i], c.lines[j]) <= g.min_distance + tol)
                g.edges.emplace_back(i, j);
    return g;
}

LineCluster c6_configuration(double phi, double delta, double kappa) {
    if (std::abs(phi) >= kPi / 2)
        throw chart_error("c6_configuration: |phi| must be < pi/2");
    LineCluster c;
    c.label = "c6_family";
    auto add = [&](double lat, double lon) {
        c.lines.emplace_back(SpherePoint{lat, wrap_angle_2pi(lon)}, delta);
    };
    add(phi, kPi / 6 - kappa);        // A
    add(phi, 5 * kPi / 6 - kappa);    // B
    add(phi, 3 * kPi / 2 - kappa);    // C
    add(-phi, kPi / 2 + kappa);       // D
    add(-phi, 7 * kPi / 6 + kappa);   // E
    add(-phi, 11 * kPi / 6 + kappa);  // F
    return c;
}

GammaAngles gamma(double x) {
    if (!(x > 0.0 && x <= 1.0))
        throw input_error("gamma: x must lie in (0, 1]");
    double poly = 1 + 7 * x + 4 * x * x;
    double sphi = 2 * std::sqrt((1 - x) * x * (1 + x) / poly);
    double tdel = std::sqrt((1 - x) * (1 + 3 * x) / (x * poly));
    double tkap = (x - 1) / std::sqrt((1 + x) * (1 + 3 * x));
    return {std::asin(sphi), std::atan(tdel), std::atan(tkap)};
}

namespace {

const std::array<Vec3, 4> kTetraVerts = {Vec3{1, 1, 1}, Vec3{1, -1, -1},
                                         Vec3{-1, 1, -1}, Vec3{-1, -1, 1}};

LineCluster tetra_edge_lines_rotated(double delta) {
    LineCluster c;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Vec3 mid = 0.5 * (kTetraVerts[i] + kTetraVerts[j]);
            Vec3 dir = (kTetraVerts[j] - kTetraVerts[i]).normalized();
            // alpha -> alpha + delta in the chart == rotation by -delta
            // about the outward radius
            Vec3 d2 = rotate_about_axis(mid.normalized(), -delta, dir);
            c.lines.push_back(TangentLine::from_point_dir(mid, d2));
        }
    return c;
}

}  // namespace

LineCluster o6_configuration() {
    LineCluster c = tetra_edge_lines_rotated(kPi / 4);
    c.label = "o6";
    return c;
}

LineCluster c4_saddle() {
    LineCluster o6 = o6_configuration();
    LineCluster c;
    c.label = "c4_saddle";
    for (const auto& ln : o6.lines)
        if (std::abs(std::abs(ln.pos().z()) - 1.0) > 1e-9) c.lines.push_back(ln);
    return c;
}

LineCluster c4_parallel() {
    LineCluster c;
    c.label = "c4_parallel";
    for (int k = 0; k < 4; ++k)
        c.lines.emplace_back(SpherePoint{0.0, k * kPi / 2}, 0.0);
    return c;
}

namespace {
double line_mismatch(const TangentLine& a, const TangentLine& b) {
    double dp = (a.pos() - b.pos()).norm();
    double dd = std::min((a.dir() - b.dir()).norm(), (a.dir() + b.dir()).norm());
    return std::max(dp, dd);
}
}  // namespace

std::optional<std::vector<int>> match_lineset(const LineCluster& a, const LineCluster& b,
                                              double tol) {
    if (a.size() != b.size()) return std::nullopt;
    std::vector<int> perm(a.size(), -1);
    std::vector<bool> used(b.size(), false);
    for (int i = 0; i < a.size(); ++i) {
        int best = -1;
        double bestv = tol;
        for (int j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            double m = line_mismatch(a.lines[i], b.lines[j]);
            if (m <= bestv) {
                bestv = m;
                best = j;
            }
        }
        if (best < 0) return std::nullopt;
        used[best] = true;
        perm[i] = best;
    }
    return perm;
}

bool same_unoriented_lineset(const LineCluster& a, const LineCluster& b, double tol) {
    return match_lineset(a, b, tol).has_value();
}

LineCluster rotated(const LineCluster& c, const Eigen::Matrix3d& g) {
    LineCluster out;
    out.label = c.label;
    out.lines.reserve(c.lines.size());
    for (const auto& ln : c.lines) out.lines.push_back(ln.rotated(g));
    return out;
}

// ---- chart ----

namespace {
constexpr double kGaugeLatThreshold = kPi / 2 - 0.35;

Eigen::Matrix3d gauge_for_point(const Vec3& p) {
    double phi = std::asin(std::clamp(p.z(), -1.0, 1.0));
    if (std::abs(phi) < kGaugeLatThreshold) return Eigen::Matrix3d::Identity();
    Vec3 axis = Vec3::UnitZ().cross(p);
    if (axis.norm() < 1e-12) axis = Vec3::UnitY();
    return rotation_matrix(axis.normalized(), -phi);
}
}  // namespace

ClusterChart::ClusterChart(LineCluster base) : base_(std::move(base)) {
    gauge_.reserve(base_.lines.size());
    chart0_.reserve(base_.lines.size());
    for (const auto& ln : base_.lines) {
        Eigen::Matrix3d g = gauge_for_point(ln.pos());
        gauge_.push_back(g);
        TangentLine gl = ln.rotated(g);
        SpherePoint x = gl.point();
        chart0_.emplace_back(x.phi, x.kappa, gl.alpha());
    }
}

LineCluster ClusterChart::at(const Eigen::VectorXd& offset) const {
    if (offset.size() != dim()) throw input_error("ClusterChart::at: bad offset size");
    LineCluster out;
    out.label = base_.label;
    out.lines.reserve(base_.lines.size());
    for (int i = 0; i < base_.size(); ++i) {
        double phi = chart0_[i][0] + offset[3 * i];
        double kap = chart0_[i][1] + offset[3 * i + 1];
        double alf = chart0_[i][2] + offset[3 * i + 2];
        if (std::abs(phi) >= kPi / 2 - 1e-6)
            throw chart_error("ClusterChart: pole crossing");
        TangentLine gl(SpherePoint{phi, wrap_angle_2pi(kap)}, alf);
        out.lines.push_back(gl.rotated(gauge_[i].transpose()));
    }
    return out;
}

std::array<Eigen::VectorXd, 3> ClusterChart::rotation_generators() const {
    std::array<Eigen::VectorXd, 3> gens;
    for (int a = 0; a < 3; ++a) {
        Eigen::VectorXd v(dim());
        Vec3 w = Vec3::Zero();
        w[a] = 1.0;
        for (int i = 0; i < base_.size(); ++i) {
            Vec3 wg = gauge_[i] * w;
            TangentLine gl = base_.lines[i].rotated(gauge_[i]);
            SpherePoint x = gl.point();
            Vec3 q = gl.pos();
            Vec3 up = north_tangent(x);
            Vec3 east = east_tangent(x);
            Vec3 xdot = wg.cross(q);
            double dphi = xdot.dot(up);
            double dkap = xdot.dot(east) / std::cos(x.phi);
            double alpha = gl.alpha();
            Vec3 tau = std::cos(alpha) * up + std::sin(alpha) * east;
            Vec3 nu = std::cos(alpha) * east - std::sin(alpha) * up;
            double dalf = wg.cross(tau).dot(nu) + dkap * std::sin(x.phi);
            v[3 * i] = dphi;
            v[3 * i + 1] = dkap;
            v[3 * i + 2] = dalf;
        }
        gens[a] = v;
    }
    return gens;
}

Eigen::MatrixXd ClusterChart::rotation_basis() const {
    auto gens = rotation_generators();
    Eigen::MatrixXd R(dim(), 3);
    for (int a = 0; a < 3; ++a) R.col(a) = gens[a];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(R);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(dim(), 3);
    return Q;
}

Eigen::VectorXd ClusterChart::project_out_rotations(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd Q = rotation_basis();
    return v - Q * (Q.transpose() * v);
}

LineCluster perturb(const LineCluster& c, const Eigen::VectorXd& v, double t) {
    return ClusterChart(c).perturbed(v, t);
}

}  // namespace critcluster
