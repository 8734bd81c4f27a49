#include "critcluster/ball_clusters.hpp"
#include "critcluster/min_morse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace critcluster {

double delta(const BallTouchConfig& p) {
    if (p.size() < 2) throw input_error("delta: need at least 2 points");
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p.size(); ++i)
        for (int j = i + 1; j < p.size(); ++j)
            best = std::min(best, (p.points[i] - p.points[j]).norm());
    return best;
}

std::vector<std::pair<int, int>> ball_contacts(const BallTouchConfig& p, double tol) {
    double d0 = delta(p);
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < p.size(); ++i)
        for (int j = i + 1; j < p.size(); ++j)
            if ((p.points[i] - p.points[j]).norm() <= d0 + tol) out.emplace_back(i, j);
    return out;
}

double hausdorff_distance(const BallTouchConfig& p, const BallTouchConfig& q) {
    auto one_sided = [](const BallTouchConfig& a, const BallTouchConfig& b) {
        double worst = 0.0;
        for (const auto& x : a.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& y : b.points) best = std::min(best, (x - y).norm());
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(p, q), one_sided(q, p));
}

double quotient_distance(const BallTouchConfig& p, const BallTouchConfig& q,
                         const QuotientDistanceOptions& opt) {
    auto value = [&](const Vec3& w) {
        Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
        double a = w.norm();
        if (a > 1e-300) g = rotation_matrix(w / a, a);
        BallTouchConfig gq;
        gq.points.reserve(q.points.size());
        for (const auto& y : q.points) gq.points.push_back(g * y);
        return hausdorff_distance(p, gq);
    };
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uang(0.0, kPi);
    double best = value(Vec3::Zero());
    for (int s = 0; s < opt.starts; ++s) {
        Vec3 w;
        if (s == 0)
            w = Vec3::Zero();
        else {
            Vec3 ax(gauss(rng), gauss(rng), gauss(rng));
            ax.normalize();
            w = ax * uang(rng);
        }
        double f = value(w);
        double step = 0.3;
        while (step > 1e-8) {
            bool improved = false;
            for (int a = 0; a < 3 && !improved; ++a)
                for (double sgn : {1.0, -1.0}) {
                    Vec3 cand = w;
                    cand[a] += sgn * step;
                    double fc = value(cand);
                    if (fc < f - 1e-15) {
                        w = cand;
                        f = fc;
                        improved = true;
                        break;
                    }
                }
            if (!improved) step *= 0.5;
        }
        best = std::min(best, f);
    }
    return best;
}

namespace {

const double kGold = (1.0 + std::sqrt(5.0)) / 2.0;

BallTouchConfig icosahedron12() {
    BallTouchConfig c;
    c.label = "I12";
    for (double s1 : {1.0, -1.0})
        for (double s2 : {1.0, -1.0}) {
            c.points.push_back(Vec3(0, s1, s2 * kGold).normalized());
            c.points.push_back(Vec3(s1, s2 * kGold, 0).normalized());
            c.points.push_back(Vec3(s2 * kGold, 0, s1).normalized());
        }
    return c;
}

double a66_latitude() {
    // ring edge (= cos(phi)) equals the cross edge between the offset rings
    auto cross_edge = [](double phi) {
        SpherePoint a{phi, 0.0}, b{-phi, kPi / 6};
        return (a.embed() - b.embed()).norm();
    };
    double lo = 1e-6, hi = kPi / 2 - 1e-6;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (std::cos(mid) - cross_edge(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

BallTouchConfig antiprism66() {
    BallTouchConfig c;
    c.label = "A66";
    double phi = a66_latitude();
    for (int k = 0; k < 6; ++k) {
        c.points.push_back(SpherePoint{phi, k * kPi / 3}.embed());
        c.points.push_back(SpherePoint{-phi, k * kPi / 3 + kPi / 6}.embed());
    }
    return c;
}

BallTouchConfig necklace12() {
    BallTouchConfig c;
    c.label = "necklace12";
    for (int k = 0; k < 12; ++k) c.points.push_back(SpherePoint{0.0, k * kPi / 6}.embed());
    return c;
}

BallTouchConfig fcc12() {
    BallTouchConfig c;
    c.label = "FCC";
    const int planes[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (auto [i, j] : planes)
        for (double si : {1.0, -1.0})
            for (double sj : {1.0, -1.0}) {
                Vec3 v = Vec3::Zero();
                v[i] = si;
                v[j] = sj;
                c.points.push_back(v / std::sqrt(2.0));
            }
    return c;
}

BallTouchConfig hcp12() {
    BallTouchConfig c;
    c.label = "HCP";
    for (int k = 0; k < 6; ++k) c.points.push_back(SpherePoint{0.0, k * kPi / 3}.embed());
    double lat = std::asin(std::sqrt(2.0 / 3.0));
    for (int k = 0; k < 3; ++k) {
        double az = kPi / 6 + k * 2 * kPi / 3;
        c.points.push_back(SpherePoint{lat, az}.embed());
        c.points.push_back(SpherePoint{-lat, az}.embed());
    }
    return c;
}

BallTouchConfig t3() {
    BallTouchConfig c;
    c.label = "T3";
    for (int k = 0; k < 3; ++k) c.points.push_back(SpherePoint{0.0, k * 2 * kPi / 3}.embed());
    return c;
}

BallTouchConfig flex5() {
    BallTouchConfig c;
    c.label = "flex5";
    c.points.push_back(Vec3(0, 0, 1));
    c.points.push_back(Vec3(0, 0, -1));
    for (int k = 0; k < 3; ++k) c.points.push_back(SpherePoint{0.0, k * 2 * kPi / 3}.embed());
    return c;
}

}  // namespace

std::vector<std::string> ball_cluster_names() {
    return {"I12", "A66", "necklace12", "FCC", "HCP", "T3", "flex5"};
}

BallTouchConfig named_ball_cluster(const std::string& name) {
    if (name == "I12") return icosahedron12();
    if (name == "A66") return antiprism66();
    if (name == "necklace12") return necklace12();
    if (name == "FCC") return fcc12();
    if (name == "HCP") return hcp12();
    if (name == "T3") return t3();
    if (name == "flex5") return flex5();
    throw input_error("unknown ball cluster: " + name);
}

// ---- chart ----

namespace {
constexpr double kGaugeLatThreshold = kPi / 2 - 0.35;

Eigen::Matrix3d ball_gauge(const Vec3& p) {
    double phi = std::asin(std::clamp(p.z(), -1.0, 1.0));
    if (std::abs(phi) < kGaugeLatThreshold) return Eigen::Matrix3d::Identity();
    Vec3 axis = Vec3::UnitZ().cross(p);
    if (axis.norm() < 1e-12) axis = Vec3::UnitY();
    return rotation_matrix(axis.normalized(), -phi);
}
}  // namespace

BallChart::BallChart(BallTouchConfig base) : base_(std::move(base)) {
    for (const auto& p : base_.points) {
        Eigen::Matrix3d g = ball_gauge(p);
        gauge_.push_back(g);
        SpherePoint x = SpherePoint::from_vec(g * p);
        chart0_.emplace_back(x.phi, x.kappa);
    }
}

BallTouchConfig BallChart::at(const Eigen::VectorXd& offset) const {
    if (offset.size() != dim()) throw input_error("BallChart::at: bad offset size");
    BallTouchConfig out;
    out.label = base_.label;
    out.points.reserve(base_.points.size());
    for (int i = 0; i < base_.size(); ++i) {
        double phi = chart0_[i][0] + offset[2 * i];
        double kap = chart0_[i][1] + offset[2 * i + 1];
        if (std::abs(phi) >= kPi / 2 - 1e-6) throw chart_error("BallChart: pole crossing");
        out.points.push_back(gauge_[i].transpose() * SpherePoint{phi, kap}.embed());
    }
    return out;
}

BallTouchConfig BallChart::perturbed_geodesic(const Eigen::VectorXd& v, double t) const {
    if (v.size() != dim()) throw input_error("BallChart: bad vector size");
    BallTouchConfig out;
    out.label = base_.label;
    for (int i = 0; i < base_.size(); ++i) {
        SpherePoint x{chart0_[i][0], chart0_[i][1]};
        Vec3 q = x.embed();
        Vec3 w = v[2 * i] * north_tangent(x) + v[2 * i + 1] * std::cos(x.phi) * east_tangent(x);
        double speed = w.norm();
        Vec3 moved = q;
        if (speed > 1e-300)
            moved = std::cos(speed * t) * q + std::sin(speed * t) * (w / speed);
        out.points.push_back(gauge_[i].transpose() * moved);
    }
    return out;
}

std::array<Eigen::VectorXd, 3> BallChart::rotation_generators() const {
    std::array<Eigen::VectorXd, 3> gens;
    for (int a = 0; a < 3; ++a) {
        Eigen::VectorXd v(dim());
        Vec3 w = Vec3::Zero();
        w[a] = 1.0;
        for (int i = 0; i < base_.size(); ++i) {
            Vec3 wg = gauge_[i] * w;
            SpherePoint x{chart0_[i][0], chart0_[i][1]};
            Vec3 q = x.embed();
            Vec3 xdot = wg.cross(q);
            v[2 * i] = xdot.dot(north_tangent(x));
            v[2 * i + 1] = xdot.dot(east_tangent(x)) / std::cos(x.phi);
        }
        gens[a] = v;
    }
    return gens;
}

Eigen::MatrixXd BallChart::rotation_matrix_generators() const {
    auto gens = rotation_generators();
    Eigen::MatrixXd R(dim(), 3);
    for (int a = 0; a < 3; ++a) R.col(a) = gens[a];
    return R;
}

Eigen::MatrixXd BallChart::rotation_basis() const {
    Eigen::MatrixXd R = rotation_matrix_generators();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(R);
    return qr.householderQ() * Eigen::MatrixXd::Identity(dim(), 3);
}

Eigen::VectorXd BallChart::point_motions(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out(base_.size());
    for (int i = 0; i < base_.size(); ++i)
        out[i] = std::hypot(v[2 * i], v[2 * i + 1] * std::cos(chart0_[i][0]));
    return out;
}

// ---- probes ----

double t3_curve_drop(double t) {
    return std::sqrt(3.0) - std::sqrt(2.0 + std::cos(t));
}

PlProbeReport pl_maximality_probe(const BallTouchConfig& p, const PlProbeOptions& opt) {
    BallChart chart(p);
    Eigen::MatrixXd Q = chart.rotation_basis();
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double base = delta(p);

    PlProbeReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    rep.max_ratio = -std::numeric_limits<double>::infinity();
    std::vector<double> radii = {opt.radius, opt.radius / 2, opt.radius / 4, opt.radius / 8};
    std::vector<double> mean_drop(radii.size(), 0.0);
    std::vector<int> counted(radii.size(), 0);
    QuotientDistanceOptions qopt;
    qopt.starts = 8;
    qopt.seed = opt.seed + 1;

    for (int s = 0; s < opt.samples; ++s) {
        Eigen::VectorXd v(chart.dim());
        for (int i = 0; i < v.size(); ++i) v[i] = gauss(rng);
        v -= Q * (Q.transpose() * v);
        Eigen::VectorXd motions = chart.point_motions(v);
        double mmax = motions.maxCoeff();
        if (mmax < 1e-12) continue;
        v /= mmax;  // max point speed 1: hausdorff ~ radius
        for (size_t r = 0; r < radii.size(); ++r) {
            BallTouchConfig pp = chart.perturbed_geodesic(v, radii[r]);
            double drop = base - delta(pp);
            mean_drop[r] += std::max(drop, 0.0);
            counted[r] += 1;
            if (r == 0) {
                double d = quotient_distance(p, pp, qopt);
                if (d > 1e-12) {
                    double ratio = drop / d;
                    rep.min_ratio = std::min(rep.min_ratio, ratio);
                    rep.max_ratio = std::max(rep.max_ratio, ratio);
                    rep.samples += 1;
                }
            }
        }
    }
    // slope of log(mean drop) vs log(radius)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (size_t r = 0; r < radii.size(); ++r) {
        if (counted[r] == 0 || mean_drop[r] <= 0) continue;
        double lx = std::log(radii[r]);
        double ly = std::log(mean_drop[r] / counted[r]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++npts;
    }
    if (npts >= 2) rep.fitted_exponent = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    return rep;
}

// ---- unlocking direction ----

namespace {

// representative of v + span(R) with zero motion at the given points
Eigen::VectorXd zero_at(const BallChart& chart, const Eigen::MatrixXd& R,
                        const Eigen::VectorXd& v, const std::vector<int>& pts) {
    Eigen::MatrixXd A(2 * pts.size(), 3);
    Eigen::VectorXd b(2 * pts.size());
    for (size_t k = 0; k < pts.size(); ++k) {
        int i = pts[k];
        // scale the kappa row by cos(phi) so residuals are geometric speeds
        BallTouchConfig base = chart.base();
        SpherePoint x = SpherePoint::from_vec(ball_gauge(base.points[i]) * base.points[i]);
        double cphi = std::cos(x.phi);
        A.row(2 * k) = R.row(2 * i);
        b[2 * k] = -v[2 * i];
        A.row(2 * k + 1) = R.row(2 * i + 1) * cphi;
        b[2 * k + 1] = -v[2 * i + 1] * cphi;
    }
    Eigen::Vector3d cvec = A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    return v + R * cvec;
}

std::vector<int> fixed_set_of(const BallChart& chart, Eigen::VectorXd& vv) {
    Eigen::VectorXd m = chart.point_motions(vv);
    double n = m.norm();
    if (n < 1e-12) return {};
    vv /= n;
    m = chart.point_motions(vv);
    std::vector<int> out;
    for (int i = 0; i < m.size(); ++i)
        if (m[i] < 1e-9) out.push_back(i);
    return out;
}

}  // namespace

UnlockReport unlock_direction(const BallTouchConfig& p) {
    ClusterBundle cb = bundle_from_ball_config(p);
    NullSpaceResult ns = null_space(cb.bundle);
    Eigen::MatrixXd Emod = quotient_basis(ns.basis, cb.rotation_generators);
    if (Emod.cols() != 1) {
        throw structure_error("unlock_direction: null space mod SO(3) has dimension " +
                              std::to_string(Emod.cols()) + ", expected 1");
    }
    BallChart chart(p);
    Eigen::MatrixXd R = cb.rotation_generators;

    UnlockReport rep;
    rep.null_index_mod_so3 = 1;
    Eigen::VectorXd v0 = Emod.col(0);
    {
        Eigen::VectorXd tmp = v0;
        fixed_set_of(chart, tmp);  // normalizes to unit motion norm
        rep.generator = tmp;
    }

    // enumerate stationary sets attainable inside the class v0 + span(R)
    std::map<std::vector<int>, Eigen::VectorXd> reps;
    {
        Eigen::VectorXd tmp = v0;
        std::vector<int> fs = fixed_set_of(chart, tmp);
        reps[fs] = tmp;
    }
    for (int i = 0; i < p.size(); ++i)
        for (int j = i + 1; j < p.size(); ++j) {
            Eigen::VectorXd vv = zero_at(chart, R, v0, {i, j});
            std::vector<int> fs = fixed_set_of(chart, vv);
            if (fs.empty()) continue;
            auto it = reps.find(fs);
            if (it == reps.end()) reps[fs] = vv;
        }

    // inclusion-maximal stationary sets
    std::vector<std::vector<int>> sets;
    for (const auto& [fs, vv] : reps)
        if (!fs.empty()) sets.push_back(fs);
    std::vector<std::vector<int>> maximal;
    for (const auto& s : sets) {
        bool contained = false;
        for (const auto& t : sets)
            if (s != t && std::includes(t.begin(), t.end(), s.begin(), s.end()))
                contained = true;
        if (!contained) maximal.push_back(s);
    }
    std::sort(maximal.begin(), maximal.end(),
              [](const auto& a, const auto& b) {
                  return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
    rep.maximal_fixed_sets = maximal;

    // canonical representative: smallest inclusion-maximal stationary set
    if (!maximal.empty()) {
        rep.canonical = reps[maximal.front()];
        rep.fixed_count = static_cast<int>(maximal.front().size());
    } else {
        rep.canonical = rep.generator;
        rep.fixed_count = 0;
    }
    rep.motions = chart.point_motions(rep.canonical);

    // growth along the direction: fit exponents with the per-point
    // exponential map at the orthogonal-slice representative
    auto contacts = cb.active_pairs;
    double base = cb.base_value;
    std::vector<double> ts = {4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4};
    rep.all_responsive_grow = true;
    for (auto [a, b2] : contacts) {
        std::vector<double> lx, ly;
        bool shrunk = false, constant = true;
        for (double t : ts) {
            BallTouchConfig pp = chart.perturbed_geodesic(rep.generator, t);
            double g = (pp.points[a] - pp.points[b2]).norm() - base;
            if (g < -1e-12) shrunk = true;
            if (std::abs(g) > 1e-11) constant = false;
            if (g > 0) {
                lx.push_back(std::log(t));
                ly.push_back(std::log(g));
            }
        }
        if (constant) {
            rep.constant_pairs.emplace_back(a, b2);
            continue;
        }
        if (shrunk || lx.size() < 3) {
            rep.all_responsive_grow = false;
            rep.growth_exponents.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t k = 0; k < lx.size(); ++k) {
            sx += lx[k];
            sy += ly[k];
            sxx += lx[k] * lx[k];
            sxy += lx[k] * ly[k];
        }
        double n = static_cast<double>(lx.size());
        rep.growth_exponents.push_back((n * sxy - sx * sy) / (n * sxx - sx * sx));
    }
    return rep;
}

}  // namespace critcluster
