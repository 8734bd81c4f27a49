#pragma once

// Configurations of touch points on the unit sphere (P_n): the minimum
// pairwise chordal distance delta, Hausdorff/quotient metrics, the named
// 12-ball clusters, PL-maximality probes and unlocking-direction
// extraction for FCC/HCP.

#include "critcluster/geom3.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace critcluster {

struct BallTouchConfig {
    std::vector<Vec3> points;  // unit vectors
    std::string label;

    int size() const { return static_cast<int>(points.size()); }
};

// min over i != j of the chordal distance |x_i - x_j|.
double delta(const BallTouchConfig& p);

std::vector<std::pair<int, int>> ball_contacts(const BallTouchConfig& p, double tol = 1e-9);

// Two-sided Hausdorff distance of the embedded point sets.
double hausdorff_distance(const BallTouchConfig& p, const BallTouchConfig& q);

struct QuotientDistanceOptions {
    int starts = 32;
    std::uint64_t seed = 42;
};

// Approximate inf over g in SO(3) of hausdorff_distance(p, g q): multi-start
// local descent over rotation parameters. Upper bound on the true distance;
// includes the identity start.
double quotient_distance(const BallTouchConfig& p, const BallTouchConfig& q,
                         const QuotientDistanceOptions& opt = {});

// Registry: I12, A66, necklace12, FCC, HCP, T3, flex5.
BallTouchConfig named_ball_cluster(const std::string& name);
std::vector<std::string> ball_cluster_names();

// Chart (dphi, dkappa) per point with per-point gauges for pole safety.
class BallChart {
public:
    explicit BallChart(BallTouchConfig base);

    const BallTouchConfig& base() const { return base_; }
    int dim() const { return 2 * base_.size(); }

    BallTouchConfig at(const Eigen::VectorXd& offset) const;
    BallTouchConfig perturbed(const Eigen::VectorXd& v, double t) const { return at(t * v); }

    // Each point moved along its great circle (per-point exponential map).
    BallTouchConfig perturbed_geodesic(const Eigen::VectorXd& v, double t) const;

    std::array<Eigen::VectorXd, 3> rotation_generators() const;
    Eigen::MatrixXd rotation_matrix_generators() const;  // dim x 3
    Eigen::MatrixXd rotation_basis() const;

    // Geometric speed of each point under chart velocity v.
    Eigen::VectorXd point_motions(const Eigen::VectorXd& v) const;

private:
    BallTouchConfig base_;
    std::vector<Eigen::Matrix3d> gauge_;
    std::vector<Eigen::Vector2d> chart0_;
};

struct PlProbeReport {
    double min_ratio = 0.0;   // min over samples of (delta(p)-delta(p'))/d(p,p')
    double max_ratio = 0.0;
    double fitted_exponent = 0.0;  // log-log slope of the mean drop vs radius
    int samples = 0;
};

struct PlProbeOptions {
    int samples = 200;
    double radius = 1e-3;
    std::uint64_t seed = 42;
};

// Random perturbations at controlled quotient distance ~ radius; reports
// drop/distance ratios and the fitted decay exponent over a radius ladder.
PlProbeReport pl_maximality_probe(const BallTouchConfig& p, const PlProbeOptions& opt = {});

// The T3 witness curve: one point moved to latitude t; exact quadratic decay.
double t3_curve_drop(double t);

struct UnlockReport {
    Eigen::VectorXd generator;        // orthogonal-slice representative, unit motion norm
    Eigen::VectorXd canonical;        // representative with the paper's fixed count
    Eigen::VectorXd motions;          // per-point speeds of the canonical representative
    int fixed_count = 0;              // stationary points of the canonical representative
    std::vector<std::vector<int>> maximal_fixed_sets;
    std::vector<double> growth_exponents;           // per responsive contact
    std::vector<std::pair<int, int>> constant_pairs;  // contacts frozen by the motion
    bool all_responsive_grow = false;
    int null_index_mod_so3 = 1;
};

struct structure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requires the config's null space mod SO(3) to be one-dimensional (throws
// structure_error with the actual dimension otherwise). The canonical
// representative realizes the smallest inclusion-maximal stationary set
// (6 points for FCC, 3 for HCP); growth exponents are fitted along a
// representative whose responsive contacts all grow, using the per-point
// exponential map.
UnlockReport unlock_direction(const BallTouchConfig& p);

}  // namespace critcluster
