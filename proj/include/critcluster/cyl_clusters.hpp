#pragma once

// Clusters of tangent lines (points of M^L), the min-distance function D,
// the C6(phi, delta, kappa) family with its curve gamma, and the named
// six- and four-cylinder clusters.

#include "critcluster/geom3.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace critcluster {

struct LineCluster {
    std::vector<TangentLine> lines;
    std::string label;

    int size() const { return static_cast<int>(lines.size()); }
};

struct ContactGraph {
    std::vector<std::pair<int, int>> edges;
    double tol = 0.0;
    double min_distance = 0.0;
};

// D(m) = min over pairs of line_distance. Requires at least 2 lines.
double min_distance(const LineCluster& c);

// All 15 (or n-choose-2) pairwise distances, indexed (i, j), i < j.
std::vector<double> pairwise_distances(const LineCluster& c);

ContactGraph contact_graph(const LineCluster& c, double tol = 1e-9);

// Eq.-style C6 family: lines A,B,C at latitude +phi with bearings delta,
// D,E,F at -phi; stored in order A,B,C,D,E,F.
LineCluster c6_configuration(double phi, double delta, double kappa);

struct GammaAngles {
    double phi;
    double delta;
    double kappa;
};

// Closed-form parameterization of the unlocking curve, x in (0, 1].
// phi, delta >= 0 and kappa chosen in (-pi/2, 0].
GammaAngles gamma(double x);

inline LineCluster gamma_cluster(double x) {
    GammaAngles g = gamma(x);
    LineCluster c = c6_configuration(g.phi, g.delta, g.kappa);
    c.label = "gamma";
    return c;
}

// Six unit-cylinder lines at the octahedron vertices: tetrahedron edge
// lines rotated by pi/4 about the radii through the edge midpoints.
LineCluster o6_configuration();

// o6 minus the two lines touching at (0,0,+-1); D = 1.
LineCluster c4_saddle();

// Four vertical lines at equator longitudes {0, pi/2, pi, 3pi/2}; D = sqrt(2).
LineCluster c4_parallel();

// True when the two clusters consist of the same unoriented lines up to
// permutation (greedy nearest matching at tolerance tol).
bool same_unoriented_lineset(const LineCluster& a, const LineCluster& b, double tol = 1e-9);

// Permutation mapping lines of a onto lines of b, if one exists at tol.
std::optional<std::vector<int>> match_lineset(const LineCluster& a, const LineCluster& b,
                                              double tol = 1e-9);

LineCluster rotated(const LineCluster& c, const Eigen::Matrix3d& g);

// Chart on M^L around a base cluster: per line (dphi, dkappa, dalpha),
// applied in a per-line gauge frame so that clusters touching near the
// poles (O6, Platonic edge systems) still get a valid chart.
class ClusterChart {
public:
    explicit ClusterChart(LineCluster base);

    const LineCluster& base() const { return base_; }
    int dim() const { return 3 * base_.size(); }

    // base shifted by absolute chart offsets; throws chart_error on pole exit
    LineCluster at(const Eigen::VectorXd& offset) const;

    LineCluster perturbed(const Eigen::VectorXd& v, double t) const {
        return at(t * v);
    }

    // Chart velocities of the global rotations about x, y, z.
    std::array<Eigen::VectorXd, 3> rotation_generators() const;

    // Orthonormal 3L x 3 basis of the span of the rotation generators.
    Eigen::MatrixXd rotation_basis() const;

    // Component of v orthogonal to all rotation generators.
    Eigen::VectorXd project_out_rotations(const Eigen::VectorXd& v) const;

private:
    LineCluster base_;
    std::vector<Eigen::Matrix3d> gauge_;
    std::vector<Eigen::Vector3d> chart0_;  // (phi, kappa, alpha) in gauge frame
};

// Convenience one-shot perturbation (builds a chart each call).
LineCluster perturb(const LineCluster& c, const Eigen::VectorXd& v, double t);

}  // namespace critcluster
