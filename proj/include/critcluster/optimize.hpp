#pragma once

// Derivative-free ascent of D over configuration charts, seeded
// perturbation probes, and decay-order scans around critical clusters.

#include "critcluster/cyl_clusters.hpp"

#include <cstdint>
#include <vector>

namespace critcluster {

struct FamilyAscentResult {
    double phi = 0, delta = 0, kappa = 0;
    double value = 0;
    std::vector<double> trace;
    bool converged = false;
    long evaluations = 0;
};

struct AscentOptions {
    long budget = 100000;
    std::uint64_t seed = 42;
    double initial_step = 0.1;
    double min_step = 1e-9;
};

// Maximizes (phi, delta, kappa) -> D(c6_configuration(...)) by pattern
// search: coordinate polls plus seeded random polls, step halved after a
// full failed round, doubled (capped) after successes.
FamilyAscentResult ascend_family(double phi, double delta, double kappa,
                                 const AscentOptions& opt = {});

struct FullAscentResult {
    LineCluster cluster;
    double value = 0;
    std::vector<double> trace;
    bool converged = false;
    long evaluations = 0;
};

struct FullAscentOptions {
    long budget = 1000000;
    std::uint64_t seed = 42;
    double initial_step = 0.05;
    double min_step = 1e-9;
    int random_polls = 24;
};

// Pattern search over the full 3L-chart with moves projected onto the
// orthogonal complement of the rotation generators; the chart is re-gauged
// after every accepted step.
FullAscentResult ascend_full(const LineCluster& start, const FullAscentOptions& opt = {});

struct ProbeReport {
    double base = 0;
    double max = 0, min = 0, q25 = 0, q50 = 0, q75 = 0;
    int exceeding_base = 0;
    int samples = 0;
};

// D at N seeded random unit tangent perturbations (orthogonal to the
// rotation generators) of size t. Bit-for-bit reproducible given
// (seed, N, t).
ProbeReport perturbation_probe(const LineCluster& c, int N, double t,
                               std::uint64_t seed = 42);

struct DecayScan {
    double exponent = 0;
    bool refuted = false;  // some step increased D along the ray
    std::vector<std::pair<double, double>> drops;  // (t, D(c) - D(perturbed))
};

// Fits log(D(c) - D(perturb(c, v, t))) against log t on a log-spaced grid
// (default 9 points in [1e-4, 1e-2]).
DecayScan decay_order_scan(const LineCluster& c, const Eigen::VectorXd& v,
                           const std::vector<double>& t_grid = {});

}  // namespace critcluster
