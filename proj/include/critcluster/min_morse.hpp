#pragma once

// Criticality analysis of F(x) = min{F_1(x), ..., F_m(x)} from the
// second-order data (l_u, q_u) of the branches at a candidate point:
// PL-differential, convex-relation criticality test, null space and
// null-index, disjoint-relation partition detection, and certification
// of strict local maximality via the min-of-quadratics condition.

#include "critcluster/ball_clusters.hpp"
#include "critcluster/cyl_clusters.hpp"
#include "critcluster/geom3.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace critcluster {

struct LinearQuadraticBundle {
    int n = 0;                        // ambient dimension
    std::vector<Eigen::VectorXd> l;   // linear forms, one per branch
    std::vector<Eigen::MatrixXd> q;   // symmetric quadratic forms

    int m() const { return static_cast<int>(l.size()); }
    void validate() const;            // throws input_error on shape/symmetry

    double branch_value(int u, const Eigen::VectorXd& x) const {
        return l[u].dot(x) + x.dot(q[u] * x);
    }
    double min_value(const Eigen::VectorXd& x) const;
};

// Delta(v) = min_u l_u(v).
double pl_differential(const LinearQuadraticBundle& b, const Eigen::VectorXd& v);

struct CriticalityResult {
    bool critical = false;
    Eigen::VectorXd lambda;  // convex weights, sum 1, zero outside support
};

// 0 in conv{grad F_u} via an exact-feasibility simplex; the returned
// lambda has Caratheodory-pruned support with coefficients > 1e-9.
CriticalityResult is_critical(const LinearQuadraticBundle& b);

struct NullSpaceResult {
    Eigen::MatrixXd basis;  // n x null_index, orthonormal
    int null_index = 0;
};

// Common kernel of the l_u, singular values below 1e-8 * sigma_max
// treated as zero.
NullSpaceResult null_space(const LinearQuadraticBundle& b);

// Orthonormal basis of span(E) minus span(rot) (projection of E onto the
// orthogonal complement of the columns of rot).
Eigen::MatrixXd quotient_basis(const Eigen::MatrixXd& E, const Eigen::MatrixXd& rot);

struct PartitionResult {
    bool structure_found = false;      // disjoint-support split detected
    int k = 0;                         // dim of the relation space
    std::vector<std::vector<int>> blocks;
    std::vector<Eigen::VectorXd> lambdas;  // per block, indexed like the block
    std::vector<bool> lambda_positive;
    std::vector<int> leftover;         // active indices in no relation
    bool rank_additive = false;
    std::string note;
};

// Splits the relation space into blocks with pairwise disjoint supports,
// one relation per block (conditions (A)-(C)). Relations are normalized so
// the smallest-magnitude support coefficient is 1.
PartitionResult detect_partition(const LinearQuadraticBundle& b);

enum class CertStatus { certified_max, not_certified, refuted };

struct RefutationWitness {
    Eigen::VectorXd xi;     // null direction with min_p Q_p(xi) > 0
    Eigen::VectorXd w;      // second-order correction
    double growth = 0.0;    // guaranteed min growth rate of F along the curve
    Eigen::VectorXd point;  // explicit point with F(point) > 0
    double value = 0.0;     // F at that point
};

struct Certificate {
    CertStatus status = CertStatus::not_certified;
    double margin = 0.0;  // -sup M for certified, sup M found for others
    std::optional<RefutationWitness> witness;
    std::string note;
};

struct CertifyOptions {
    int samples = 200000;
    std::uint64_t seed = 42;
    int max_dim = 12;
};

// Theorem-style test: M(xi) = min_p Q_p(xi) on the unit sphere of E
// (columns of Ebasis), by seeded sampling plus local ascent refinement.
// sup M < -1e-8 certifies a strict local max; a direction with
// M(xi) > 1e-8 is turned into an explicit verified ascent curve.
Certificate certify_local_max(const LinearQuadraticBundle& b,
                              const PartitionResult& part,
                              const Eigen::MatrixXd& Ebasis,
                              const CertifyOptions& opt = {});

// k = 1 shortcut: sum(lambda_u q_u) negative definite on E (iff sharp local
// max for linear-quadratic bundles).
bool k1_negative_definite(const LinearQuadraticBundle& b,
                          const PartitionResult& part,
                          const Eigen::MatrixXd& Ebasis);

// Aggregated report in spec shape, produced by analyze().
struct CriticalityReport {
    bool is_critical = false;
    Eigen::VectorXd lambda;
    PartitionResult partition;
    NullSpaceResult null_raw;
    int null_index_mod_so3 = -1;  // -1 when no rotation quotient applies
    Certificate certificate;
};

// Runs the full pipeline. When rot (n x 3 generators) is given, E is
// quotiented by it before certification.
CriticalityReport analyze(const LinearQuadraticBundle& b,
                          const Eigen::MatrixXd* rot = nullptr,
                          const CertifyOptions& opt = {});

// ---- bundle extraction from clusters ----

struct ClusterBundle {
    LinearQuadraticBundle bundle;
    std::vector<std::pair<int, int>> active_pairs;
    double base_value = 0.0;              // D or delta at the base point
    Eigen::MatrixXd rotation_generators;  // n x 3 chart velocities
};

// Second-order model of the active pairwise line distances in the cluster
// chart. Gradients and Hessians by Richardson-extrapolated central
// differences with h = 1e-4. Throws input_error when two lines intersect.
ClusterBundle bundle_from_line_cluster(const LineCluster& c, double tol = 1e-9);

// Same for ball touch-point configurations in the (phi, kappa) chart.
ClusterBundle bundle_from_ball_config(const BallTouchConfig& p, double tol = 1e-9);

}  // namespace critcluster
