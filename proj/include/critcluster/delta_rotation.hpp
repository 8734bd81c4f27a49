#pragma once

// The delta-rotation process: tangent-line systems on the edge midpoints of
// Platonic solids, the d(delta) sweep with extremum refinement, and the
// skeleton structure of degenerate (d = 0) clusters.

#include "critcluster/cyl_clusters.hpp"
#include "critcluster/geom3.hpp"

#include <string>
#include <vector>

namespace critcluster {

enum class SolidKind { tetrahedron, octahedron, cube, icosahedron, dodecahedron };

std::string solid_name(SolidKind k);
SolidKind solid_from_name(const std::string& name);

struct PlatonicSolid {
    SolidKind kind;
    std::vector<Vec3> vertices;                // scaled: edge midpoints unit
    std::vector<std::pair<int, int>> edges;
};

PlatonicSolid make_solid(SolidKind kind);

// One tangent line per edge (touch point = midpoint, direction = edge).
LineCluster edge_lines(const PlatonicSolid& s);

// Rotate each line's direction by delta about the radius through its touch
// point (alpha -> alpha + delta in the chart); mirror flips the sense.
LineCluster rotate_edges(const LineCluster& c, double delta, bool mirror = false);

struct Extremum {
    enum Kind { maximum, minimum } kind;
    double delta;
    double value;
};

struct SweepResult {
    std::vector<std::pair<double, double>> samples;  // (delta, d)
    std::vector<Extremum> extrema;                   // interior, refined
};

// Uniform grid of D(rotate_edges(., delta)); interior extrema refined by
// golden section to 1e-10 in delta.
SweepResult sweep(const PlatonicSolid& s, double delta_from, double delta_to, int samples,
                  bool mirror = false);

struct SkeletonComponent {
    std::vector<int> lines;
    std::vector<Vec3> intersection_points;   // deduplicated
    std::vector<double> point_distances;     // pairwise, sorted
};

struct SkeletonStructure {
    std::vector<SkeletonComponent> components;
    double tol;
};

// Requires min_distance(c) < tol. Groups mutually near-concurrent lines and
// reports the emergent intersection skeleton per group.
SkeletonStructure skeleton_structure(const LineCluster& c, double tol = 1e-7);

}  // namespace critcluster
