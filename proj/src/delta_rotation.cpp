#include "critcluster/delta_rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace critcluster {

std::string solid_name(SolidKind k) {
    switch (k) {
        case SolidKind::tetrahedron: return "tetrahedron";
        case SolidKind::octahedron: return "octahedron";
        case SolidKind::cube: return "cube";
        case SolidKind::icosahedron: return "icosahedron";
        case SolidKind::dodecahedron: return "dodecahedron";
    }
    throw input_error("solid_name: bad kind");
}

SolidKind solid_from_name(const std::string& name) {
    for (SolidKind k : {SolidKind::tetrahedron, SolidKind::octahedron, SolidKind::cube,
                        SolidKind::icosahedron, SolidKind::dodecahedron})
        if (solid_name(k) == name) return k;
    throw input_error("unknown solid: " + name);
}

namespace {

const double kGold = (1.0 + std::sqrt(5.0)) / 2.0;

std::vector<Vec3> raw_vertices(SolidKind kind) {
    std::vector<Vec3> v;
    switch (kind) {
        case SolidKind::tetrahedron:
            v = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
            break;
        case SolidKind::octahedron:
            for (int a = 0; a < 3; ++a)
                for (double s : {1.0, -1.0}) {
                    Vec3 x = Vec3::Zero();
                    x[a] = s;
                    v.push_back(x);
                }
            break;
        case SolidKind::cube:
            for (double sx : {1.0, -1.0})
                for (double sy : {1.0, -1.0})
                    for (double sz : {1.0, -1.0}) v.push_back({sx, sy, sz});
            break;
        case SolidKind::icosahedron:
            for (double s1 : {1.0, -1.0})
                for (double s2 : {1.0, -1.0}) {
                    v.push_back({0, s1, s2 * kGold});
                    v.push_back({s1, s2 * kGold, 0});
                    v.push_back({s2 * kGold, 0, s1});
                }
            break;
        case SolidKind::dodecahedron:
            for (double sx : {1.0, -1.0})
                for (double sy : {1.0, -1.0})
                    for (double sz : {1.0, -1.0}) v.push_back({sx, sy, sz});
            for (double s1 : {1.0, -1.0})
                for (double s2 : {1.0, -1.0}) {
                    v.push_back({0, s1 / kGold, s2 * kGold});
                    v.push_back({s1 / kGold, s2 * kGold, 0});
                    v.push_back({s2 * kGold, 0, s1 / kGold});
                }
            break;
    }
    return v;
}

}  // namespace

PlatonicSolid make_solid(SolidKind kind) {
    PlatonicSolid s;
    s.kind = kind;
    s.vertices = raw_vertices(kind);
    const int n = static_cast<int>(s.vertices.size());
    double emin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            emin = std::min(emin, (s.vertices[i] - s.vertices[j]).norm());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((s.vertices[i] - s.vertices[j]).norm() < emin + 1e-9)
                s.edges.emplace_back(i, j);
    double mid = 0.5 * (s.vertices[s.edges[0].first] + s.vertices[s.edges[0].second]).norm();
    for (auto& v : s.vertices) v /= mid;
    for (auto [i, j] : s.edges) {
        double m = 0.5 * (s.vertices[i] + s.vertices[j]).norm();
        if (std::abs(m - 1.0) > 1e-12)
            throw input_error("make_solid: edge midpoints not equidistant");
    }
    return s;
}

LineCluster edge_lines(const PlatonicSolid& s) {
    LineCluster c;
    c.label = solid_name(s.kind) + "_edges";
    for (auto [i, j] : s.edges) {
        Vec3 mid = 0.5 * (s.vertices[i] + s.vertices[j]);
        Vec3 dir = (s.vertices[j] - s.vertices[i]).normalized();
        c.lines.push_back(TangentLine::from_point_dir(mid, dir));
    }
    return c;
}

LineCluster rotate_edges(const LineCluster& c, double delta, bool mirror) {
    LineCluster out;
    out.label = c.label;
    double sense = mirror ? delta : -delta;  // alpha -> alpha + delta
    for (const auto& ln : c.lines) {
        Vec3 d = rotate_about_axis(ln.pos(), sense, ln.dir());
        out.lines.push_back(TangentLine::from_point_dir(ln.pos(), d));
    }
    return out;
}

namespace {

double golden_refine(const std::function<double(double)>& f, double a, double b, bool maximize) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-10) {
        bool pick_c = maximize ? (fc > fd) : (fc < fd);
        if (pick_c) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

SweepResult sweep(const PlatonicSolid& s, double delta_from, double delta_to, int samples,
                  bool mirror) {
    if (samples < 2) throw input_error("sweep: need at least 2 samples");
    if (!(delta_to > delta_from)) throw input_error("sweep: bad range");
    LineCluster base = edge_lines(s);
    auto d_of = [&](double dl) { return min_distance(rotate_edges(base, dl, mirror)); };

    SweepResult out;
    out.samples.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        double dl = delta_from + (delta_to - delta_from) * k / (samples - 1);
        out.samples.emplace_back(dl, d_of(dl));
    }
    for (int k = 1; k + 1 < samples; ++k) {
        double v = out.samples[k].second;
        double vl = out.samples[k - 1].second, vr = out.samples[k + 1].second;
        bool is_max = v > vl && v > vr;
        bool is_min = v < vl && v < vr;
        if (!is_max && !is_min) continue;
        double a = out.samples[k - 1].first, b = out.samples[k + 1].first;
        double x = golden_refine(d_of, a, b, is_max);
        out.extrema.push_back({is_max ? Extremum::maximum : Extremum::minimum, x, d_of(x)});
    }
    return out;
}

SkeletonStructure skeleton_structure(const LineCluster& c, double tol) {
    if (min_distance(c) >= tol)
        throw input_error("skeleton_structure: cluster is not degenerate at this tolerance");
    const int n = c.size();
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (line_distance(c.lines[i], c.lines[j]) < tol) {
                adj[i][j] = adj[j][i] = true;
                parent[find(i)] = find(j);
            }

    SkeletonStructure out;
    out.tol = tol;
    std::vector<std::vector<int>> groups(n);
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    for (auto& g : groups) {
        if (g.empty()) continue;
        SkeletonComponent comp;
        comp.lines = g;
        for (size_t a = 0; a < g.size(); ++a)
            for (size_t b = a + 1; b < g.size(); ++b) {
                if (!adj[g[a]][g[b]]) continue;
                Vec3 pt = line_intersection_point(c.lines[g[a]], c.lines[g[b]]);
                bool dup = false;
                for (const auto& q : comp.intersection_points)
                    if ((q - pt).norm() < 1e-6) dup = true;
                if (!dup) comp.intersection_points.push_back(pt);
            }
        for (size_t a = 0; a < comp.intersection_points.size(); ++a)
            for (size_t b = a + 1; b < comp.intersection_points.size(); ++b)
                comp.point_distances.push_back(
                    (comp.intersection_points[a] - comp.intersection_points[b]).norm());
        std::sort(comp.point_distances.begin(), comp.point_distances.end());
        out.components.push_back(std::move(comp));
    }
    std::sort(out.components.begin(), out.components.end(),
              [](const auto& a, const auto& b) { return a.lines < b.lines; });
    return out;
}

}  // namespace critcluster
