#include "critcluster/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace critcluster {

FamilyAscentResult ascend_family(double phi, double delta, double kappa,
                                 const AscentOptions& opt) {
    auto eval = [](const Eigen::Vector3d& p) {
        return min_distance(c6_configuration(p[0], p[1], p[2]));
    };
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    FamilyAscentResult res;
    Eigen::Vector3d x(phi, delta, kappa);
    double f = eval(x);
    res.trace.push_back(f);
    res.evaluations = 1;
    double step = opt.initial_step;
    int failed_rounds = 0;

    while (step >= opt.min_step && res.evaluations < opt.budget) {
        std::vector<Eigen::Vector3d> dirs;
        for (int a = 0; a < 3; ++a)
            for (double s : {1.0, -1.0}) dirs.push_back(s * Eigen::Vector3d::Unit(a));
        for (int r = 0; r < 64; ++r) {
            Eigen::Vector3d v(gauss(rng), gauss(rng), gauss(rng));
            double n = v.norm();
            if (n > 1e-12) dirs.push_back(v / n);
        }
        bool improved = false;
        for (const auto& d : dirs) {
            if (res.evaluations >= opt.budget) break;
            Eigen::Vector3d cand = x + step * d;
            if (std::abs(cand[0]) >= kPi / 2) continue;
            double fc = eval(cand);
            ++res.evaluations;
            if (fc > f + 1e-15) {
                x = cand;
                f = fc;
                res.trace.push_back(f);
                improved = true;
                break;
            }
        }
        if (improved) {
            failed_rounds = 0;
            step = std::min(step * 2.0, 0.2);
        } else if (++failed_rounds >= 2) {
            failed_rounds = 0;
            step *= 0.5;
        }
    }
    res.phi = x[0];
    res.delta = x[1];
    res.kappa = x[2];
    res.value = f;
    res.converged = step < opt.min_step;
    return res;
}

FullAscentResult ascend_full(const LineCluster& start, const FullAscentOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    FullAscentResult res;
    LineCluster cur = start;
    double f = min_distance(cur);
    res.trace.push_back(f);
    res.evaluations = 1;
    double step = opt.initial_step;
    int failed_rounds = 0;

    ClusterChart chart(cur);
    Eigen::MatrixXd Q = chart.rotation_basis();
    const int n = chart.dim();

    auto project = [&](Eigen::VectorXd v) {
        v -= Q * (Q.transpose() * v);
        double nn = v.norm();
        if (nn > 1e-12) v /= nn;
        return v;
    };

    while (step >= opt.min_step && res.evaluations < opt.budget) {
        bool improved = false;
        // projected coordinate polls, then seeded random polls
        std::vector<Eigen::VectorXd> dirs;
        for (int a = 0; a < n; ++a) {
            Eigen::VectorXd v = project(Eigen::VectorXd::Unit(n, a));
            if (v.norm() > 0.5) {
                dirs.push_back(v);
                dirs.push_back(-v);
            }
        }
        for (int r = 0; r < opt.random_polls; ++r) {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v[i] = gauss(rng);
            v = project(v);
            if (v.norm() > 0.5) dirs.push_back(v);
        }
        for (const auto& d : dirs) {
            if (res.evaluations >= opt.budget) break;
            LineCluster cand;
            try {
                cand = chart.perturbed(d, step);
            } catch (const chart_error&) {
                continue;  // pole exit: drop this poll, re-gauged on next accept
            }
            double fc = min_distance(cand);
            ++res.evaluations;
            if (fc > f + 1e-15) {
                cur = cand;
                f = fc;
                res.trace.push_back(f);
                improved = true;
                chart = ClusterChart(cur);
                Q = chart.rotation_basis();
                break;
            }
        }
        if (improved) {
            failed_rounds = 0;
            step = std::min(step * 2.0, 0.2);
        } else if (++failed_rounds >= 2) {
            failed_rounds = 0;
            step *= 0.5;
        }
    }
    res.cluster = cur;
    res.value = f;
    res.converged = step < opt.min_step;
    return res;
}

ProbeReport perturbation_probe(const LineCluster& c, int N, double t, std::uint64_t seed) {
    if (t <= 0) throw input_error("perturbation_probe: t must be positive");
    ClusterChart chart(c);
    Eigen::MatrixXd Q = chart.rotation_basis();
    const int n = chart.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    ProbeReport rep;
    rep.base = min_distance(c);
    std::vector<double> vals;
    vals.reserve(N);
    for (int s = 0; s < N; ++s) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = gauss(rng);
        v -= Q * (Q.transpose() * v);
        double nn = v.norm();
        if (nn < 1e-12) continue;
        v /= nn;
        double d;
        try {
            d = min_distance(chart.perturbed(v, t));
        } catch (const chart_error&) {
            continue;
        }
        vals.push_back(d);
        if (d > rep.base) ++rep.exceeding_base;
    }
    rep.samples = static_cast<int>(vals.size());
    if (vals.empty()) return rep;
    std::sort(vals.begin(), vals.end());
    rep.min = vals.front();
    rep.max = vals.back();
    auto quant = [&](double q) {
        double idx = q * (vals.size() - 1);
        size_t lo = static_cast<size_t>(idx);
        size_t hi = std::min(lo + 1, vals.size() - 1);
        return vals[lo] + (idx - lo) * (vals[hi] - vals[lo]);
    };
    rep.q25 = quant(0.25);
    rep.q50 = quant(0.50);
    rep.q75 = quant(0.75);
    return rep;
}

DecayScan decay_order_scan(const LineCluster& c, const Eigen::VectorXd& v,
                           const std::vector<double>& t_grid) {
    std::vector<double> ts = t_grid;
    if (ts.empty()) {
        for (int k = 0; k < 9; ++k)
            ts.push_back(std::pow(10.0, -2.0 - 2.0 * k / 8.0));
    }
    ClusterChart chart(c);
    double base = min_distance(c);
    DecayScan out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (double t : ts) {
        double drop = base - min_distance(chart.perturbed(v, t));
        out.drops.emplace_back(t, drop);
        if (drop <= 0) {
            out.refuted = true;
            continue;
        }
        double lx = std::log(t), ly = std::log(drop);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++npts;
    }
    if (npts >= 2) out.exponent = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    return out;
}

}  // namespace critcluster
