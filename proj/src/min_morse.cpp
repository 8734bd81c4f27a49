#include "critcluster/min_morse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace critcluster {

void LinearQuadraticBundle::validate() const {
    if (n < 1 || m() < 1) throw input_error("bundle: need n >= 1, m >= 1");
    for (const auto& li : l)
        if (li.size() != n) throw input_error("bundle: linear form size mismatch");
    for (const auto& qi : q) {
        if (qi.rows() != n || qi.cols() != n)
            throw input_error("bundle: quadratic form size mismatch");
        if ((qi - qi.transpose()).cwiseAbs().maxCoeff() > 1e-10)
            throw input_error("bundle: quadratic form not symmetric");
    }
    if (static_cast<int>(q.size()) != m())
        throw input_error("bundle: l/q count mismatch");
}

double LinearQuadraticBundle::min_value(const Eigen::VectorXd& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (int u = 0; u < m(); ++u) best = std::min(best, branch_value(u, x));
    return best;
}

double pl_differential(const LinearQuadraticBundle& b, const Eigen::VectorXd& v) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& li : b.l) best = std::min(best, li.dot(v));
    return best;
}

// ---- dense two-phase simplex, Bland's rule ----

namespace {

struct LpResult {
    enum Status { optimal, infeasible, unbounded } status = infeasible;
    Eigen::VectorXd x;
};

// min c'x  s.t.  Ax = b, x >= 0
LpResult solve_lp(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::VectorXd c) {
    const double eps = 1e-11;
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    for (int i = 0; i < m; ++i)
        if (b[i] < 0) {
            A.row(i) = -A.row(i);
            b[i] = -b[i];
        }

    // tableau with artificial variables
    int total = n + m;
    Eigen::MatrixXd T(m, total + 1);
    T.leftCols(n) = A;
    T.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
    T.col(total) = b;
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    auto pivot = [&](int row, int col) {
        T.row(row) /= T(row, col);
        for (int i = 0; i < m; ++i)
            if (i != row && std::abs(T(i, col)) > 0)
                T.row(i) -= T(i, col) * T.row(row);
        basis[row] = col;
    };

    auto run_phase = [&](const Eigen::VectorXd& cost, int ncols) -> bool {
        // returns false on unbounded
        for (long iter = 0; iter < 100000; ++iter) {
            Eigen::VectorXd y = Eigen::VectorXd::Zero(ncols);
            for (int i = 0; i < m; ++i)
                if (basis[i] < ncols) y += cost[basis[i]] * T.row(i).head(ncols).transpose();
            int enter = -1;
            for (int j = 0; j < ncols; ++j) {
                bool in_basis = false;
                for (int i = 0; i < m; ++i) in_basis |= (basis[i] == j);
                if (in_basis) continue;
                if (cost[j] - y[j] < -eps) {
                    enter = j;
                    break;  // Bland: smallest index
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            double best = 0;
            for (int i = 0; i < m; ++i) {
                if (T(i, enter) > eps) {
                    double ratio = T(i, total) / T(i, enter);
                    if (leave < 0 || ratio < best - eps ||
                        (ratio < best + eps && basis[i] < basis[leave])) {
                        leave = i;
                        best = ratio;
                    }
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
        return true;
    };

    // phase 1
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(total);
    c1.tail(m).setOnes();
    run_phase(c1, total);
    double art = 0;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= n) art += T(i, total);
    if (art > 1e-9) return {LpResult::infeasible, {}};
    // drive remaining artificials out where possible
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= n) {
            for (int j = 0; j < n; ++j)
                if (std::abs(T(i, j)) > eps) {
                    pivot(i, j);
                    break;
                }
        }
    }

    // phase 2 over original columns only
    Eigen::VectorXd c2 = Eigen::VectorXd::Zero(total);
    c2.head(n) = c;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= n) c2[basis[i]] = 1e18;  // stranded artificial stays at 0
    if (!run_phase(c2, n)) return {LpResult::unbounded, {}};

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) x[basis[i]] = T(i, total);
    return {LpResult::optimal, x};
}

// Caratheodory pruning of a convex relation: reduce support while keeping
// V lambda = 0, sum lambda = 1, lambda >= 0.
Eigen::VectorXd prune_support(const Eigen::MatrixXd& V, Eigen::VectorXd lambda) {
    const int m = static_cast<int>(lambda.size());
    for (int round = 0; round < m; ++round) {
        std::vector<int> S;
        for (int u = 0; u < m; ++u)
            if (lambda[u] > 1e-12) S.push_back(u);
        if (S.size() <= 1) break;
        Eigen::MatrixXd A(V.rows() + 1, S.size());
        for (size_t j = 0; j < S.size(); ++j) {
            A.col(j).head(V.rows()) = V.col(S[j]);
            A(V.rows(), j) = 1.0;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
        int rank = 0;
        double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > 1e-10 * std::max(smax, 1.0)) ++rank;
        if (rank >= static_cast<int>(S.size())) break;  // no kernel: minimal support
        Eigen::VectorXd mu = svd.matrixV().col(S.size() - 1);
        // step until the first coefficient hits zero
        double t = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < S.size(); ++j)
            if (mu[j] > 1e-14) t = std::min(t, lambda[S[j]] / mu[j]);
        if (!std::isfinite(t)) {
            mu = -mu;
            for (size_t j = 0; j < S.size(); ++j)
                if (mu[j] > 1e-14) t = std::min(t, lambda[S[j]] / mu[j]);
        }
        if (!std::isfinite(t)) break;
        for (size_t j = 0; j < S.size(); ++j) lambda[S[j]] -= t * mu[j];
        for (int u = 0; u < m; ++u)
            if (lambda[u] < 1e-12) lambda[u] = 0.0;
        double s = lambda.sum();
        if (s <= 0) break;
        lambda /= s;
    }
    return lambda;
}

}  // namespace

CriticalityResult is_critical(const LinearQuadraticBundle& b) {
    b.validate();
    const int m = b.m();
    Eigen::MatrixXd V(b.n, m);
    for (int u = 0; u < m; ++u) V.col(u) = b.l[u];

    Eigen::MatrixXd A(b.n + 1, m);
    A.topRows(b.n) = V;
    A.row(b.n).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(b.n + 1);
    rhs[b.n] = 1.0;
    LpResult lp = solve_lp(A, rhs, Eigen::VectorXd::Zero(m));
    CriticalityResult res;
    if (lp.status != LpResult::optimal) {
        res.critical = false;
        res.lambda = Eigen::VectorXd::Zero(m);
        return res;
    }
    res.critical = true;
    res.lambda = prune_support(V, lp.x);
    return res;
}

NullSpaceResult null_space(const LinearQuadraticBundle& b) {
    b.validate();
    Eigen::MatrixXd L(b.m(), b.n);
    for (int u = 0; u < b.m(); ++u) L.row(u) = b.l[u].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeFullV);
    double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    int rank = 0;
    if (smax > 1e-300)
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > 1e-8 * smax) ++rank;
    NullSpaceResult out;
    out.null_index = b.n - rank;
    out.basis = svd.matrixV().rightCols(out.null_index);
    return out;
}

Eigen::MatrixXd quotient_basis(const Eigen::MatrixXd& E, const Eigen::MatrixXd& rot) {
    if (rot.cols() == 0 || E.cols() == 0) return E;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(rot);
    Eigen::MatrixXd Q =
        qr.householderQ() * Eigen::MatrixXd::Identity(rot.rows(), rot.cols());
    Eigen::MatrixXd P = E - Q * (Q.transpose() * E);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeThinU);
    int keep = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-8) ++keep;
    return svd.matrixU().leftCols(keep);
}

PartitionResult detect_partition(const LinearQuadraticBundle& b) {
    b.validate();
    const int m = b.m();
    Eigen::MatrixXd V(b.n, m);
    for (int u = 0; u < m; ++u) V.col(u) = b.l[u];

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeFullV);
    double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    int rank = 0;
    if (smax > 1e-300)
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > 1e-8 * smax) ++rank;

    PartitionResult out;
    out.k = m - rank;
    if (out.k == 0) {
        out.note = "no linear relations (k = 0)";
        return out;
    }
    Eigen::MatrixXd K = svd.matrixV().rightCols(out.k);  // m x k
    Eigen::MatrixXd P = K * K.transpose();

    const double ptol = 1e-7;
    std::vector<int> parent(m);
    for (int u = 0; u < m; ++u) parent[u] = u;
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int u = 0; u < m; ++u)
        for (int w = u + 1; w < m; ++w)
            if (P(u, u) > ptol && P(w, w) > ptol && std::abs(P(u, w)) > ptol)
                parent[find(u)] = find(w);

    std::vector<std::vector<int>> comps(m);
    for (int u = 0; u < m; ++u) {
        if (P(u, u) > ptol)
            comps[find(u)].push_back(u);
        else
            out.leftover.push_back(u);
    }
    for (auto& c : comps)
        if (!c.empty()) out.blocks.push_back(c);
    std::sort(out.blocks.begin(), out.blocks.end());

    bool ok = static_cast<int>(out.blocks.size()) == out.k;
    int rank_sum = 0;
    for (const auto& S : out.blocks) {
        Eigen::MatrixXd Pb(S.size(), S.size());
        for (size_t a = 0; a < S.size(); ++a)
            for (size_t c = 0; c < S.size(); ++c) Pb(a, c) = P(S[a], S[c]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Pb);
        int nrel = 0;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()[i] > 0.5) ++nrel;
        if (nrel != 1) {
            ok = false;
            out.note = "block carries more than one relation";
        }
        Eigen::VectorXd lam = es.eigenvectors().col(es.eigenvalues().size() - 1);
        if (lam.sum() < 0) lam = -lam;
        double mn = lam.cwiseAbs().minCoeff();
        if (mn > 1e-12) lam /= mn;
        out.lambdas.push_back(lam);
        out.lambda_positive.push_back(lam.minCoeff() > 1e-9);

        // block rank must be |S| - 1 (exactly one relation inside)
        Eigen::MatrixXd Vb(b.n, S.size());
        for (size_t a = 0; a < S.size(); ++a) Vb.col(a) = V.col(S[a]);
        Eigen::JacobiSVD<Eigen::MatrixXd> bs(Vb);
        int br = 0;
        double bmax = bs.singularValues().size() ? bs.singularValues()[0] : 0.0;
        for (int i = 0; i < bs.singularValues().size(); ++i)
            if (bs.singularValues()[i] > 1e-8 * std::max(bmax, smax * 1e-8)) ++br;
        if (br != static_cast<int>(S.size()) - 1) {
            ok = false;
            out.note = "block rank mismatch";
        }
        rank_sum += br;
    }
    if (!out.leftover.empty()) {
        Eigen::MatrixXd Vl(b.n, out.leftover.size());
        for (size_t a = 0; a < out.leftover.size(); ++a) Vl.col(a) = V.col(out.leftover[a]);
        Eigen::JacobiSVD<Eigen::MatrixXd> ls(Vl);
        int lr = 0;
        for (int i = 0; i < ls.singularValues().size(); ++i)
            if (ls.singularValues()[i] > 1e-8 * smax) ++lr;
        rank_sum += lr;
        out.note += (out.note.empty() ? "" : "; ");
        out.note += "active forms outside all relations";
    }
    out.rank_additive = (rank_sum == rank);
    out.structure_found = ok && out.rank_additive;
    return out;
}

namespace {

double min_quadratic(const std::vector<Eigen::MatrixXd>& QE, const Eigen::VectorXd& xi) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& Q : QE) best = std::min(best, xi.dot(Q * xi));
    return best;
}

}  // namespace

Certificate certify_local_max(const LinearQuadraticBundle& b, const PartitionResult& part,
                              const Eigen::MatrixXd& Ebasis, const CertifyOptions& opt) {
    Certificate cert;
    if (!part.structure_found) {
        cert.note = "partition structure not detected; certification aborted";
        return cert;
    }
    for (bool pos : part.lambda_positive)
        if (!pos) {
            cert.note = "relation not strictly convex";
            return cert;
        }
    const int e = static_cast<int>(Ebasis.cols());
    if (e == 0) {
        cert.status = CertStatus::certified_max;
        cert.margin = std::numeric_limits<double>::infinity();
        cert.note = "null space trivial";
        return cert;
    }
    if (e > opt.max_dim)
        throw input_error("certify_local_max: dim E too large for sampling");

    std::vector<Eigen::MatrixXd> QE;
    for (size_t p = 0; p < part.blocks.size(); ++p) {
        Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(b.n, b.n);
        for (size_t s = 0; s < part.blocks[p].size(); ++s)
            Q += part.lambdas[p][s] * b.q[part.blocks[p][s]];
        QE.push_back(Ebasis.transpose() * Q * Ebasis);
    }

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd best_xi;
    double best_val = -std::numeric_limits<double>::infinity();
    auto consider = [&](const Eigen::VectorXd& xi) {
        double v = min_quadratic(QE, xi);
        if (v > best_val) {
            best_val = v;
            best_xi = xi;
        }
    };
    for (int i = 0; i < e; ++i) {
        consider(Eigen::VectorXd::Unit(e, i));
        consider(-Eigen::VectorXd::Unit(e, i));
    }
    for (int s = 0; s < opt.samples; ++s) {
        Eigen::VectorXd xi(e);
        for (int i = 0; i < e; ++i) xi[i] = gauss(rng);
        double n = xi.norm();
        if (n < 1e-12) continue;
        consider(xi / n);
    }
    // local ascent refinement of the best direction
    {
        Eigen::VectorXd xi = best_xi;
        double step = 0.1;
        while (step > 1e-9) {
            bool improved = false;
            for (int i = 0; i < e && !improved; ++i) {
                for (double s : {step, -step}) {
                    Eigen::VectorXd cand = (xi + s * Eigen::VectorXd::Unit(e, i)).normalized();
                    double v = min_quadratic(QE, cand);
                    if (v > best_val + 1e-15) {
                        best_val = v;
                        best_xi = xi = cand;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
    }

    if (best_val < -1e-8) {
        cert.status = CertStatus::certified_max;
        cert.margin = -best_val;
        return cert;
    }
    if (best_val > 1e-8) {
        // build an explicit ascent curve x(t) = t xi + t^2 w
        Eigen::VectorXd xi_full = Ebasis * best_xi;
        const int m = b.m(), n = b.n;
        Eigen::VectorXd qvals(m);
        for (int u = 0; u < m; ++u) qvals[u] = xi_full.dot(b.q[u] * xi_full);
        // max t  s.t.  l_u . w + qvals_u >= t
        // variables y = [w+, w-, t+, t-, s]
        Eigen::MatrixXd A(m, 2 * n + 2 + m);
        Eigen::VectorXd rhs(m), cost = Eigen::VectorXd::Zero(2 * n + 2 + m);
        for (int u = 0; u < m; ++u) {
            A.row(u).segment(0, n) = b.l[u].transpose();
            A.row(u).segment(n, n) = -b.l[u].transpose();
            A(u, 2 * n) = -1.0;
            A(u, 2 * n + 1) = 1.0;
            A.row(u).segment(2 * n + 2, m).setZero();
            A(u, 2 * n + 2 + u) = -1.0;
            rhs[u] = -qvals[u];
        }
        cost[2 * n] = -1.0;
        cost[2 * n + 1] = 1.0;
        LpResult lp = solve_lp(A, rhs, cost);
        if (lp.status == LpResult::optimal) {
            Eigen::VectorXd w = lp.x.segment(0, n) - lp.x.segment(n, n);
            double tstar = lp.x[2 * n] - lp.x[2 * n + 1];
            if (tstar > 1e-10) {
                double t0 = 1e-3;
                Eigen::VectorXd point = t0 * xi_full + t0 * t0 * w;
                double fval = b.min_value(point);
                if (fval > 0) {
                    cert.status = CertStatus::refuted;
                    cert.margin = best_val;
                    RefutationWitness rw;
                    rw.xi = xi_full;
                    rw.w = w;
                    rw.growth = tstar;
                    rw.point = point;
                    rw.value = fval;
                    cert.witness = rw;
                    return cert;
                }
            }
        }
        cert.status = CertStatus::not_certified;
        cert.margin = best_val;
        cert.note = "positive direction found but no verified ascent curve";
        return cert;
    }
    cert.status = CertStatus::not_certified;
    cert.margin = best_val;
    cert.note = "sup min Q within tolerance of zero";
    return cert;
}

bool k1_negative_definite(const LinearQuadraticBundle& b, const PartitionResult& part,
                          const Eigen::MatrixXd& Ebasis) {
    if (part.k != 1 || part.blocks.size() != 1)
        throw input_error("k1_negative_definite: requires k == 1");
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(b.n, b.n);
    for (size_t s = 0; s < part.blocks[0].size(); ++s)
        Q += part.lambdas[0][s] * b.q[part.blocks[0][s]];
    if (Ebasis.cols() == 0) return true;
    Eigen::MatrixXd QE = Ebasis.transpose() * Q * Ebasis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(QE);
    return es.eigenvalues().maxCoeff() < -1e-10;
}

CriticalityReport analyze(const LinearQuadraticBundle& b, const Eigen::MatrixXd* rot,
                          const CertifyOptions& opt) {
    CriticalityReport rep;
    CriticalityResult cr = is_critical(b);
    rep.is_critical = cr.critical;
    rep.lambda = cr.lambda;
    rep.null_raw = null_space(b);
    Eigen::MatrixXd E = rep.null_raw.basis;
    if (rot != nullptr) {
        E = quotient_basis(E, *rot);
        rep.null_index_mod_so3 = static_cast<int>(E.cols());
    }
    if (!cr.critical) {
        rep.certificate.note = "not critical";
        return rep;
    }
    rep.partition = detect_partition(b);
    rep.certificate = certify_local_max(b, rep.partition, E, opt);
    return rep;
}

// ---- bundle extraction ----

namespace {

// gradient and Hessian of f over the given coordinate subset by
// Richardson-extrapolated central differences
template <typename F>
void grad_hess_subset(F&& f, int nloc, double h, Eigen::VectorXd& g, Eigen::MatrixXd& H) {
    g.resize(nloc);
    H.resize(nloc, nloc);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(nloc);
    double f0 = f(z);
    auto at = [&](std::initializer_list<std::pair<int, double>> shifts) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(nloc);
        for (auto [i, s] : shifts) v[i] += s;
        return f(v);
    };
    for (int a = 0; a < nloc; ++a) {
        auto d1 = [&](double hh) { return (at({{a, hh}}) - at({{a, -hh}})) / (2 * hh); };
        g[a] = (4 * d1(h / 2) - d1(h)) / 3;
        auto d2 = [&](double hh) {
            return (at({{a, hh}}) - 2 * f0 + at({{a, -hh}})) / (hh * hh);
        };
        H(a, a) = (4 * d2(h / 2) - d2(h)) / 3;
    }
    for (int a = 0; a < nloc; ++a)
        for (int c = a + 1; c < nloc; ++c) {
            auto mix = [&](double hh) {
                return (at({{a, hh}, {c, hh}}) - at({{a, hh}, {c, -hh}}) -
                        at({{a, -hh}, {c, hh}}) + at({{a, -hh}, {c, -hh}})) /
                       (4 * hh * hh);
            };
            H(a, c) = H(c, a) = (4 * mix(h / 2) - mix(h)) / 3;
        }
}

}  // namespace

ClusterBundle bundle_from_line_cluster(const LineCluster& c, double tol) {
    double base = min_distance(c);
    if (base < 1e-12)
        throw input_error("bundle_from_line_cluster: intersecting lines at base");
    ClusterChart chart(c);
    ContactGraph g = contact_graph(c, tol);

    ClusterBundle out;
    out.base_value = base;
    out.active_pairs = g.edges;
    out.bundle.n = chart.dim();
    const double h = 1e-4;
    for (auto [i, j] : g.edges) {
        // the pair distance depends on 6 chart coordinates only
        std::array<int, 6> idx = {3 * i, 3 * i + 1, 3 * i + 2, 3 * j, 3 * j + 1, 3 * j + 2};
        auto f = [&](const Eigen::VectorXd& loc) {
            Eigen::VectorXd off = Eigen::VectorXd::Zero(chart.dim());
            for (int a = 0; a < 6; ++a) off[idx[a]] = loc[a];
            LineCluster pc = chart.at(off);
            return line_distance(pc.lines[i], pc.lines[j]);
        };
        Eigen::VectorXd gl;
        Eigen::MatrixXd Hl;
        grad_hess_subset(f, 6, h, gl, Hl);
        Eigen::VectorXd L = Eigen::VectorXd::Zero(chart.dim());
        Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(chart.dim(), chart.dim());
        for (int a = 0; a < 6; ++a) {
            L[idx[a]] = gl[a];
            for (int b2 = 0; b2 < 6; ++b2) Q(idx[a], idx[b2]) = 0.5 * Hl(a, b2);
        }
        out.bundle.l.push_back(L);
        out.bundle.q.push_back(Q);
    }
    auto gens = chart.rotation_generators();
    out.rotation_generators.resize(chart.dim(), 3);
    for (int a = 0; a < 3; ++a) out.rotation_generators.col(a) = gens[a];
    return out;
}

ClusterBundle bundle_from_ball_config(const BallTouchConfig& p, double tol) {
    double base = delta(p);
    if (base < 1e-12)
        throw input_error("bundle_from_ball_config: coincident points at base");
    BallChart chart(p);
    auto contacts = ball_contacts(p, tol);

    ClusterBundle out;
    out.base_value = base;
    out.active_pairs = contacts;
    out.bundle.n = chart.dim();
    const double h = 1e-4;
    for (auto [i, j] : contacts) {
        std::array<int, 4> idx = {2 * i, 2 * i + 1, 2 * j, 2 * j + 1};
        auto f = [&](const Eigen::VectorXd& loc) {
            Eigen::VectorXd off = Eigen::VectorXd::Zero(chart.dim());
            for (int a = 0; a < 4; ++a) off[idx[a]] = loc[a];
            BallTouchConfig pc = chart.at(off);
            return (pc.points[i] - pc.points[j]).norm();
        };
        Eigen::VectorXd gl;
        Eigen::MatrixXd Hl;
        grad_hess_subset(f, 4, h, gl, Hl);
        Eigen::VectorXd L = Eigen::VectorXd::Zero(chart.dim());
        Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(chart.dim(), chart.dim());
        for (int a = 0; a < 4; ++a) {
            L[idx[a]] = gl[a];
            for (int b2 = 0; b2 < 4; ++b2) Q(idx[a], idx[b2]) = 0.5 * Hl(a, b2);
        }
        out.bundle.l.push_back(L);
        out.bundle.q.push_back(Q);
    }
    out.rotation_generators = chart.rotation_matrix_generators();
    return out;
}

}  // namespace critcluster
