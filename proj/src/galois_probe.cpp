#include "critcluster/galois_probe.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace critcluster {

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw input_error("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(std::abs(num), den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}
Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw input_error("Rational: division by zero");
    return Rational(num * o.den, den * o.num);
}
std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

bool perfect_square(long long v, long long& root) {
    if (v < 0) return false;
    long long r = std::llround(std::sqrt(static_cast<double>(v)));
    for (long long c = std::max(0LL, r - 2); c <= r + 2; ++c)
        if (c * c == v) {
            root = c;
            return true;
        }
    return false;
}

}  // namespace

PxResult p_x(const Rational& x) {
    if (!(x.value() > 0.0 && x.value() < 1.0))
        throw input_error("p_x: x must lie in (0, 1)");
    Rational one(1, 1);
    Rational rad = (one + x) * (one + Rational(3, 1) * x) / Rational(3, 1);
    PxResult out;
    out.radicand = rad;
    out.value = std::sqrt(rad.value());
    long long rn, rd;
    out.rational = perfect_square(rad.num, rn) && perfect_square(rad.den, rd);
    return out;
}

double theta_delta(const Rational& x) {
    if (x.num == 0 || x == Rational(1, 1))
        throw input_error("theta_delta: pole at x = 0 and x = 1");
    if (!(x.value() > 0.0 && x.value() < 1.0))
        throw input_error("theta_delta: x must lie in (0, 1)");
    double xv = x.value();
    return std::sqrt((1 + xv) / (3 * xv * (1 - xv) * (1 + 7 * xv + 4 * xv * xv)));
}

std::optional<QuadraticFieldElement> rational_recover(double c, double p, int den_bound,
                                                      const RecoverOptions& opt) {
    if (std::abs(c) < opt.tol_per_den)
        return QuadraticFieldElement{Rational(0, 1), Rational(0, 1), p};
    for (int r = 1; r <= den_bound; ++r) {
        double cr = c * r;
        long long qmax = static_cast<long long>(opt.b_window) * r;
        for (long long q = -qmax; q <= qmax; ++q) {
            double rem = cr - q * p;
            double m = std::round(rem);
            if (std::abs(rem - m) < opt.tol_per_den * r) {
                return QuadraticFieldElement{Rational(static_cast<long long>(m), r),
                                             Rational(q, r), p};
            }
        }
    }
    return std::nullopt;
}

// ---- extended-precision delta-delta Hessian of the gamma(x) cluster ----

namespace {

using Q = __float128;
using QVec = std::array<Q, 3>;

QVec qcross(const QVec& a, const QVec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Q qdot(const QVec& a, const QVec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
QVec qsub(const QVec& a, const QVec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

QVec qembed(Q phi, Q kap) {
    return {cosq(phi) * cosq(kap), cosq(phi) * sinq(kap), sinq(phi)};
}
QVec qnorth(Q phi, Q kap) {
    return {-sinq(phi) * cosq(kap), -sinq(phi) * sinq(kap), cosq(phi)};
}
QVec qeast(Q kap) { return {-sinq(kap), cosq(kap), Q(0)}; }

// tau = cos(alpha) north + sin(alpha) east
QVec qtau(Q phi, Q kap, Q alpha) {
    QVec n = qnorth(phi, kap), e = qeast(kap);
    QVec out;
    for (int i = 0; i < 3; ++i) out[i] = cosq(alpha) * n[i] + sinq(alpha) * e[i];
    return out;
}

struct QuadGammaCluster {
    Q phi, delta, kappa, theta;
    std::array<Q, 6> lat, lon;

    explicit QuadGammaCluster(const Rational& x) {
        Q xv = Q(x.num) / Q(x.den);
        Q poly = 1 + 7 * xv + 4 * xv * xv;
        phi = asinq(2 * sqrtq((1 - xv) * xv * (1 + xv) / poly));
        delta = atanq(sqrtq((1 - xv) * (1 + 3 * xv) / (xv * poly)));
        kappa = atanq((xv - 1) / sqrtq((1 + xv) * (1 + 3 * xv)));
        theta = sqrtq((1 + xv) / (3 * xv * (1 - xv) * poly));
        Q pi6 = M_PIq / 6;
        lat = {phi, phi, phi, -phi, -phi, -phi};
        lon = {pi6 - kappa,      5 * pi6 - kappa, 9 * pi6 - kappa,
               3 * pi6 + kappa,  7 * pi6 + kappa, 11 * pi6 + kappa};
    }

    // squared distance of pair (i, j) with theta-normalized delta shifts
    Q sqdist(int i, int j, Q di, Q dj) const {
        QVec pi = qembed(lat[i], lon[i]);
        QVec pj = qembed(lat[j], lon[j]);
        QVec ti = qtau(lat[i], lon[i], delta + theta * di);
        QVec tj = qtau(lat[j], lon[j], delta + theta * dj);
        QVec n = qcross(ti, tj);
        Q nn = qdot(n, n);
        QVec w = qsub(pj, pi);
        if (nn < Q(1e-40)) {
            Q along = qdot(w, ti);
            QVec perp = {w[0] - along * ti[0], w[1] - along * ti[1], w[2] - along * ti[2]};
            return qdot(perp, perp);
        }
        Q d = qdot(n, w);
        return d * d / nn;
    }
};

// full 6x6 Hessian in the two relevant coordinates, scattered
std::array<std::array<Q, 6>, 6> pair_hessian_q(const QuadGammaCluster& g, int i, int j) {
    std::array<std::array<Q, 6>, 6> H{};
    const Q h = Q(1e-5);
    auto f = [&](Q di, Q dj) { return g.sqdist(i, j, di, dj); };
    Q f0 = f(0, 0);
    // diagonal: 5-point stencil, O(h^4)
    Q dii = (-f(2 * h, 0) + 16 * f(h, 0) - 30 * f0 + 16 * f(-h, 0) - f(-2 * h, 0)) /
            (12 * h * h);
    Q djj = (-f(0, 2 * h) + 16 * f(0, h) - 30 * f0 + 16 * f(0, -h) - f(0, -2 * h)) /
            (12 * h * h);
    // mixed: cross stencil with one Richardson step
    auto mix = [&](Q hh) {
        return (f(hh, hh) - f(hh, -hh) - f(-hh, hh) + f(-hh, -hh)) / (4 * hh * hh);
    };
    Q dij = (4 * mix(h / 2) - mix(h)) / 3;
    H[i][i] = dii;
    H[j][j] = djj;
    H[i][j] = H[j][i] = dij;
    return H;
}

// continued-fraction rational recovery of a single extended-precision real
bool cf_rational(Q y, long long max_den, Q tol, long long& num, long long& den) {
    Q x = y;
    long long p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // convergents
    for (int it = 0; it < 64; ++it) {
        Q fl = floorq(x);
        long long a = static_cast<long long>(fl);
        long long p2 = a * p0 + p1;
        long long q2 = a * q0 + q1;
        if (q2 > max_den || q2 < 0) break;
        p1 = p0; q1 = q0; p0 = p2; q0 = q2;
        if (fabsq(y * Q(q0) - Q(p0)) < tol * Q(q0)) {
            num = p0;
            den = q0;
            return true;
        }
        Q frac = x - fl;
        if (frac < Q(1e-30)) break;
        x = 1 / frac;
    }
    return false;
}

const int kSigma[6] = {0, 2, 1, 5, 4, 3};  // (B,C)(D,F)

}  // namespace

std::array<std::array<double, 6>, 6> delta_hessian_of_pair(const Rational& x, int i, int j) {
    QuadGammaCluster g(x);
    auto Hq = pair_hessian_q(g, i, j);
    std::array<std::array<double, 6>, 6> H{};
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) H[a][b] = static_cast<double>(Hq[a][b]);
    return H;
}

SigmaReport sigma_conjugation_check(const Rational& x, int den_bound) {
    PxResult px = p_x(x);
    if (px.rational)
        throw input_error("sigma_conjugation_check: p_x is rational at this x");

    SigmaReport rep;
    rep.x = x;
    rep.p_value = px.value;
    rep.theta = theta_delta(x);
    rep.den_bound = den_bound;

    QuadGammaCluster g(x);
    // full table: H[pair][a][b] in extended precision
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) pairs.emplace_back(i, j);
    std::vector<std::array<std::array<Q, 6>, 6>> Hq;
    Hq.reserve(pairs.size());
    for (auto [i, j] : pairs) Hq.push_back(pair_hessian_q(g, i, j));

    auto pair_index = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        for (size_t k = 0; k < pairs.size(); ++k)
            if (pairs[k].first == i && pairs[k].second == j) return static_cast<int>(k);
        throw input_error("pair_index: bad pair");
    };

    // sigma alone, value level
    Q worst = 0;
    for (size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        int sk = pair_index(kSigma[i], kSigma[j]);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) {
                Q d = fabsq(Hq[k][a][b] - Hq[sk][kSigma[a]][kSigma[b]]);
                if (d > worst) worst = d;
            }
    }
    rep.sigma_alone_deviation = static_cast<double>(worst);
    rep.sigma_alone_invariant = rep.sigma_alone_deviation < 1e-9;

    // spec probe: recover each nontrivial entry at den_bound, then match
    const double pv = px.value;
    bool all_recovered = true, all_matched = true;
    for (size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        int sk = pair_index(kSigma[i], kSigma[j]);
        for (auto [a, b] : {std::pair{i, i}, std::pair{i, j}, std::pair{j, j}}) {
            ++rep.entries;
            double v = static_cast<double>(Hq[k][a][b]);
            int sa = std::min(kSigma[a], kSigma[b]), sb = std::max(kSigma[a], kSigma[b]);
            double w = static_cast<double>(Hq[sk][sa][sb]);
            auto rv = rational_recover(v, pv, den_bound);
            auto rw = rational_recover(w, pv, den_bound);
            if (!rv || !rw) {
                all_recovered = false;
                ++rep.unrecovered;
                char buf[96];
                std::snprintf(buf, sizeof(buf), "pair(%d,%d) d2/d(%d)d(%d) unrecovered", i,
                              j, a, b);
                rep.failures.push_back(buf);
                continue;
            }
            if (!(rv->a == rw->a && rv->b == rw->b.negated())) {
                all_matched = false;
                ++rep.mismatched;
            }
        }
    }
    rep.conclusive = all_recovered;
    rep.symmetric = all_recovered && all_matched;

    // structural check: conjugate pairing with rational coefficients
    rep.structural_symmetric = true;
    Q p_q = sqrtq(Q(px.radicand.num) / Q(px.radicand.den));
    for (size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        int sk = pair_index(kSigma[i], kSigma[j]);
        for (auto [a, b] : {std::pair{i, i}, std::pair{i, j}, std::pair{j, j}}) {
            int sa = std::min(kSigma[a], kSigma[b]), sb = std::max(kSigma[a], kSigma[b]);
            Q v = Hq[k][a][b], w = Hq[sk][sa][sb];
            Q s = (v + w) / 2;
            Q d = (v - w) / (2 * p_q);
            for (Q y : {s, d}) {
                if (fabsq(y) < Q(1e-18)) continue;
                long long num, den;
                if (cf_rational(y, 50000000LL, Q(1e-15), num, den)) {
                    rep.structural_max_denominator =
                        std::max(rep.structural_max_denominator, den);
                    Q resid = fabsq(y - Q(num) / Q(den));
                    rep.structural_max_residual = std::max(
                        rep.structural_max_residual, static_cast<double>(resid));
                } else {
                    rep.structural_symmetric = false;
                }
            }
        }
    }
    return rep;
}

}  // namespace critcluster
