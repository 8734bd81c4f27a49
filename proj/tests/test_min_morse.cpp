#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "critcluster/min_morse.hpp"

#include <cmath>
#include <random>

using namespace critcluster;

namespace {

LinearQuadraticBundle make_bundle(int n, std::vector<Eigen::VectorXd> ls,
                                  std::vector<Eigen::MatrixXd> qs = {}) {
    LinearQuadraticBundle b;
    b.n = n;
    b.l = std::move(ls);
    if (qs.empty())
        for (size_t i = 0; i < b.l.size(); ++i) qs.push_back(Eigen::MatrixXd::Zero(n, n));
    b.q = std::move(qs);
    return b;
}

Eigen::VectorXd vec2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

// the horns example: F = min{-y + 3x^2, y - x^2}
LinearQuadraticBundle horns() {
    Eigen::MatrixXd q1 = Eigen::MatrixXd::Zero(2, 2), q2 = Eigen::MatrixXd::Zero(2, 2);
    q1(0, 0) = 3.0;
    q2(0, 0) = -1.0;
    return make_bundle(2, {vec2(0, -1), vec2(0, 1)}, {q1, q2});
}

LinearQuadraticBundle modified_horns() {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2, 2);
    q(0, 0) = -1.0;
    return make_bundle(2, {vec2(0, -1), vec2(0, 1)}, {q, q});
}

// dense directional sampling oracle for criticality
bool sampled_critical(const LinearQuadraticBundle& b, int N, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < N; ++k) {
        Eigen::VectorXd v(b.n);
        for (int i = 0; i < b.n; ++i) v[i] = gauss(rng);
        double n = v.norm();
        if (n < 1e-12) continue;
        if (pl_differential(b, v / n) > 1e-7) return false;
    }
    return true;
}

// Frank-Wolfe estimate of dist(0, conv{l_u}); used only to reject
// boundary-hugging random bundles that no finite sampling can classify.
double hull_margin(const LinearQuadraticBundle& b) {
    const int m = b.m();
    Eigen::VectorXd lam = Eigen::VectorXd::Constant(m, 1.0 / m);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.n);
    for (int u = 0; u < m; ++u) x += lam[u] * b.l[u];
    for (int it = 1; it <= 2000; ++it) {
        int best = 0;
        double bv = x.dot(b.l[0]);
        for (int u = 1; u < m; ++u) {
            double v = x.dot(b.l[u]);
            if (v < bv) {
                bv = v;
                best = u;
            }
        }
        double step = 2.0 / (it + 2.0);
        x += step * (b.l[best] - x);
    }
    return x.norm();
}

}  // namespace

TEST_CASE("pl_differential") {
    LinearQuadraticBundle h = horns();
    CHECK(pl_differential(h, vec2(1, 0)) == doctest::Approx(0.0));
    CHECK(pl_differential(h, vec2(0, 1)) == doctest::Approx(-1.0));
    CHECK(pl_differential(h, vec2(0, 0)) == doctest::Approx(0.0));
    // positive homogeneity
    CHECK(pl_differential(h, 3.5 * vec2(0.2, 0.7)) ==
          doctest::Approx(3.5 * pl_differential(h, vec2(0.2, 0.7))).epsilon(1e-14));
}

TEST_CASE("is_critical basic cases") {
    auto h = is_critical(horns());
    CHECK(h.critical);
    CHECK(h.lambda[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(h.lambda[1] == doctest::Approx(0.5).epsilon(1e-9));

    auto single = is_critical(make_bundle(2, {vec2(1, 0)}));
    CHECK_FALSE(single.critical);

    auto tri = is_critical(make_bundle(2, {vec2(1, 0), vec2(0, 1), vec2(-1, -1)}));
    CHECK(tri.critical);
    for (int i = 0; i < 3; ++i)
        CHECK(tri.lambda[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    // m = 1 with vanishing form: critical (Morse case)
    auto zero = is_critical(make_bundle(2, {vec2(0, 0)}));
    CHECK(zero.critical);
}

TEST_CASE("criticality lambda is a verified convex relation") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    for (int rep = 0; rep < 50; ++rep) {
        int n = 2 + static_cast<int>(rng() % 3);
        int m = 2 + static_cast<int>(rng() % 5);
        std::vector<Eigen::VectorXd> ls;
        for (int u = 0; u < m; ++u) {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v[i] = gauss(rng);
            ls.push_back(v);
        }
        auto res = is_critical(make_bundle(n, ls));
        if (!res.critical) continue;
        Eigen::VectorXd combo = Eigen::VectorXd::Zero(n);
        double sum = 0;
        for (int u = 0; u < m; ++u) {
            CHECK(res.lambda[u] >= 0.0);
            if (res.lambda[u] > 0) CHECK(res.lambda[u] > 1e-9);
            combo += res.lambda[u] * ls[u];
            sum += res.lambda[u];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(combo.norm() < 1e-9);
    }
}

TEST_CASE("LP verdicts agree with dense directional sampling") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss;
    int disagreements = 0, tested = 0;
    while (tested < 100) {
        int n = 1 + static_cast<int>(rng() % 4);
        int m = 1 + static_cast<int>(rng() % 6);
        std::vector<Eigen::VectorXd> ls;
        double scale = 0;
        for (int u = 0; u < m; ++u) {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v[i] = gauss(rng);
            ls.push_back(v);
            scale = std::max(scale, v.norm());
        }
        auto b = make_bundle(n, ls);
        // skip bundles whose hull hugs the origin: a finite directional
        // sample cannot classify those either way
        double margin = hull_margin(b);
        if (margin > 1e-9 && margin < 0.05 * scale) continue;
        ++tested;
        bool lp = is_critical(b).critical;
        bool sampled = sampled_critical(b, 100000, 1000 + tested);
        if (lp != sampled) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("V0 convexity on sampled zero directions") {
    LinearQuadraticBundle h = horns();
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss;
    std::vector<Eigen::VectorXd> zeros;
    for (int k = 0; k < 20000 && zeros.size() < 50; ++k) {
        Eigen::VectorXd v = vec2(gauss(rng), gauss(rng)).normalized();
        if (std::abs(pl_differential(h, v)) < 1e-9) zeros.push_back(v);
    }
    for (size_t a = 0; a < zeros.size(); ++a)
        for (size_t b = a + 1; b < zeros.size(); ++b)
            CHECK(pl_differential(h, 0.5 * (zeros[a] + zeros[b])) >= -1e-8);
}

TEST_CASE("null_space") {
    auto h = null_space(horns());
    CHECK(h.null_index == 1);
    CHECK(std::abs(std::abs(h.basis(0, 0)) - 1.0) < 1e-12);

    auto zero = null_space(make_bundle(2, {vec2(0, 0)}));
    CHECK(zero.null_index == 2);
}

TEST_CASE("detect_partition structures") {
    auto hp = detect_partition(horns());
    CHECK(hp.structure_found);
    CHECK(hp.k == 1);
    REQUIRE(hp.blocks.size() == 1);
    CHECK(hp.blocks[0] == std::vector<int>({0, 1}));
    CHECK(hp.lambdas[0][0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hp.lambdas[0][1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hp.lambda_positive[0]);
    CHECK(hp.leftover.empty());

    // two independent opposite pairs
    auto two = detect_partition(
        make_bundle(2, {vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1)}));
    CHECK(two.structure_found);
    CHECK(two.k == 2);
    REQUIRE(two.blocks.size() == 2);
    CHECK(two.blocks[0] == std::vector<int>({0, 1}));
    CHECK(two.blocks[1] == std::vector<int>({2, 3}));
    for (auto& lam : two.lambdas) {
        CHECK(lam[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(lam[1] == doctest::Approx(1.0).epsilon(1e-9));
    }

    // leftover form outside the relation
    auto left = detect_partition(make_bundle(2, {vec2(1, 0), vec2(-1, 0), vec2(1, 1)}));
    CHECK(left.k == 1);
    REQUIRE(left.blocks.size() == 1);
    CHECK(left.blocks[0] == std::vector<int>({0, 1}));
    CHECK(left.leftover == std::vector<int>({2}));
    CHECK(left.structure_found);  // rank-additive: flagged via note
    CHECK(!left.note.empty());
}

TEST_CASE("certify horns: refuted with a verified positive point") {
    auto b = horns();
    auto part = detect_partition(b);
    auto ns = null_space(b);
    auto cert = certify_local_max(b, part, ns.basis, {});
    CHECK(cert.status == CertStatus::refuted);
    REQUIRE(cert.witness.has_value());
    CHECK(cert.witness->value > 0.0);
    CHECK(b.min_value(cert.witness->point) > 0.0);
    // the spec's witness curve y = 2x^2: w = (0, 2)
    CHECK(std::abs(cert.witness->w[0]) < 1e-8);
    CHECK(cert.witness->w[1] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(k1_negative_definite(b, part, ns.basis) == false);
}

TEST_CASE("certify modified horns: certified maximum") {
    auto b = modified_horns();
    auto part = detect_partition(b);
    auto ns = null_space(b);
    auto cert = certify_local_max(b, part, ns.basis, {});
    CHECK(cert.status == CertStatus::certified_max);
    CHECK(cert.margin == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(k1_negative_definite(b, part, ns.basis) == true);
}

TEST_CASE("certify the Morse case m = 1") {
    Eigen::MatrixXd q = -Eigen::MatrixXd::Identity(2, 2);
    auto b = make_bundle(2, {vec2(0, 0)}, {q});
    auto part = detect_partition(b);
    CHECK(part.k == 1);
    auto ns = null_space(b);
    CHECK(ns.null_index == 2);
    auto cert = certify_local_max(b, part, ns.basis, {});
    CHECK(cert.status == CertStatus::certified_max);
    CHECK(cert.margin == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(k1_negative_definite(b, part, ns.basis));
}

TEST_CASE("scale invariance of verdicts") {
    for (double scale : {0.037, 12.0}) {
        auto b = horns();
        for (auto& l : b.l) l *= scale;
        for (auto& q : b.q) q *= scale;
        CHECK(is_critical(b).critical);
        auto part = detect_partition(b);
        CHECK(part.structure_found);
        auto cert = certify_local_max(b, part, null_space(b).basis, {});
        CHECK(cert.status == CertStatus::refuted);
    }
}

TEST_CASE("line bundle at the record cluster C_m") {
    LineCluster cm = gamma_cluster(0.5);
    ClusterBundle cb = bundle_from_line_cluster(cm, 1e-6);
    CHECK(cb.bundle.m() == 12);
    CHECK(cb.base_value == doctest::Approx(std::sqrt(12.0 / 11.0)).epsilon(1e-12));

    // gradient consistency oracle: independent step h/2 central differences
    {
        ClusterChart chart(cm);
        std::mt19937_64 rng(4);
        std::normal_distribution<double> gauss;
        auto [i, j] = cb.active_pairs[0];
        Eigen::VectorXd v(chart.dim());
        for (int a = 0; a < v.size(); ++a) v[a] = gauss(rng);
        v.normalize();
        double h = 5e-5;
        double num = (line_distance(chart.perturbed(v, h).lines[i],
                                    chart.perturbed(v, h).lines[j]) -
                      line_distance(chart.perturbed(v, -h).lines[i],
                                    chart.perturbed(v, -h).lines[j])) /
                     (2 * h);
        CHECK(num == doctest::Approx(cb.bundle.l[0].dot(v)).epsilon(1e-6));
    }

    // rotation generators lie in every kernel
    for (int u = 0; u < cb.bundle.m(); ++u)
        for (int a = 0; a < 3; ++a)
            CHECK(std::abs(cb.bundle.l[u].dot(cb.rotation_generators.col(a))) < 1e-7);

    auto rep = analyze(cb.bundle, &cb.rotation_generators);
    CHECK(rep.is_critical);
    CHECK(rep.null_raw.null_index == 7);
    CHECK(rep.null_index_mod_so3 == 4);
    CHECK(rep.partition.structure_found);
    CHECK(rep.partition.k == 1);
    CHECK(rep.partition.lambda_positive[0]);
    CHECK(rep.certificate.status == CertStatus::certified_max);
    CHECK(rep.certificate.margin > 0.1);
    // k = 1: Prop-style iff via negative definiteness
    Eigen::MatrixXd Emod = quotient_basis(rep.null_raw.basis, cb.rotation_generators);
    CHECK(k1_negative_definite(cb.bundle, rep.partition, Emod));
}

TEST_CASE("line bundle at O6") {
    LineCluster o6 = o6_configuration();
    ClusterBundle cb = bundle_from_line_cluster(o6, 1e-9);
    CHECK(cb.bundle.m() == 12);
    auto rep = analyze(cb.bundle, &cb.rotation_generators);
    CHECK(rep.is_critical);
    CHECK(rep.null_raw.null_index == 9);
    CHECK(rep.null_index_mod_so3 == 6);
    CHECK(rep.partition.structure_found);
    CHECK(rep.partition.k == 3);
    REQUIRE(rep.partition.blocks.size() == 3);
    for (size_t p = 0; p < 3; ++p) {
        CHECK(rep.partition.blocks[p].size() == 4);
        CHECK(rep.partition.lambda_positive[p]);
        for (int s = 0; s < 4; ++s)
            CHECK(rep.partition.lambdas[p][s] == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(rep.certificate.status == CertStatus::certified_max);
    CHECK(rep.certificate.margin > 0.05);
}

TEST_CASE("bundle rejects intersecting base clusters") {
    LineCluster bad;
    bad.lines.emplace_back(SpherePoint{0.0, 0.0}, 0.0);
    bad.lines.emplace_back(SpherePoint{0.5, 0.0}, 0.0);  // same meridian plane
    CHECK(min_distance(bad) < 1e-12);
    CHECK_THROWS_AS(bundle_from_line_cluster(bad, 1e-9), input_error);
}
