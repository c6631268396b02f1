#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "acdc/decision_support.hpp"
#include "support.hpp"

using namespace acdc;

namespace {

std::vector<Obj2> random_front(testing::Rng& rng, int n) {
    std::vector<Obj2> pts;
    for (int i = 0; i < n; ++i) {
        const double f = rng.uni(8150, 8250);
        pts.push_back({f, 0.004 + 0.02 * std::pow((8250 - f) / 100, 2) + rng.uni(0, 0.002)});
    }
    return pts;
}

// Plain alternating optimization with m = 2 on already scaled points.
struct OracleFcm {
    std::vector<Obj2> centers;
    double loss;
};

OracleFcm oracle_fcm(const std::vector<Obj2>& s, int nc, testing::Rng& rng) {
    const std::size_t n = s.size();
    std::vector<std::vector<double>> u(n, std::vector<double>(nc));
    for (auto& row : u) {
        double sum = 0;
        for (auto& x : row) sum += x = rng.uni(0.01, 1);
        for (auto& x : row) x /= sum;
    }
    std::vector<Obj2> c(nc);
    double loss = 0;
    for (int it = 0; it < 500; ++it) {
        for (int k = 0; k < nc; ++k) {
            double w = 0, a = 0, b = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double uu = u[i][k] * u[i][k];
                w += uu;
                a += uu * s[i][0];
                b += uu * s[i][1];
            }
            c[k] = {a / w, b / w};
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> d(nc);
            for (int k = 0; k < nc; ++k) d[k] = std::pow(s[i][0] - c[k][0], 2) + std::pow(s[i][1] - c[k][1], 2);
            for (int k = 0; k < nc; ++k) {
                double sum = 0;
                for (int j = 0; j < nc; ++j) sum += d[k] / d[j];
                u[i][k] = 1 / sum;
            }
        }
    }
    loss = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < nc; ++k)
            loss += u[i][k] * u[i][k] * (std::pow(s[i][0] - c[k][0], 2) + std::pow(s[i][1] - c[k][1], 2));
    return {c, loss};
}

}  // namespace

TEST_CASE("a point on a center belongs to it alone") {
    const auto m = fcm_memberships({0.3, 0.4}, {{0.0, 0.0}, {0.3, 0.4}, {1.0, 1.0}}, 2.0);
    CHECK(m == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("two well separated groups") {
    const std::vector<Obj2> pts{{0.0, 0.0}, {0.1, 0.1}, {10.0, 10.0}, {10.1, 10.1}};
    const auto r = fcm_cluster(pts, 2, 42);
    const std::size_t low = r.centers[0][0] < r.centers[1][0] ? 0 : 1, high = 1 - low;
    for (std::size_t i = 0; i < 2; ++i) CHECK(r.memberships[i][low] >= 0.99);
    for (std::size_t i = 2; i < 4; ++i) CHECK(r.memberships[i][high] >= 0.99);
    CHECK(std::abs(r.centers[low][0] - 0.05) <= 0.06);
    CHECK(std::abs(r.centers[high][0] - 10.05) <= 0.06);

    // best of 100 random starts of an independent implementation, in the same scaled space
    std::vector<Obj2> scaled;
    for (const auto& p : pts) scaled.push_back({p[0] / 10.1, p[1] / 10.1});
    testing::Rng rng(1);
    OracleFcm best{{}, INFINITY};
    for (int k = 0; k < 100; ++k) {
        auto o = oracle_fcm(scaled, 2, rng);
        if (o.loss < best.loss) best = o;
    }
    CHECK(r.loss <= best.loss * (1 + 1e-6));
    std::sort(best.centers.begin(), best.centers.end());
    auto mine = r.centers_normalized;
    std::sort(mine.begin(), mine.end());
    for (int k = 0; k < 2; ++k) CHECK(std::abs(mine[k][0] - best.centers[k][0]) <= 1e-6);
}

TEST_CASE("FCM invariants on random fronts") {
    testing::Rng rng(55);
    for (int run = 0; run < 200; ++run) {
        const auto pts = random_front(rng, rng.pick(3, 80));
        const int nc = rng.pick(2, 3);
        const auto r = fcm_cluster(pts, nc, static_cast<std::uint64_t>(run));
        for (const auto& row : r.memberships) {
            double s = 0;
            for (double x : row) {
                CHECK(x >= 0.0);
                s += x;
            }
            CHECK(std::abs(s - 1.0) <= 1e-12);
        }
        for (std::size_t t = 1; t < r.loss_history.size(); ++t)
            CHECK(r.loss_history[t] <= r.loss_history[t - 1] * (1 + 1e-12));
    }
}

TEST_CASE("degenerate FCM inputs") {
    CHECK_THROWS_AS(fcm_cluster({{1, 1}, {1, 1}}, 2, 0), DegenerateInput);
    CHECK_THROWS_AS(fcm_cluster({{1, 1}, {2, 2}}, 3, 0), DegenerateInput);
}

TEST_CASE("GRP two-solution oracle") {
    const auto g = grp_priority({{8170, 0.020}, {8200, 0.005}}, {0.5, 0.5});
    // step (i) indices, cost-type columns inverted
    CHECK(g.index[0] == Obj2{1.0, 0.0});
    CHECK(g.index[1] == Obj2{0.0, 1.0});
    // step (ii)-(iii) Deng coefficients, delta_min = 0, delta_max = 1, rho = 0.5
    CHECK(g.gamma_plus[0][0] == doctest::Approx(1.0));
    CHECK(g.gamma_plus[0][1] == doctest::Approx(1.0 / 3));
    CHECK(g.gamma_minus[0][0] == doctest::Approx(1.0 / 3));
    CHECK(g.gamma_minus[0][1] == doctest::Approx(1.0));
    // step (iv) projections onto w / |w|
    const double v0 = 0.5 / std::sqrt(0.5);
    CHECK(g.v0 == doctest::Approx(v0));
    CHECK(g.v_plus[0] == doctest::Approx((0.25 + 0.25 / 3) / std::sqrt(0.5)));
    CHECK(g.v_minus[0] == doctest::Approx((0.25 / 3 + 0.25) / std::sqrt(0.5)));
    // step (v): the two solutions mirror each other, so both land on 0.5
    CHECK(g.d[0] == doctest::Approx(0.5));
    CHECK(g.d[1] == doctest::Approx(0.5));
    CHECK((g.d[0] > 0 && g.d[0] < 1));
}

TEST_CASE("ideal and negative-ideal solutions") {
    const auto g = grp_priority({{1, 1}, {2, 3}, {3, 2}, {4, 4}});
    CHECK(g.d[0] == 1.0);
    CHECK(g.d[3] == 0.0);
}

TEST_CASE("GRP invariants") {
    testing::Rng rng(66);
    for (int run = 0; run < 300; ++run) {
        auto pts = random_front(rng, rng.pick(1, 40));
        const Obj2 w{rng.uni(0, 1), rng.uni(0.01, 1)};
        const auto g = grp_priority(pts, w);
        for (double d : g.d) CHECK((d >= 0.0 && d <= 1.0));

        const double lambda = rng.uni(0.1, 10);
        auto scaled = pts;
        for (auto& p : scaled) p[0] *= lambda;
        const auto gs = grp_priority(scaled, w);
        for (std::size_t l = 0; l < pts.size(); ++l) CHECK(gs.d[l] == doctest::Approx(g.d[l]).epsilon(1e-9));

        std::vector<std::size_t> perm(pts.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng.eng);
        std::vector<Obj2> shuffled;
        for (auto i : perm) shuffled.push_back(pts[i]);
        const auto gp = grp_priority(shuffled, w);
        for (std::size_t l = 0; l < perm.size(); ++l) CHECK(gp.d[l] == doctest::Approx(g.d[perm[l]]).epsilon(1e-12));
    }
}

TEST_CASE("cost-only weights rank by cost") {
    const std::vector<Obj2> pts{{8180, 0.01}, {8170, 0.02}, {8200, 0.005}, {8190, 0.007}};
    const auto g = grp_priority(pts, {1.0, 0.0});
    std::vector<std::size_t> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return g.d[a] > g.d[b]; });
    CHECK(order == std::vector<std::size_t>{1, 0, 3, 2});
}

TEST_CASE("singleton clusters") {
    const auto r = select_compromise(std::vector<Obj2>{{8170, 0.02}, {8200, 0.005}}, 2, {0.5, 0.5}, 42);
    REQUIRE(r.clusters.size() == 2);
    CHECK(r.clusters[0].compromise == 0);
    CHECK(r.clusters[1].compromise == 1);
    for (const auto& cl : r.clusters) {
        CHECK(cl.ranking.d == std::vector<double>{1.0});
        CHECK(cl.ranking.degenerate);
    }
    CHECK(r.clusters[0].label == "cost-preferring");
    CHECK(r.clusters[1].label == "deviation-preferring");
}

TEST_CASE("weights change priorities, not the number of compromises") {
    testing::Rng rng(3);
    const auto pts = random_front(rng, 50);
    const auto a = select_compromise(pts, 2, {0.5, 0.5}, 42);
    const auto b = select_compromise(pts, 2, {0.7, 0.3}, 42);
    CHECK(a.clusters.size() == b.clusters.size());
    CHECK(a.clusters[0].ranking.d != b.clusters[0].ranking.d);
}
