#include "acdc/decision_support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace acdc {

namespace {

double dist2(const Obj2& a, const Obj2& b) {
    const double x = a[0] - b[0], y = a[1] - b[1];
    return x * x + y * y;
}

struct Scaling {
    Obj2 lo{}, span{};

    Obj2 to(const Obj2& p) const {
        Obj2 out{};
        for (int k = 0; k < 2; ++k) out[k] = span[k] > 0.0 ? (p[k] - lo[k]) / span[k] : 0.0;
        return out;
    }
    Obj2 from(const Obj2& p) const {
        Obj2 out{};
        for (int k = 0; k < 2; ++k) out[k] = lo[k] + p[k] * span[k];
        return out;
    }
};

Scaling scaling_of(const std::vector<Obj2>& pts) {
    Scaling s;
    for (int k = 0; k < 2; ++k) {
        double lo = pts.front()[k], hi = lo;
        for (const auto& p : pts) {
            lo = std::min(lo, p[k]);
            hi = std::max(hi, p[k]);
        }
        s.lo[k] = lo;
        s.span[k] = hi - lo;
    }
    return s;
}

double fcm_loss(const std::vector<Obj2>& s, const std::vector<Obj2>& c, const std::vector<std::vector<double>>& u,
                double m) {
    double j = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t k = 0; k < c.size(); ++k) j += std::pow(u[i][k], m) * dist2(s[i], c[k]);
    return j;
}

}  // namespace

std::vector<double> fcm_memberships(const Obj2& s, const std::vector<Obj2>& centers, double m) {
    const std::size_t nc = centers.size();
    std::vector<double> u(nc, 0.0);
    std::vector<double> d(nc);
    for (std::size_t k = 0; k < nc; ++k) {
        d[k] = std::sqrt(dist2(s, centers[k]));
        if (d[k] == 0.0) {
            u[k] = 1.0;
            return u;
        }
    }
    const double e = 2.0 / (m - 1.0);
    for (std::size_t k = 0; k < nc; ++k) {
        double sum = 0.0;
        for (std::size_t q = 0; q < nc; ++q) sum += std::pow(d[k] / d[q], e);
        u[k] = 1.0 / sum;
    }
    // renormalize so rounding cannot push the row sum away from 1
    const double total = std::accumulate(u.begin(), u.end(), 0.0);
    for (auto& x : u) x /= total;
    return u;
}

FcmResult fcm_cluster(const std::vector<Obj2>& points, int n_clusters, std::uint64_t seed, const FcmOptions& opt) {
    if (n_clusters < 1) throw DegenerateInput("need at least one cluster");
    if (!(opt.fuzziness > 1.0)) throw DegenerateInput("fuzziness must exceed 1");
    std::vector<Obj2> distinct;
    for (const auto& p : points)
        if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) distinct.push_back(p);
    if (distinct.size() <= 1) throw DegenerateInput("all points identical");
    if (distinct.size() < static_cast<std::size_t>(n_clusters)) throw DegenerateInput("fewer distinct points than clusters");

    const Scaling sc = scaling_of(points);
    std::vector<Obj2> s;
    for (const auto& p : points) s.push_back(sc.to(p));
    const std::size_t np = s.size(), nc = static_cast<std::size_t>(n_clusters);
    const double m = opt.fuzziness;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    FcmResult r;
    r.memberships.assign(np, std::vector<double>(nc));
    for (auto& row : r.memberships) {
        double sum = 0.0;
        for (auto& x : row) sum += (x = uni(rng) + 1e-3);
        for (auto& x : row) x /= sum;
    }

    std::vector<Obj2> c(nc, Obj2{});
    auto update_centers = [&] {
        std::vector<Obj2> out(nc, Obj2{});
        for (std::size_t k = 0; k < nc; ++k) {
            double den = 0.0;
            for (std::size_t i = 0; i < np; ++i) {
                const double w = std::pow(r.memberships[i][k], m);
                out[k][0] += w * s[i][0];
                out[k][1] += w * s[i][1];
                den += w;
            }
            if (den > 0.0) {
                out[k][0] /= den;
                out[k][1] /= den;
            }
        }
        return out;
    };
    c = update_centers();
    for (int it = 1; it <= opt.max_iter; ++it) {
        r.iterations = it;
        for (std::size_t i = 0; i < np; ++i) r.memberships[i] = fcm_memberships(s[i], c, m);
        r.loss_history.push_back(fcm_loss(s, c, r.memberships, m));
        const auto next = update_centers();
        double move = 0.0;
        for (std::size_t k = 0; k < nc; ++k) move = std::max(move, std::sqrt(dist2(next[k], c[k])));
        c = next;
        if (move <= opt.tol) break;
    }
    r.loss = fcm_loss(s, c, r.memberships, m);
    r.centers_normalized = c;
    for (const auto& x : c) r.centers.push_back(sc.from(x));
    return r;
}

GrpRanking grp_priority(const std::vector<Obj2>& cluster, Obj2 weights) {
    if (cluster.empty()) throw DegenerateInput("empty cluster");
    if (!(weights[0] >= 0.0) || !(weights[1] >= 0.0) || !(weights[0] + weights[1] > 0.0))
        throw DegenerateInput("weights must be non-negative with a positive sum");
    GrpRanking g;
    const double wsum = weights[0] + weights[1];
    g.weights = {weights[0] / wsum, weights[1] / wsum};
    const std::size_t n = cluster.size();
    const double w2 = g.weights[0] * g.weights[0] + g.weights[1] * g.weights[1];
    g.v0 = w2 / std::sqrt(w2);
    if (n == 1) {
        g.degenerate = true;
        g.index = {Obj2{1.0, 1.0}};
        g.gamma_plus = {Obj2{1.0, 1.0}};
        g.gamma_minus = {Obj2{1.0, 1.0}};
        g.v_plus = {g.v0};
        g.v_minus = {g.v0};
        g.d = {1.0};
        return g;
    }

    // Smaller is better for both objectives: invert during min-max normalization.
    g.index.resize(n);
    for (int k = 0; k < 2; ++k) {
        double lo = cluster[0][k], hi = lo;
        for (const auto& p : cluster) {
            lo = std::min(lo, p[k]);
            hi = std::max(hi, p[k]);
        }
        for (std::size_t l = 0; l < n; ++l) g.index[l][k] = hi > lo ? (hi - cluster[l][k]) / (hi - lo) : 1.0;
    }

    auto coefficients = [&](double target) {
        std::vector<Obj2> delta(n);
        double dmin = INFINITY, dmax = 0.0;
        for (std::size_t l = 0; l < n; ++l)
            for (int k = 0; k < 2; ++k) {
                delta[l][k] = std::abs(target - g.index[l][k]);
                dmin = std::min(dmin, delta[l][k]);
                dmax = std::max(dmax, delta[l][k]);
            }
        std::vector<Obj2> gamma(n);
        for (std::size_t l = 0; l < n; ++l)
            for (int k = 0; k < 2; ++k)
                gamma[l][k] = dmax > 0.0 ? (dmin + kGreyResolution * dmax) / (delta[l][k] + kGreyResolution * dmax) : 1.0;
        return gamma;
    };
    g.gamma_plus = coefficients(1.0);
    g.gamma_minus = coefficients(0.0);

    auto project = [&](const Obj2& gamma) {
        return (gamma[0] * g.weights[0] * g.weights[0] + gamma[1] * g.weights[1] * g.weights[1]) / std::sqrt(w2);
    };
    for (std::size_t l = 0; l < n; ++l) {
        const double vp = project(g.gamma_plus[l]), vm = project(g.gamma_minus[l]);
        g.v_plus.push_back(vp);
        g.v_minus.push_back(vm);
        const double a = (g.v0 - vm) * (g.v0 - vm), b = (g.v0 - vp) * (g.v0 - vp);
        g.d.push_back(a + b > 0.0 ? a / (a + b) : 1.0);
    }
    return g;
}

DecisionReport select_compromise(const std::vector<Obj2>& points, int n_clusters, Obj2 weights, std::uint64_t seed) {
    if (points.empty()) throw DegenerateInput("empty Pareto set");
    DecisionReport rep;
    rep.fcm = fcm_cluster(points, n_clusters, seed);
    const std::size_t nc = static_cast<std::size_t>(n_clusters);

    std::vector<std::vector<std::size_t>> members(nc);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& row = rep.fcm.memberships[i];
        members[static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin())].push_back(i);
    }
    std::vector<std::size_t> order(nc);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return rep.fcm.centers[a][0] < rep.fcm.centers[b][0]; });

    for (auto k : order) {
        if (members[k].empty()) continue;
        ClusterReport cr;
        cr.center = rep.fcm.centers[k];
        cr.members = members[k];
        std::vector<Obj2> pts;
        for (auto i : cr.members) pts.push_back(points[i]);
        cr.ranking = grp_priority(pts, weights);
        const auto best = static_cast<std::size_t>(std::max_element(cr.ranking.d.begin(), cr.ranking.d.end()) -
                                                   cr.ranking.d.begin());
        cr.compromise = cr.members[best];
        cr.tie = std::count(cr.ranking.d.begin(), cr.ranking.d.end(), cr.ranking.d[best]) > 1;
        cr.label = "intermediate";
        rep.clusters.push_back(std::move(cr));
    }
    if (!rep.clusters.empty()) {
        rep.clusters.front().label = "cost-preferring";
        if (rep.clusters.size() > 1) rep.clusters.back().label = "deviation-preferring";
    }
    return rep;
}

DecisionReport select_compromise(const std::vector<ObjectivePoint>& points, int n_clusters, Obj2 weights,
                                 std::uint64_t seed) {
    std::vector<Obj2> pts;
    for (const auto& p : points) pts.push_back({p.f_cost, p.v_dev});
    return select_compromise(pts, n_clusters, weights, seed);
}

}  // namespace acdc
