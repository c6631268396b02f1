#include "acdc/cmopso.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>

namespace acdc {

void validate_config(const OptimizerConfig& cfg) {
    if (cfg.s_pop < 2) throw ConfigError("pop must be at least 2");
    if (cfg.subswarms < 1) throw ConfigError("subswarms must be at least 1");
    if (cfg.s_pop % cfg.subswarms != 0) throw ConfigError("pop not divisible by subswarms");
    if (cfg.i_max < 1) throw ConfigError("iters must be at least 1");
    if (cfg.i_t < 1) throw ConfigError("exchange interval must be at least 1");
    if (cfg.archive_capacity < 1) throw ConfigError("archive capacity must be at least 1");
    if (cfg.c1 < 0 || cfg.c2 < 0 || cfg.w_start < 0 || cfg.w_end < 0) throw ConfigError("negative PSO coefficient");
}

std::vector<double> hypervolume_trace(const std::vector<std::vector<ObjectivePoint>>& snapshots) {
    std::vector<ObjectivePoint> all;
    for (const auto& s : snapshots) all.insert(all.end(), s.begin(), s.end());
    const auto ref = nadir_reference(all);
    std::vector<double> out;
    for (const auto& s : snapshots) out.push_back(hypervolume_2d(s, ref));
    return out;
}

namespace {

struct Particle {
    std::vector<double> x, v, best_x;
    ObjectivePoint obj, best;
};

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

// Binary tournament on crowding distance among the candidates `idx` of `pool`.
const Solution& tournament(const std::vector<Solution>& pool, const std::vector<double>& crowd,
                           const std::vector<std::size_t>& idx, Rng& rng) {
    if (idx.size() == 1) return pool[idx.front()];
    const std::size_t a = idx[pick(rng, idx.size())], b = idx[pick(rng, idx.size())];
    return crowd[b] > crowd[a] ? pool[b] : pool[a];
}

// Contiguous share of the cost-sorted archive assigned to subswarm s.
std::vector<std::size_t> slice_of(std::size_t m, std::size_t s, std::size_t n_sub) {
    std::vector<std::size_t> out;
    if (m < n_sub) {
        for (std::size_t i = 0; i < m; ++i) out.push_back(i);
        return out;
    }
    for (std::size_t i = s * m / n_sub; i < (s + 1) * m / n_sub; ++i) out.push_back(i);
    return out;
}

}  // namespace

RunResult run_cmopso(Problem& problem, const OptimizerConfig& cfg) {
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(cfg.seed);
    const std::size_t n = problem.dim();
    const auto lo = problem.lower(), hi = problem.upper();
    std::vector<double> vmax(n);
    for (std::size_t d = 0; d < n; ++d) vmax[d] = 0.2 * (hi[d] - lo[d]);

    const auto n_sub = static_cast<std::size_t>(cfg.subswarms);
    const auto sz = static_cast<std::size_t>(cfg.s_sub());
    std::vector<Particle> swarm(static_cast<std::size_t>(cfg.s_pop));
    RunResult res{ParetoArchive(cfg.archive_capacity), {}};
    // Candidates received from the ring neighbour at the last exchange; used for one iteration.
    std::vector<std::optional<Solution>> received(n_sub);
    std::vector<std::vector<ObjectivePoint>> snapshots;

    const auto seed_x = problem.seed_point();
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        auto& p = swarm[i];
        p.x.resize(n);
        p.v.assign(n, 0.0);
        for (std::size_t d = 0; d < n; ++d) p.x[d] = uniform(rng, lo[d], hi[d]);
        if (i == 0 && cfg.include_seed_point && seed_x.size() == n) p.x = seed_x;
    }
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        auto& p = swarm[i];
        p.obj = problem.evaluate(p.x, i);
        ++res.stats.evaluations;
        p.best_x = p.x;
        p.best = p.obj;
        res.archive.insert({p.x, p.obj});
    }
    snapshots.push_back(res.archive.objectives());

    double max_ratio = 0.0;
    for (int it = 1; it <= cfg.i_max; ++it) {
        const double frac = cfg.i_max > 1 ? static_cast<double>(it - 1) / (cfg.i_max - 1) : 0.0;
        const double w = cfg.w_start - (cfg.w_start - cfg.w_end) * frac;
        for (std::size_t s = 0; s < n_sub; ++s) {
            res.archive.sort_by_cost();
            const auto& pool = res.archive.entries();
            const auto crowd = crowding_distances(res.archive.objectives());
            const auto slice = slice_of(pool.size(), s, n_sub);
            for (std::size_t i = s * sz; i < (s + 1) * sz; ++i) {
                auto& p = swarm[i];
                const Solution* leader = nullptr;
                if (received[s] && (cfg.exchange == ExchangeMode::Overwrite || pick(rng, slice.size() + 1) == 0))
                    leader = &*received[s];
                else
                    leader = &tournament(pool, crowd, slice, rng);
                const double r1 = uniform(rng, 0.0, 1.0), r2 = uniform(rng, 0.0, 1.0);
                for (std::size_t d = 0; d < n; ++d) {
                    double v = w * p.v[d] + cfg.c1 * r1 * (p.best_x[d] - p.x[d]) + cfg.c2 * r2 * (leader->x[d] - p.x[d]);
                    v = std::clamp(v, -vmax[d], vmax[d]);
                    double x = p.x[d] + v;
                    if (x < lo[d]) {
                        x = lo[d] + (lo[d] - x);
                        v = -v;
                    } else if (x > hi[d]) {
                        x = hi[d] - (x - hi[d]);
                        v = -v;
                    }
                    p.x[d] = std::clamp(x, lo[d], hi[d]);
                    p.v[d] = v;
                    if (vmax[d] > 0.0) max_ratio = std::max(max_ratio, std::abs(v) / vmax[d]);
                }
                p.obj = problem.evaluate(p.x, i);
                ++res.stats.evaluations;
                if (dominates(p.obj, p.best) || (!dominates(p.best, p.obj) && uniform(rng, 0.0, 1.0) < 0.5)) {
                    p.best_x = p.x;
                    p.best = p.obj;
                }
            }
            received[s].reset();
            // Merge this subswarm's results in particle order.
            for (std::size_t i = s * sz; i < (s + 1) * sz; ++i) res.archive.insert({swarm[i].x, swarm[i].obj});
        }
        if (n_sub > 1 && it % cfg.i_t == 0) {
            res.archive.sort_by_cost();
            const auto crowd = crowding_distances(res.archive.objectives());
            std::vector<Solution> sent;
            for (std::size_t s = 0; s < n_sub; ++s)
                sent.push_back(tournament(res.archive.entries(), crowd, slice_of(res.archive.size(), s, n_sub), rng));
            for (std::size_t s = 0; s < n_sub; ++s) received[(s + 1) % n_sub] = sent[s];
        }
        snapshots.push_back(res.archive.objectives());
    }
    res.archive.sort_by_cost();
    res.stats.max_velocity_ratio = max_ratio;
    res.stats.hv_trace = hypervolume_trace(snapshots);
    res.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

RunResult run_cmopso(const CaseData& c, const OptimizerConfig& cfg, bool include_dc) {
    OpfProblem prob(c, include_dc);
    return run_cmopso(prob, cfg);
}

}  // namespace acdc
