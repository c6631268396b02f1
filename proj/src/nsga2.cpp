#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "acdc/cmopso.hpp"

namespace acdc {

namespace {

using Rng = std::mt19937_64;

struct Individual {
    std::vector<double> x;
    ObjectivePoint obj;
    int rank = 0;
    double crowd = 0.0;
};

double unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Fast non-dominated sort; assigns ranks and returns the fronts.
std::vector<std::vector<std::size_t>> sort_fronts(std::vector<Individual>& pop) {
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<int> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(pop[p].obj, pop[q].obj)) dominated[p].push_back(q);
            else if (dominates(pop[q].obj, pop[p].obj)) ++count[p];
        }
        if (count[p] == 0) {
            pop[p].rank = 0;
            fronts[0].push_back(p);
        }
    }
    for (std::size_t f = 0; !fronts[f].empty(); ++f) {
        std::vector<std::size_t> next;
        for (auto p : fronts[f])
            for (auto q : dominated[p])
                if (--count[q] == 0) {
                    pop[q].rank = static_cast<int>(f + 1);
                    next.push_back(q);
                }
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

void assign_crowding(std::vector<Individual>& pop, const std::vector<std::size_t>& front) {
    std::vector<ObjectivePoint> pts;
    for (auto i : front) pts.push_back(pop[i].obj);
    const auto d = crowding_distances(pts);
    for (std::size_t k = 0; k < front.size(); ++k) pop[front[k]].crowd = d[k];
}

const Individual& binary_tournament(const std::vector<Individual>& pop, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const auto& a = pop[pick(rng)];
    const auto& b = pop[pick(rng)];
    if (a.rank != b.rank) return a.rank < b.rank ? a : b;
    return b.crowd > a.crowd ? b : a;
}

constexpr double kEtaC = 20.0;
constexpr double kEtaM = 20.0;
constexpr double kPc = 0.9;

// Simulated binary crossover, bounded form.
void sbx(std::vector<double>& c1, std::vector<double>& c2, const std::vector<double>& lo, const std::vector<double>& hi,
         Rng& rng) {
    if (unit(rng) > kPc) return;
    for (std::size_t d = 0; d < c1.size(); ++d) {
        if (unit(rng) > 0.5) continue;
        double y1 = c1[d], y2 = c2[d];
        if (std::abs(y1 - y2) <= 1e-14) continue;
        if (y1 > y2) std::swap(y1, y2);
        const double yl = lo[d], yu = hi[d];
        const double u = unit(rng);
        auto betaq = [&](double beta) {
            const double alpha = 2.0 - std::pow(beta, -(kEtaC + 1.0));
            if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (kEtaC + 1.0));
            return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (kEtaC + 1.0));
        };
        const double b1 = 1.0 + 2.0 * (y1 - yl) / (y2 - y1);
        const double b2 = 1.0 + 2.0 * (yu - y2) / (y2 - y1);
        double ch1 = 0.5 * ((y1 + y2) - betaq(b1) * (y2 - y1));
        double ch2 = 0.5 * ((y1 + y2) + betaq(b2) * (y2 - y1));
        ch1 = std::clamp(ch1, yl, yu);
        ch2 = std::clamp(ch2, yl, yu);
        if (unit(rng) <= 0.5) std::swap(ch1, ch2);
        c1[d] = ch1;
        c2[d] = ch2;
    }
}

void polynomial_mutation(std::vector<double>& x, const std::vector<double>& lo, const std::vector<double>& hi, Rng& rng) {
    const double pm = 1.0 / static_cast<double>(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
        if (unit(rng) > pm) continue;
        const double span = hi[d] - lo[d];
        if (span <= 0.0) continue;
        const double y = x[d];
        const double d1 = (y - lo[d]) / span, d2 = (hi[d] - y) / span;
        const double u = unit(rng);
        const double p = 1.0 / (kEtaM + 1.0);
        double dq;
        if (u < 0.5) {
            const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, kEtaM + 1.0);
            dq = std::pow(v, p) - 1.0;
        } else {
            const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, kEtaM + 1.0);
            dq = 1.0 - std::pow(v, p);
        }
        x[d] = std::clamp(y + dq * span, lo[d], hi[d]);
    }
}

}  // namespace

RunResult run_nsga2(Problem& problem, const OptimizerConfig& cfg) {
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(cfg.seed);
    const std::size_t n = problem.dim();
    const auto lo = problem.lower(), hi = problem.upper();
    const auto np = static_cast<std::size_t>(cfg.s_pop);
    RunResult res{ParetoArchive(cfg.archive_capacity), {}};
    std::vector<std::vector<ObjectivePoint>> snapshots;

    std::vector<Individual> pop(np);
    const auto seed_x = problem.seed_point();
    for (std::size_t i = 0; i < np; ++i) {
        pop[i].x.resize(n);
        for (std::size_t d = 0; d < n; ++d) pop[i].x[d] = std::uniform_real_distribution<double>(lo[d], hi[d])(rng);
        if (i == 0 && cfg.include_seed_point && seed_x.size() == n) pop[i].x = seed_x;
    }
    for (std::size_t i = 0; i < np; ++i) {
        pop[i].obj = problem.evaluate(pop[i].x, i);
        ++res.stats.evaluations;
    }
    auto snapshot = [&](std::vector<Individual>& p) {
        const auto fronts = sort_fronts(p);
        for (const auto& f : fronts) assign_crowding(p, f);
        std::vector<ObjectivePoint> s;
        for (auto i : fronts.front()) s.push_back(p[i].obj);
        snapshots.push_back(std::move(s));
    };
    snapshot(pop);

    for (int gen = 1; gen <= cfg.i_max; ++gen) {
        std::vector<Individual> kids;
        while (kids.size() < np) {
            Individual a = binary_tournament(pop, rng), b = binary_tournament(pop, rng);
            sbx(a.x, b.x, lo, hi, rng);
            polynomial_mutation(a.x, lo, hi, rng);
            polynomial_mutation(b.x, lo, hi, rng);
            kids.push_back(std::move(a));
            if (kids.size() < np) kids.push_back(std::move(b));
        }
        for (std::size_t i = 0; i < np; ++i) {
            kids[i].obj = problem.evaluate(kids[i].x, i);
            ++res.stats.evaluations;
        }
        std::vector<Individual> merged = pop;
        merged.insert(merged.end(), kids.begin(), kids.end());
        const auto fronts = sort_fronts(merged);
        std::vector<Individual> next;
        for (const auto& f : fronts) {
            assign_crowding(merged, f);
            if (next.size() + f.size() <= np) {
                for (auto i : f) next.push_back(merged[i]);
                continue;
            }
            std::vector<std::size_t> order = f;
            std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return merged[x].crowd > merged[y].crowd; });
            for (std::size_t k = 0; next.size() < np; ++k) next.push_back(merged[order[k]]);
            break;
        }
        pop = std::move(next);
        snapshot(pop);
    }
    for (const auto& ind : pop)
        if (ind.rank == 0) res.archive.insert({ind.x, ind.obj});
    res.archive.sort_by_cost();
    res.stats.hv_trace = hypervolume_trace(snapshots);
    res.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

RunResult run_nsga2(const CaseData& c, const OptimizerConfig& cfg, bool include_dc) {
    OpfProblem prob(c, include_dc);
    return run_nsga2(prob, cfg);
}

}  // namespace acdc
