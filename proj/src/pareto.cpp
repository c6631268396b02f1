#include "acdc/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace acdc {

bool dominates(const ObjectivePoint& a, const ObjectivePoint& b) {
    if (a.feasible != b.feasible) return a.feasible;
    if (!a.feasible) return a.violation < b.violation;
    return a.f_cost <= b.f_cost && a.v_dev <= b.v_dev && (a.f_cost < b.f_cost || a.v_dev < b.v_dev);
}

std::vector<double> crowding_distances(const std::vector<ObjectivePoint>& pts) {
    const std::size_t n = pts.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n, 0.0);
    if (n <= 2) return std::vector<double>(n, inf);
    std::vector<std::size_t> idx(n);
    for (int obj = 0; obj < 2; ++obj) {
        auto val = [&](std::size_t i) { return obj == 0 ? pts[i].f_cost : pts[i].v_dev; };
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return val(a) < val(b); });
        const double span = val(idx.back()) - val(idx.front());
        d[idx.front()] = inf;
        d[idx.back()] = inf;
        if (span <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < n; ++k) d[idx[k]] += (val(idx[k + 1]) - val(idx[k - 1])) / span;
    }
    return d;
}

bool ParetoArchive::insert(const Solution& s) {
    for (const auto& e : entries_) {
        if (dominates(e.obj, s.obj)) return false;
        if (e.obj.f_cost == s.obj.f_cost && e.obj.v_dev == s.obj.v_dev && e.obj.violation == s.obj.violation)
            return false;
    }
    std::erase_if(entries_, [&](const Solution& e) { return dominates(s.obj, e.obj); });
    entries_.push_back(s);
    if (entries_.size() > capacity_) {
        const auto d = crowding_distances(objectives());
        const auto worst = std::min_element(d.begin(), d.end()) - d.begin();
        const bool evicted_new = static_cast<std::size_t>(worst) == entries_.size() - 1;
        entries_.erase(entries_.begin() + worst);
        return !evicted_new;
    }
    return true;
}

std::vector<ObjectivePoint> ParetoArchive::objectives() const {
    std::vector<ObjectivePoint> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.obj);
    return out;
}

void ParetoArchive::sort_by_cost() {
    std::stable_sort(entries_.begin(), entries_.end(), [](const Solution& a, const Solution& b) {
        if (a.obj.feasible != b.obj.feasible) return a.obj.feasible;
        return a.obj.f_cost < b.obj.f_cost;
    });
}

double hypervolume_2d(const std::vector<ObjectivePoint>& pts, std::pair<double, double> ref) {
    std::vector<std::pair<double, double>> p;
    for (const auto& o : pts)
        if (o.feasible && o.f_cost < ref.first && o.v_dev < ref.second) p.emplace_back(o.f_cost, o.v_dev);
    std::sort(p.begin(), p.end());
    double hv = 0.0, best_v = ref.second;
    for (const auto& [f, v] : p) {
        if (v >= best_v) continue;
        hv += (ref.first - f) * (best_v - v);
        best_v = v;
    }
    return hv;
}

std::pair<double, double> nadir_reference(const std::vector<ObjectivePoint>& pts, double factor) {
    double f = -std::numeric_limits<double>::infinity(), v = f;
    for (const auto& o : pts) {
        if (!o.feasible) continue;
        f = std::max(f, o.f_cost);
        v = std::max(v, o.v_dev);
    }
    return {f * factor, v * factor};
}

double generational_distance(const std::vector<std::pair<double, double>>& pts,
                             const std::vector<std::pair<double, double>>& front) {
    if (pts.empty() || front.empty()) return std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& p : pts) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : front) best = std::min(best, std::hypot(p.first - q.first, p.second - q.second));
        sum += best;
    }
    return sum / static_cast<double>(pts.size());
}

std::vector<std::size_t> non_dominated(const std::vector<ObjectivePoint>& pts) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dom = false;
        for (std::size_t j = 0; j < pts.size() && !dom; ++j) dom = j != i && dominates(pts[j], pts[i]);
        if (!dom) out.push_back(i);
    }
    return out;
}

}  // namespace acdc
