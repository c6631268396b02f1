#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "acdc/objectives.hpp"

namespace acdc {

/// Constrained (feasibility-first) dominance.
bool dominates(const ObjectivePoint& a, const ObjectivePoint& b);

struct Solution {
    std::vector<double> x;
    ObjectivePoint obj;
};

/// Crowding distance in (f_cost, v_dev) space; boundary points get +inf.
std::vector<double> crowding_distances(const std::vector<ObjectivePoint>& pts);

class ParetoArchive {
public:
    explicit ParetoArchive(std::size_t capacity = 100) : capacity_(capacity) {}

    /// Returns true when the candidate was kept.
    bool insert(const Solution& s);
    void clear() { entries_.clear(); }

    const std::vector<Solution>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::size_t capacity() const { return capacity_; }
    std::vector<ObjectivePoint> objectives() const;
    void sort_by_cost();

private:
    std::size_t capacity_;
    std::vector<Solution> entries_;
};

/// Feasible points only; `ref` must be weakly dominated by every counted point.
double hypervolume_2d(const std::vector<ObjectivePoint>& pts, std::pair<double, double> ref);

/// Componentwise max of the feasible points, scaled by `factor`.
std::pair<double, double> nadir_reference(const std::vector<ObjectivePoint>& pts, double factor = 1.1);

/// Mean Euclidean distance from each point to its nearest point of `front`.
double generational_distance(const std::vector<std::pair<double, double>>& pts,
                             const std::vector<std::pair<double, double>>& front);

/// Non-dominated subset of `pts` (indices), under constrained dominance.
std::vector<std::size_t> non_dominated(const std::vector<ObjectivePoint>& pts);

}  // namespace acdc
