#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "acdc/objectives.hpp"

namespace acdc {

using Obj2 = std::array<double, 2>;  // (f_cost, v_dev)

class DegenerateInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct FcmResult {
    std::vector<std::vector<double>> memberships;  // N_p x N_clu
    std::vector<Obj2> centers;                     // raw objective units
    std::vector<Obj2> centers_normalized;          // min-max space the clustering ran in
    double loss = 0.0;
    std::vector<double> loss_history;  // J after every membership update
    int iterations = 0;
};

struct FcmOptions {
    double fuzziness = 2.0;
    double tol = 1e-8;
    int max_iter = 300;
};

/// Fuzzy C-means on min-max normalized objective vectors.
FcmResult fcm_cluster(const std::vector<Obj2>& points, int n_clusters, std::uint64_t seed, const FcmOptions& opt = {});

/// Membership row for one point given centers, with the coincidence rule.
std::vector<double> fcm_memberships(const Obj2& s, const std::vector<Obj2>& centers, double fuzziness);

struct GrpRanking {
    std::vector<Obj2> index;        // normalized benefit indices, 1 = best
    std::vector<Obj2> gamma_plus;   // grey relational coefficients against the ideal row
    std::vector<Obj2> gamma_minus;  // against the negative-ideal row
    std::vector<double> v_plus, v_minus, d;
    double v0 = 0.0;
    Obj2 weights{0.5, 0.5};  // normalized to sum 1
    bool degenerate = false; // single-solution cluster, d = 1 by convention
};

constexpr double kGreyResolution = 0.5;

/// Grey relation projection priority memberships for one cluster.
GrpRanking grp_priority(const std::vector<Obj2>& cluster, Obj2 weights = {0.5, 0.5});

struct ClusterReport {
    std::string label;
    Obj2 center{};
    std::vector<std::size_t> members;  // indices into the input
    GrpRanking ranking;
    std::size_t compromise = 0;  // index into the input
    bool tie = false;            // another member shares the maximal d
};

struct DecisionReport {
    FcmResult fcm;
    std::vector<ClusterReport> clusters;  // ordered by center f_cost
};

/// Clusters the Pareto set, ranks each cluster by GRP and picks the argmax-d
/// member of each cluster.
DecisionReport select_compromise(const std::vector<Obj2>& points, int n_clusters, Obj2 weights, std::uint64_t seed);
DecisionReport select_compromise(const std::vector<ObjectivePoint>& points, int n_clusters, Obj2 weights,
                                 std::uint64_t seed);

}  // namespace acdc
