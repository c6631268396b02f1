#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "acdc/decision_space.hpp"
#include "acdc/pareto.hpp"

namespace acdc {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// How adjacent subswarms share their best positions every i_t iterations.
/// Overwrite: the neighbour's leader pool is replaced by the sender's sub-gbest.
/// Merge: the sub-gbest is inserted into the neighbour's pool.
enum class ExchangeMode { Overwrite, Merge };

struct OptimizerConfig {
    int s_pop = 100;
    int subswarms = 4;  // subswarm size s_sub = s_pop / subswarms
    int i_max = 50;
    int i_t = 5;
    std::uint64_t seed = 42;
    std::size_t archive_capacity = 100;
    double w_start = 0.9;
    double w_end = 0.4;
    double c1 = 2.0;
    double c2 = 2.0;
    ExchangeMode exchange = ExchangeMode::Overwrite;
    bool include_seed_point = true;  // start one individual at the problem's seed point

    int s_sub() const { return subswarms > 0 ? s_pop / subswarms : 0; }
};

/// Throws ConfigError when the configuration is unusable.
void validate_config(const OptimizerConfig& cfg);

struct RunStats {
    long evaluations = 0;
    double wall_seconds = 0.0;
    std::vector<double> hv_trace;  // per iteration, against one reference over the whole run
    double max_velocity_ratio = 0.0;  // max |v| / v_max seen over the run (CMOPSO only)
};

struct RunResult {
    ParetoArchive archive;
    RunStats stats;
};

RunResult run_cmopso(Problem& problem, const OptimizerConfig& cfg);
RunResult run_nsga2(Problem& problem, const OptimizerConfig& cfg);

RunResult run_cmopso(const CaseData& c, const OptimizerConfig& cfg, bool include_dc = true);
RunResult run_nsga2(const CaseData& c, const OptimizerConfig& cfg, bool include_dc = true);

/// Builds the per-iteration hypervolume trace from archive snapshots.
std::vector<double> hypervolume_trace(const std::vector<std::vector<ObjectivePoint>>& snapshots);

}  // namespace acdc
