#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "acdc/cmopso.hpp"
#include "acdc/decision_support.hpp"

namespace acdc {

using Json = nlohmann::ordered_json;

Json state_to_json(const SystemState& s, const CaseData& c, bool include_dc);

/// One row per archive entry: physical control values, then the objectives.
struct ParetoTable {
    std::vector<std::string> control_names;
    std::vector<std::vector<double>> controls;
    std::vector<ObjectivePoint> objectives;
};

ParetoTable pareto_table(const DecisionSpace& space, const ParetoArchive& archive);
void write_pareto_csv(const std::filesystem::path& path, const ParetoTable& t);
/// Throws std::runtime_error on unreadable or malformed files.
ParetoTable read_pareto_csv(const std::filesystem::path& path);
Json pareto_to_json(const ParetoTable& t);
Json stats_to_json(const RunStats& s, const std::string& algo, const OptimizerConfig& cfg);
void write_front_dat(const std::filesystem::path& path, const std::vector<ObjectivePoint>& pts);

Json decision_to_json(const DecisionReport& r, const ParetoTable& t);
void write_compromise_csv(const std::filesystem::path& path, const DecisionReport& r, const ParetoTable& t);
void write_front_clustered_dat(const std::filesystem::path& path, const DecisionReport& r, const ParetoTable& t);

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace acdc
