#pragma once

#include <string>
#include <vector>

#include "acdc/cmopso.hpp"
#include "acdc/decision_support.hpp"

namespace acdc {

struct StudyVariant {
    std::string label;      // "Case 0", ...
    std::string case_name;  // shipped case file stem
    std::string description;
};

/// Case variants of a named study; throws std::invalid_argument for unknown names.
std::vector<StudyVariant> study_variants(const std::string& study);

/// Default iteration budget per case size.
int default_iterations(const CaseData& c);

struct VariantOutcome {
    StudyVariant variant;
    std::vector<ObjectivePoint> representative;  // per seed: argmax-d solution over the whole archive
    std::vector<double> min_cost;                // per seed
    std::vector<double> min_v_dev;               // per seed
    double median_f = 0.0;
    double median_v = 0.0;
    double imp_f = 0.0;  // % improvement of median F over the first variant
    double imp_v = 0.0;
};

struct StudyOptions {
    OptimizerConfig cfg;          // i_max <= 0 selects default_iterations per case
    std::vector<std::uint64_t> seeds{42};
    bool include_dc = true;
    Obj2 weights{0.5, 0.5};
};

/// Index of the highest-priority solution when the whole set is ranked as one group.
std::size_t representative_index(const std::vector<ObjectivePoint>& pts, Obj2 weights);

std::vector<VariantOutcome> run_study(const std::string& study, const StudyOptions& opt);

double median(std::vector<double> v);

}  // namespace acdc
