#pragma once

#include <string>
#include <vector>

#include "acdc/acdc_sequential.hpp"

namespace acdc {

struct ObjectivePoint {
    double f_cost = 0.0;     // $/h
    double v_dev = 0.0;      // p.u.^2
    double violation = 0.0;  // normalized, >= 0
    bool feasible = true;    // violation <= 1e-6
};

constexpr double kFeasibilityTol = 1e-6;
constexpr double kNonConvergenceSurcharge = 10.0;

double generation_cost(const SystemState& s, const CaseData& c);
double generation_cost(const std::vector<double>& p_gen, const CaseData& c);

/// Sum of squared AC bus deviations from v_ref, plus DC bus deviations from
/// u_ref when include_dc is set.
double voltage_deviation(const SystemState& s, const CaseData& c, bool include_dc);

struct Breach {
    std::string constraint;  // e.g. "bus voltage"
    std::string entity;      // e.g. "bus 5"
    double excess = 0.0;     // raw amount outside the limit
    double normalized = 0.0;
};

struct ViolationReport {
    double total = 0.0;
    std::vector<Breach> breaches;
    bool surcharge = false;
};

ViolationReport constraint_violation(const SystemState& s, const CaseData& c);

ObjectivePoint evaluate(const SystemState& s, const CaseData& c, bool include_dc);

}  // namespace acdc
