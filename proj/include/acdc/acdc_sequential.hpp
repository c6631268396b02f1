#pragma once

#include <vector>

#include "acdc/ac_power_flow.hpp"
#include "acdc/case_model.hpp"
#include "acdc/vsc_dc_grid.hpp"

namespace acdc {

/// Everything the optimizer can move: AC-side settings plus each converter's
/// control mode carrying its set-points.
struct ControlSettings {
    AcSettings ac;
    std::vector<ControlMode> modes;  // per converter
};

ControlSettings base_controls(const CaseData& c);

struct SystemState {
    AcState ac;
    DcState dc;
    std::vector<ConverterState> converters;
    DcStatus dc_status = DcStatus::Converged;
    int outer_iterations = 0;
    double coupling_mismatch = 0.0;
    bool converged = false;
};

struct AcDcOptions {
    double tol_couple = 1e-6;
    int outer_max = 20;
    AcOptions ac;
    DcOptions dc;
    const SystemState* warm_start = nullptr;
};

/// Alternating AC/DC power flow. The AC grid is solved with the converters'
/// current AC-side draws, then the DC grid and converters are resolved from the
/// fresh terminal voltages, until the draws stop moving. Never throws on
/// numerical trouble; failure is reported through SystemState::converged.
SystemState solve_acdc(const CaseData& c, const ControlSettings& controls, const AcDcOptions& opt = {});

}  // namespace acdc
