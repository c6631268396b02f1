#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "acdc/case_model.hpp"

namespace acdc {

// Sign conventions used throughout the converter model:
//   p_s, q_s  power drawn from the AC bus into the coupling branch,
//   p_c, q_c  power delivered by the coupling branch to the converter valve side,
//   p_dc      power the converter injects into the DC grid (u_dc * i_inj),
//   p_loss    converter loss; energy balance p_c = p_dc + p_loss.
// The coupling branch then satisfies p_s - p_c = |I|^2 r.

struct ConverterPowers {
    double p_s = 0.0;
    double q_s = 0.0;
    double p_c = 0.0;
    double q_c = 0.0;
};

/// AC-side and converter-side powers of the coupling branch with admittance g + jb.
ConverterPowers converter_powers(double u_s, double delta_s, double u_c, double delta_c, double g, double b);

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Converter current sqrt(p_c^2 + q_c^2) / (sqrt(3) u_c).
double converter_current(double p_c, double q_c, double u_c);

/// Quadratic loss a + b i_c + c i_c^2. Throws DomainError when u_c <= 0.
double converter_loss(double p_c, double q_c, double u_c, double a, double b, double c);

enum class Capability { Inside, BelowMin, AboveMax };

struct CapabilityCheck {
    Capability status = Capability::Inside;
    double amount = 0.0;  // radial deficit or excess, p.u.
};

CapabilityCheck check_pq_capability(double p_s, double q_s, const PqCircle& circle);

struct DroopLaw {
    double slope = 0.005;
    double u_dc_set = 1.0;
    double p_s_set = 0.0;

    double p_s_at(double u_dc) const { return p_s_set - (u_dc - u_dc_set) / slope; }
};

/// Which converter quantities a control mode pins, and to what.
struct ConverterSetpoints {
    std::optional<double> p_s;
    std::optional<double> q_s;
    std::optional<double> u_s;
    std::optional<double> u_dc;
    std::optional<DroopLaw> droop;
};

struct ControlAmbient {
    double u_dc = 1.0;
    double u_s = 1.0;
};

/// For droop modes the returned p_s is the droop characteristic evaluated at ambient.u_dc.
ConverterSetpoints resolve_control_mode(const ControlMode& m, const ControlAmbient& ambient = {});

struct ConverterState {
    double p_s = 0.0, q_s = 0.0;
    double p_c = 0.0, q_c = 0.0;
    double u_s = 1.0, delta_s = 0.0;
    double u_c = 1.0, delta_c = 0.0;
    double i_c = 0.0;
    double p_loss = 0.0;
    double p_dc = 0.0;
};

/// Converter operating point for a given AC terminal voltage and AC-side power draw.
ConverterState converter_state_from_ac(const Converter& conv, double u_s, double delta_s, double p_s, double q_s);

struct DcState {
    std::vector<double> u_dc;      // per DC bus
    std::vector<double> i_inj;     // current injected into the grid per DC bus
    std::vector<double> i_branch;  // per DC branch, positive from -> to
    bool converged = false;
    int iterations = 0;
    double max_residual = 0.0;
};

enum class DcStatus { Converged, NonConvergence, InfeasibleSetpoint };

struct DcSolution {
    DcState dc;
    std::vector<ConverterState> converters;
    DcStatus status = DcStatus::NonConvergence;
    std::vector<int> infeasible_converters;  // converter positions whose DC voltage left its bounds
};

/// Per-converter inputs to the DC solve: resolved set-points and the AC terminal voltage.
struct ConverterOperatingInput {
    ConverterSetpoints setpoints;
    double q_s = 0.0;  // reactive draw actually in force (set-point or from the AC solve)
    double u_s = 1.0;
    double delta_s = 0.0;
    double p_s_guess = 0.0;  // starting value for converters whose p_s is an outcome
};

struct DcOptions {
    double tol = 1e-8;
    int max_iter = 30;
    const DcState* warm_start = nullptr;
};

/// Nodal Newton solve of the resistive DC grid with converter power balances.
/// Constant-U_dc converters fix their bus voltage and absorb the imbalance; droop
/// converters follow their characteristic; P-controlled converters inject a fixed
/// DC power derived from their AC set-point after losses.
DcSolution solve_dc_grid(const CaseData& c, const std::vector<ConverterOperatingInput>& inputs,
                         const DcOptions& opt = {});

}  // namespace acdc
