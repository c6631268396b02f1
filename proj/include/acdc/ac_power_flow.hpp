#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "acdc/case_model.hpp"

namespace acdc {

using Complex = std::complex<double>;
using SparseComplex = Eigen::SparseMatrix<Complex>;

struct Ybus {
    SparseComplex matrix;
    std::vector<int> zero_diagonal_buses;  // SingularityWarning: ids of buses with a zero diagonal entry

    bool singular_warning() const { return !zero_diagonal_buses.empty(); }
};

/// Nodal admittance matrix. `taps` holds one ratio per tap-changer branch (see
/// CaseData::tap_branches) and may be empty to use the case ratios; `shunt_q`
/// holds one susceptance per capacitor bank and may be empty to use the case values.
/// Converter filter susceptances are added at their AC terminals.
Ybus build_ybus(const CaseData& c, std::span<const double> taps = {}, std::span<const double> shunt_q = {});

/// Control settings that shape the AC network and its regulated quantities.
struct AcSettings {
    std::vector<double> gen_p;    // per generator; ignored for the slack unit
    std::vector<double> gen_v;    // per generator voltage set-point
    std::vector<double> taps;     // per tap-changer branch
    std::vector<double> shunt_q;  // per capacitor bank
};

AcSettings default_ac_settings(const CaseData& c);

/// Extra bus injections from converters and voltage pins for buses whose
/// converter regulates the AC terminal voltage.
struct AcInjectionOverlay {
    std::vector<double> p;                     // per bus index, p.u. injected into the bus
    std::vector<double> q;                     // per bus index
    std::vector<std::optional<double>> v_pin;  // per bus index

    explicit AcInjectionOverlay(std::size_t n_bus = 0) : p(n_bus, 0.0), q(n_bus, 0.0), v_pin(n_bus) {}
};

struct AcState {
    std::vector<double> v;
    std::vector<double> theta;
    std::vector<double> p_inj;  // net computed injection per bus
    std::vector<double> q_inj;
    std::vector<double> p_gen;  // per generator
    std::vector<double> q_gen;
    std::vector<double> p_from, q_from, p_to, q_to;  // per branch end, flowing into the branch
    std::vector<int> q_limited_buses;                // PV buses switched to PQ at a reactive limit
    bool converged = false;
    int iterations = 0;
    double max_mismatch = 0.0;
};

struct AcOptions {
    double tol = 1e-6;
    int max_iter = 30;
    bool enforce_q_limits = true;
    const AcState* warm_start = nullptr;
};

/// Polar Newton-Raphson power flow. Non-convergence is reported through
/// AcState::converged rather than thrown.
AcState solve_ac_pf(const CaseData& c, const AcInjectionOverlay& overlay, const AcSettings& settings,
                    const AcOptions& opt = {});

/// Mismatch equations of one Newton step with a fixed bus typing; exposed so
/// the Jacobian can be checked against finite differences.
class PowerFlowEquations {
public:
    PowerFlowEquations(const SparseComplex& ybus, std::vector<int> pv, std::vector<int> pq,
                       Eigen::VectorXd p_spec, Eigen::VectorXd q_spec);

    /// Unknowns: theta at pv+pq buses followed by |V| at pq buses.
    Eigen::VectorXd pack(const Eigen::VectorXd& v, const Eigen::VectorXd& theta) const;
    void unpack(const Eigen::VectorXd& x, Eigen::VectorXd& v, Eigen::VectorXd& theta) const;

    Eigen::VectorXd mismatch(const Eigen::VectorXd& v, const Eigen::VectorXd& theta) const;
    Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& v, const Eigen::VectorXd& theta) const;

    std::size_t size() const { return pv_.size() + 2 * pq_.size(); }

private:
    const SparseComplex& ybus_;
    std::vector<int> pv_, pq_;
    std::vector<int> angle_pos_, mag_pos_;  // per bus: unknown index or -1
    Eigen::VectorXd p_spec_, q_spec_;
};

/// Complex bus power injections S = V * conj(Y V).
Eigen::VectorXcd bus_injections(const SparseComplex& ybus, const Eigen::VectorXd& v, const Eigen::VectorXd& theta);

}  // namespace acdc
