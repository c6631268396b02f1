#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace acdc {

// All electrical quantities are per-unit on CaseData::s_base; costs are $/h.

enum class BusKind { Slack, PV, PQ };

struct AcBus {
    int id = 0;
    BusKind kind = BusKind::PQ;
    double p_load = 0.0;
    double q_load = 0.0;
    double shunt_g = 0.0;
    double shunt_b = 0.0;
    double v_min = 0.94;
    double v_max = 1.06;
    double v_ref = 1.0;
    bool operator==(const AcBus&) const = default;
};

/// Discrete on-load tap changer. Positions are ratio_min + k * step, k = 0..step_count().
struct TapChanger {
    double ratio_min = 0.9;
    double ratio_max = 1.1;
    double step = 0.0125;

    /// Number of steps across the range, or -1 when the step does not divide it.
    int step_count() const;
    bool operator==(const TapChanger&) const = default;
};

struct AcBranch {
    int from = 0;
    int to = 0;
    double r = 0.0;
    double x = 0.0;
    double b_charging = 0.0;
    double ratio = 1.0;  // initial off-nominal ratio on the from side
    std::optional<TapChanger> tap;
    double s_max = 99.0;
    bool operator==(const AcBranch&) const = default;
};

struct Generator {
    int bus = 0;
    double p = 0.0;      // initial dispatch
    double v_set = 1.0;  // initial terminal voltage set-point
    double p_min = 0.0;
    double p_max = 0.0;
    double q_min = 0.0;
    double q_max = 0.0;
    double cost_a = 0.0;  // $/h per p.u.^2
    double cost_b = 0.0;  // $/h per p.u.
    double cost_c = 0.0;  // $/h
    bool controllable = true;
    bool operator==(const Generator&) const = default;
};

/// Switchable capacitor bank; q is the reactive injection at 1.0 p.u. voltage.
struct ShuntCapacitorBank {
    int bus = 0;
    double q = 0.0;
    double q_min = 0.0;
    double q_max = 0.0;
    double step = 0.01;

    int step_count() const;
    bool operator==(const ShuntCapacitorBank&) const = default;
};

struct DcBus {
    int id = 0;
    double u_min = 0.94;
    double u_max = 1.06;
    double u_ref = 1.0;
    std::optional<double> i_max;  // optional injected-current limit
    bool operator==(const DcBus&) const = default;
};

struct DcBranch {
    int from = 0;
    int to = 0;
    double r = 0.0;
    double i_max = 0.0;
    bool operator==(const DcBranch&) const = default;
};

/// Annular P-Q capability region of a converter's AC-side injection.
struct PqCircle {
    double p0 = 0.0;
    double q0 = 0.0;
    double r_min = 0.0;
    double r_max = 1.0;
    bool operator==(const PqCircle&) const = default;
};

namespace mode {
struct ConstUdcConstQs {
    double u_dc = 1.0;
    double q_s = 0.0;
    bool operator==(const ConstUdcConstQs&) const = default;
};
struct ConstUdcConstUs {
    double u_dc = 1.0;
    double u_s = 1.0;
    bool operator==(const ConstUdcConstUs&) const = default;
};
struct ConstPsConstQs {
    double p_s = 0.0;
    double q_s = 0.0;
    bool operator==(const ConstPsConstQs&) const = default;
};
struct ConstPsConstUs {
    double p_s = 0.0;
    double u_s = 1.0;
    bool operator==(const ConstPsConstUs&) const = default;
};
/// p_s = p_s_set - (u_dc - u_dc_set) / slope, reactive power held at q_s.
struct Droop {
    double slope = 0.005;
    double u_dc = 1.0;
    double p_s = 0.0;
    double q_s = 0.0;
    bool operator==(const Droop&) const = default;
};
}  // namespace mode

using ControlMode =
    std::variant<mode::ConstUdcConstQs, mode::ConstUdcConstUs, mode::ConstPsConstQs, mode::ConstPsConstUs, mode::Droop>;

bool holds_dc_voltage(const ControlMode& m);
bool holds_ac_voltage(const ControlMode& m);
bool is_droop(const ControlMode& m);
std::string mode_name(const ControlMode& m);

struct Converter {
    int ac_bus = 0;
    int dc_bus = 0;
    double r_xfmr = 0.0;
    double x_xfmr = 0.0;
    double b_filter = 0.0;
    double loss_a = 11.033e-3;
    double loss_b = 3.464e-3;
    double loss_c = 5.534e-3;
    ControlMode mode = mode::ConstPsConstQs{};
    double p_s_min = -1.0;
    double p_s_max = 1.0;
    double q_s_min = -1.0;
    double q_s_max = 1.0;
    PqCircle pq_circle;
    double p_s = 0.0;  // initial operating point, used as the starting guess for free quantities
    double q_s = 0.0;
    bool operator==(const Converter&) const = default;
};

struct CaseData {
    std::string name;
    std::string description;
    double s_base = 100.0;
    std::vector<AcBus> buses;
    std::vector<AcBranch> branches;
    std::vector<Generator> generators;
    std::vector<ShuntCapacitorBank> shunts;
    std::vector<DcBus> dc_buses;
    std::vector<DcBranch> dc_branches;
    std::vector<Converter> converters;

    /// Position of AC bus `id` in `buses`; throws std::out_of_range when absent.
    std::size_t bus_index(int id) const;
    std::size_t dc_bus_index(int id) const;
    std::optional<std::size_t> find_bus(int id) const;
    std::optional<std::size_t> find_dc_bus(int id) const;
    /// Indices into `branches` of the branches that carry a tap changer, in file order.
    std::vector<std::size_t> tap_branches() const;
    std::size_t slack_bus() const;
    bool has_dc_grid() const { return !converters.empty(); }

    bool operator==(const CaseData&) const = default;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Violation {
    std::string entity;
    std::string message;
    bool operator==(const Violation&) const = default;
};

/// Loads a JSON case file. Throws ParseError on malformed JSON and SchemaError on
/// missing fields, bad enum values or dangling references.
CaseData load_case(const std::filesystem::path& path);
CaseData parse_case(const std::string& text);
std::string serialize_case(const CaseData& c);

/// Resolves a case argument: an existing path, or a shipped case name with or
/// without the .json suffix.
std::filesystem::path resolve_case_path(const std::string& name);

/// Checks every structural and numeric invariant; never throws.
std::vector<Violation> validate_case(const CaseData& c);

}  // namespace acdc
