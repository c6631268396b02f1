#include "acdc/decision_space.hpp"

#include <algorithm>
#include <cmath>

namespace acdc {

namespace {

std::string conv_name(std::size_t k, const char* field) { return "conv" + std::to_string(k) + "." + field; }

}  // namespace

DecisionSpace::DecisionSpace(const CaseData& c) : case_(&c) {
    const std::size_t slack = c.slack_bus();
    for (std::size_t g = 0; g < c.generators.size(); ++g) {
        const auto& gen = c.generators[g];
        if (!gen.controllable || c.bus_index(gen.bus) == slack) continue;
        vars_.push_back({"pg." + std::to_string(gen.bus), VarKind::GenP, g, gen.p_min, gen.p_max});
    }
    std::vector<int> seen;
    for (std::size_t g = 0; g < c.generators.size(); ++g) {
        const auto& gen = c.generators[g];
        const auto& bus = c.buses[c.bus_index(gen.bus)];
        // the slack unit keeps its case voltage set-point
        if (!gen.controllable || bus.kind != BusKind::PV) continue;
        if (std::find(seen.begin(), seen.end(), gen.bus) != seen.end()) continue;
        seen.push_back(gen.bus);
        vars_.push_back({"ug." + std::to_string(gen.bus), VarKind::GenV, g, bus.v_min, bus.v_max});
    }
    for (std::size_t k = 0; k < c.converters.size(); ++k) {
        const auto& cv = c.converters[k];
        const auto& dcb = c.dc_buses[c.dc_bus_index(cv.dc_bus)];
        const auto& acb = c.buses[c.bus_index(cv.ac_bus)];
        auto ps = [&] { vars_.push_back({conv_name(k, "p_s"), VarKind::ConvPs, k, cv.p_s_min, cv.p_s_max}); };
        auto qs = [&] { vars_.push_back({conv_name(k, "q_s"), VarKind::ConvQs, k, cv.q_s_min, cv.q_s_max}); };
        auto us = [&] { vars_.push_back({conv_name(k, "u_s"), VarKind::ConvUs, k, acb.v_min, acb.v_max}); };
        auto udc = [&] { vars_.push_back({conv_name(k, "u_dc"), VarKind::ConvUdc, k, dcb.u_min, dcb.u_max}); };
        std::visit(
            [&](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, mode::ConstUdcConstQs>) { udc(); qs(); }
                else if constexpr (std::is_same_v<T, mode::ConstUdcConstUs>) { udc(); us(); }
                else if constexpr (std::is_same_v<T, mode::ConstPsConstQs>) { ps(); qs(); }
                else if constexpr (std::is_same_v<T, mode::ConstPsConstUs>) { ps(); us(); }
                else { ps(); udc(); qs(); }
            },
            cv.mode);
    }
    const auto tapped = c.tap_branches();
    for (std::size_t t = 0; t < tapped.size(); ++t) {
        const auto& br = c.branches[tapped[t]];
        Variable v{"tap." + std::to_string(br.from) + "-" + std::to_string(br.to), VarKind::Tap, t, 0.0,
                   static_cast<double>(br.tap->step_count()), true, br.tap->ratio_min, br.tap->step};
        vars_.push_back(v);
    }
    for (std::size_t s = 0; s < c.shunts.size(); ++s) {
        const auto& sh = c.shunts[s];
        Variable v{"qc." + std::to_string(sh.bus), VarKind::Shunt, s, 0.0, static_cast<double>(sh.step_count()),
                   true, sh.q_min, sh.step};
        vars_.push_back(v);
    }
}

std::vector<double> DecisionSpace::lower() const {
    std::vector<double> out;
    for (const auto& v : vars_) out.push_back(v.lo);
    return out;
}

std::vector<double> DecisionSpace::upper() const {
    std::vector<double> out;
    for (const auto& v : vars_) out.push_back(v.hi);
    return out;
}

std::vector<double> DecisionSpace::clamp(std::vector<double> x) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) x[i] = std::clamp(x[i], vars_[i].lo, vars_[i].hi);
    return x;
}

std::vector<double> DecisionSpace::physical(const std::vector<double>& x) const {
    std::vector<double> out(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto& v = vars_[i];
        if (v.integer) {
            const double idx = std::clamp(std::round(x[i]), v.lo, v.hi);
            out[i] = v.grid_min + idx * v.grid_step;
        } else {
            out[i] = std::clamp(x[i], v.lo, v.hi);
        }
    }
    return out;
}

ControlSettings DecisionSpace::decode(const std::vector<double>& x) const {
    ControlSettings s = base_controls(*case_);
    const auto val = physical(x);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto& v = vars_[i];
        const double p = val[i];
        switch (v.kind) {
            case VarKind::GenP: s.ac.gen_p[v.target] = p; break;
            case VarKind::GenV: {
                // one set-point per bus: every unit sharing the bus follows it
                const int bus = case_->generators[v.target].bus;
                for (std::size_t g = 0; g < case_->generators.size(); ++g)
                    if (case_->generators[g].bus == bus) s.ac.gen_v[g] = p;
                break;
            }
            case VarKind::Tap: s.ac.taps[v.target] = p; break;
            case VarKind::Shunt: s.ac.shunt_q[v.target] = p; break;
            default:
                std::visit(
                    [&](auto& m) {
                        using T = std::decay_t<decltype(m)>;
                        if constexpr (requires { m.p_s; }) if (v.kind == VarKind::ConvPs) m.p_s = p;
                        if constexpr (requires { m.q_s; }) if (v.kind == VarKind::ConvQs) m.q_s = p;
                        if constexpr (requires { m.u_s; }) if (v.kind == VarKind::ConvUs) m.u_s = p;
                        if constexpr (requires { m.u_dc; }) if (v.kind == VarKind::ConvUdc) m.u_dc = p;
                        (void)sizeof(T);
                    },
                    s.modes[v.target]);
        }
    }
    return s;
}

std::vector<double> DecisionSpace::encode(const ControlSettings& s) const {
    std::vector<double> x(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto& v = vars_[i];
        double p = 0.0;
        switch (v.kind) {
            case VarKind::GenP: p = s.ac.gen_p[v.target]; break;
            case VarKind::GenV: p = s.ac.gen_v[v.target]; break;
            case VarKind::Tap: p = s.ac.taps[v.target]; break;
            case VarKind::Shunt: p = s.ac.shunt_q[v.target]; break;
            default:
                std::visit(
                    [&](const auto& m) {
                        if constexpr (requires { m.p_s; }) if (v.kind == VarKind::ConvPs) p = m.p_s;
                        if constexpr (requires { m.q_s; }) if (v.kind == VarKind::ConvQs) p = m.q_s;
                        if constexpr (requires { m.u_s; }) if (v.kind == VarKind::ConvUs) p = m.u_s;
                        if constexpr (requires { m.u_dc; }) if (v.kind == VarKind::ConvUdc) p = m.u_dc;
                    },
                    s.modes[v.target]);
        }
        x[i] = v.integer ? (p - v.grid_min) / v.grid_step : p;
        x[i] = std::clamp(x[i], v.lo, v.hi);
    }
    return x;
}

OpfProblem::OpfProblem(const CaseData& c, bool include_dc, bool warm_start)
    : case_(&c), space_(c), include_dc_(include_dc), warm_(warm_start) {}

SystemState OpfProblem::solve(const std::vector<double>& x) const { return solve_acdc(*case_, space_.decode(x)); }

ObjectivePoint OpfProblem::evaluate(const std::vector<double>& x, std::size_t slot) {
    AcDcOptions opt;
    if (warm_ && slot < slots_.size() && slots_[slot].converged) opt.warm_start = &slots_[slot];
    SystemState st = solve_acdc(*case_, space_.decode(x), opt);
    if (opt.warm_start && !st.converged) st = solve_acdc(*case_, space_.decode(x));  // retry cold
    ObjectivePoint p = acdc::evaluate(st, *case_, include_dc_);
    if (warm_) {
        if (slot >= slots_.size()) slots_.resize(slot + 1);
        if (st.converged) slots_[slot] = std::move(st);
    }
    return p;
}

std::vector<double> OpfProblem::seed_point() const { return space_.encode(base_controls(*case_)); }

}  // namespace acdc
