#include "acdc/acdc_sequential.hpp"

#include <algorithm>
#include <cmath>

namespace acdc {

ControlSettings base_controls(const CaseData& c) {
    ControlSettings s;
    s.ac = default_ac_settings(c);
    for (const auto& v : c.converters) s.modes.push_back(v.mode);
    return s;
}

SystemState solve_acdc(const CaseData& c, const ControlSettings& controls, const AcDcOptions& opt) {
    SystemState st;
    const std::size_t nk = c.converters.size();
    const std::size_t n = c.buses.size();

    std::vector<ConverterSetpoints> sp(nk);
    for (std::size_t k = 0; k < nk; ++k) {
        ControlAmbient amb;
        if (const auto* d = std::get_if<mode::Droop>(&controls.modes[k])) amb.u_dc = d->u_dc;
        sp[k] = resolve_control_mode(controls.modes[k], amb);
    }

    // Current AC-side draws of every converter.
    std::vector<double> p_s(nk), q_s(nk);
    const bool warm = opt.warm_start && opt.warm_start->converters.size() == nk;
    for (std::size_t k = 0; k < nk; ++k) {
        p_s[k] = warm ? opt.warm_start->converters[k].p_s : (sp[k].p_s && !sp[k].droop ? *sp[k].p_s : c.converters[k].p_s);
        q_s[k] = warm ? opt.warm_start->converters[k].q_s : c.converters[k].q_s;
        if (sp[k].q_s) q_s[k] = *sp[k].q_s;
    }

    AcOptions ac_opt = opt.ac;
    DcOptions dc_opt = opt.dc;
    if (opt.warm_start) {
        ac_opt.warm_start = &opt.warm_start->ac;
        dc_opt.warm_start = &opt.warm_start->dc;
    }

    if (nk == 0) {
        st.ac = solve_ac_pf(c, AcInjectionOverlay(n), controls.ac, ac_opt);
        st.outer_iterations = 1;
        st.converged = st.ac.converged;
        return st;
    }

    for (int outer = 1; outer <= opt.outer_max; ++outer) {
        st.outer_iterations = outer;
        AcInjectionOverlay ov(n);
        for (std::size_t k = 0; k < nk; ++k) {
            const auto i = c.bus_index(c.converters[k].ac_bus);
            ov.p[i] -= p_s[k];
            if (sp[k].u_s) ov.v_pin[i] = *sp[k].u_s;
            else ov.q[i] -= q_s[k];
        }
        AcState ac = solve_ac_pf(c, ov, controls.ac, ac_opt);
        const bool ac_ok = ac.converged;
        st.ac = std::move(ac);
        if (!ac_ok) {
            st.converged = false;
            return st;
        }
        ac_opt.warm_start = &st.ac;

        std::vector<ConverterOperatingInput> in(nk);
        for (std::size_t k = 0; k < nk; ++k) {
            const auto i = c.bus_index(c.converters[k].ac_bus);
            in[k].setpoints = sp[k];
            in[k].u_s = st.ac.v[i];
            in[k].delta_s = st.ac.theta[i];
            in[k].p_s_guess = p_s[k];
            if (sp[k].u_s) {
                // Reactive draw that holds the pinned voltage: whatever the bus balance leaves over.
                double qg = 0.0;
                for (std::size_t g = 0; g < c.generators.size(); ++g)
                    if (c.generators[g].bus == c.converters[k].ac_bus) qg += st.ac.q_gen[g];
                double q_other = 0.0;
                for (std::size_t j = 0; j < nk; ++j)
                    if (j != k && c.converters[j].ac_bus == c.converters[k].ac_bus && !sp[j].u_s) q_other += q_s[j];
                in[k].q_s = qg - c.buses[i].q_load - q_other - st.ac.q_inj[i];
            } else {
                in[k].q_s = q_s[k];
            }
        }
        DcSolution dc = solve_dc_grid(c, in, dc_opt);
        st.dc_status = dc.status;
        if (dc.status == DcStatus::NonConvergence) {
            st.dc = std::move(dc.dc);
            st.converged = false;
            return st;
        }
        st.dc = std::move(dc.dc);
        st.converters = std::move(dc.converters);
        dc_opt.warm_start = &st.dc;

        double delta = 0.0;
        for (std::size_t k = 0; k < nk; ++k) {
            delta = std::max({delta, std::abs(st.converters[k].p_s - p_s[k]), std::abs(st.converters[k].q_s - q_s[k])});
            p_s[k] = st.converters[k].p_s;
            q_s[k] = st.converters[k].q_s;
        }
        st.coupling_mismatch = delta;
        if (!std::isfinite(delta)) break;
        if (delta <= opt.tol_couple) {
            st.converged = true;
            return st;
        }
    }
    st.converged = false;
    return st;
}

}  // namespace acdc
