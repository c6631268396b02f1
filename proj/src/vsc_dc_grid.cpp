#include "acdc/vsc_dc_grid.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace acdc {

ConverterPowers converter_powers(double u_s, double delta_s, double u_c, double delta_c, double g, double b) {
    const double th = delta_s - delta_c;
    const double cs = std::cos(th), sn = std::sin(th);
    ConverterPowers out;
    out.p_s = u_s * u_s * g - u_s * u_c * (g * cs + b * sn);
    out.q_s = -u_s * u_s * b - u_s * u_c * (g * sn - b * cs);
    out.p_c = -u_c * u_c * g + u_s * u_c * (g * cs - b * sn);
    out.q_c = u_c * u_c * b - u_s * u_c * (g * sn + b * cs);
    return out;
}

double converter_current(double p_c, double q_c, double u_c) {
    if (!(u_c > 0.0)) throw DomainError("converter voltage must be positive");
    return std::hypot(p_c, q_c) / (std::sqrt(3.0) * u_c);
}

double converter_loss(double p_c, double q_c, double u_c, double a, double b, double c) {
    const double i = converter_current(p_c, q_c, u_c);
    return a + b * i + c * i * i;
}

CapabilityCheck check_pq_capability(double p_s, double q_s, const PqCircle& circle) {
    const double d = std::hypot(p_s - circle.p0, q_s - circle.q0);
    if (d * d < circle.r_min * circle.r_min) return {Capability::BelowMin, circle.r_min - d};
    if (d * d > circle.r_max * circle.r_max) return {Capability::AboveMax, d - circle.r_max};
    return {};
}

ConverterSetpoints resolve_control_mode(const ControlMode& m, const ControlAmbient& ambient) {
    ConverterSetpoints sp;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, mode::ConstUdcConstQs>) {
                sp.u_dc = v.u_dc;
                sp.q_s = v.q_s;
            } else if constexpr (std::is_same_v<T, mode::ConstUdcConstUs>) {
                sp.u_dc = v.u_dc;
                sp.u_s = v.u_s;
            } else if constexpr (std::is_same_v<T, mode::ConstPsConstQs>) {
                sp.p_s = v.p_s;
                sp.q_s = v.q_s;
            } else if constexpr (std::is_same_v<T, mode::ConstPsConstUs>) {
                sp.p_s = v.p_s;
                sp.u_s = v.u_s;
            } else {
                sp.droop = DroopLaw{v.slope, v.u_dc, v.p_s};
                sp.p_s = sp.droop->p_s_at(ambient.u_dc);
                sp.q_s = v.q_s;
            }
        },
        m);
    return sp;
}

ConverterState converter_state_from_ac(const Converter& conv, double u_s, double delta_s, double p_s, double q_s) {
    const std::complex<double> vs = std::polar(u_s, delta_s);
    const std::complex<double> z(conv.r_xfmr, conv.x_xfmr);
    const std::complex<double> current = std::conj(std::complex<double>(p_s, q_s) / vs);
    const std::complex<double> vc = vs - z * current;
    const std::complex<double> y = 1.0 / z;

    ConverterState st;
    st.u_s = u_s;
    st.delta_s = delta_s;
    st.u_c = std::abs(vc);
    st.delta_c = std::arg(vc);
    const auto pw = converter_powers(st.u_s, st.delta_s, st.u_c, st.delta_c, y.real(), y.imag());
    st.p_s = pw.p_s;
    st.q_s = pw.q_s;
    st.p_c = pw.p_c;
    st.q_c = pw.q_c;
    st.i_c = converter_current(st.p_c, st.q_c, st.u_c);
    st.p_loss = conv.loss_a + conv.loss_b * st.i_c + conv.loss_c * st.i_c * st.i_c;
    st.p_dc = st.p_c - st.p_loss;
    return st;
}

namespace {

enum class Role { FixedVoltage, Droop, FixedPower };

struct Terminal {
    std::size_t conv = 0;
    Role role = Role::FixedPower;
};

}  // namespace

DcSolution solve_dc_grid(const CaseData& c, const std::vector<ConverterOperatingInput>& inputs, const DcOptions& opt) {
    DcSolution sol;
    const std::size_t nd = c.dc_buses.size();
    if (nd == 0) {
        sol.dc.converged = true;
        sol.status = DcStatus::Converged;
        return sol;
    }
    const auto n = static_cast<Eigen::Index>(nd);

    Eigen::MatrixXd gmat = Eigen::MatrixXd::Zero(n, n);
    for (const auto& br : c.dc_branches) {
        const auto i = static_cast<Eigen::Index>(c.dc_bus_index(br.from));
        const auto j = static_cast<Eigen::Index>(c.dc_bus_index(br.to));
        const double y = 1.0 / br.r;
        gmat(i, i) += y;
        gmat(j, j) += y;
        gmat(i, j) -= y;
        gmat(j, i) -= y;
    }

    std::vector<Terminal> term(nd);
    for (std::size_t k = 0; k < c.converters.size(); ++k) {
        const auto b = c.dc_bus_index(c.converters[k].dc_bus);
        const auto& sp = inputs[k].setpoints;
        Role role = Role::FixedPower;
        if (sp.droop) role = Role::Droop;
        else if (sp.u_dc && !sp.p_s) role = Role::FixedVoltage;
        term[b] = {k, role};
    }

    auto p_dc_of = [&](std::size_t k, double p_s) {
        const auto& in = inputs[k];
        return converter_state_from_ac(c.converters[k], in.u_s, in.delta_s, p_s, in.q_s).p_dc;
    };
    auto droop_p_dc = [&](std::size_t k, double u) { return p_dc_of(k, inputs[k].setpoints.droop->p_s_at(u)); };

    Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
    if (opt.warm_start && opt.warm_start->u_dc.size() == nd)
        for (std::size_t b = 0; b < nd; ++b) u[static_cast<Eigen::Index>(b)] = opt.warm_start->u_dc[b];
    std::vector<Eigen::Index> unknown;
    for (std::size_t b = 0; b < nd; ++b) {
        const auto bb = static_cast<Eigen::Index>(b);
        const auto& sp = inputs[term[b].conv].setpoints;
        if (term[b].role == Role::FixedVoltage) u[bb] = *sp.u_dc;
        else {
            if (!opt.warm_start && term[b].role == Role::Droop) u[bb] = sp.droop->u_dc_set;
            unknown.push_back(bb);
        }
    }

    // Fixed DC injections of P-controlled converters.
    std::vector<double> fixed_p(nd, 0.0);
    try {
        for (std::size_t b = 0; b < nd; ++b)
            if (term[b].role == Role::FixedPower)
                fixed_p[b] = p_dc_of(term[b].conv, *inputs[term[b].conv].setpoints.p_s);
    } catch (const DomainError&) {
        sol.status = DcStatus::NonConvergence;
        return sol;
    }

    const auto m = static_cast<Eigen::Index>(unknown.size());
    bool converged = false;
    int it = 0;
    double worst = 0.0;
    try {
        while (true) {
            const Eigen::VectorXd cur = gmat * u;
            Eigen::VectorXd f(m);
            for (Eigen::Index r = 0; r < m; ++r) {
                const auto b = unknown[static_cast<std::size_t>(r)];
                const auto& t = term[static_cast<std::size_t>(b)];
                const double p = t.role == Role::Droop ? droop_p_dc(t.conv, u[b]) : fixed_p[static_cast<std::size_t>(b)];
                f[r] = u[b] * cur[b] - p;
            }
            worst = m ? f.cwiseAbs().maxCoeff() : 0.0;
            if (!std::isfinite(worst)) break;
            if (worst <= opt.tol) {
                converged = true;
                break;
            }
            if (it >= opt.max_iter) break;
            Eigen::MatrixXd jac(m, m);
            for (Eigen::Index r = 0; r < m; ++r) {
                const auto b = unknown[static_cast<std::size_t>(r)];
                for (Eigen::Index s = 0; s < m; ++s) jac(r, s) = u[b] * gmat(b, unknown[static_cast<std::size_t>(s)]);
                jac(r, r) += cur[b];
                const auto& t = term[static_cast<std::size_t>(b)];
                if (t.role == Role::Droop) {
                    const double h = 1e-7;
                    jac(r, r) -= (droop_p_dc(t.conv, u[b] + h) - droop_p_dc(t.conv, u[b] - h)) / (2.0 * h);
                }
            }
            const Eigen::VectorXd du = jac.partialPivLu().solve(-f);
            for (Eigen::Index r = 0; r < m; ++r) u[unknown[static_cast<std::size_t>(r)]] += du[r];
            ++it;
            if ((u.array() <= 0.0).any()) break;
        }
    } catch (const DomainError&) {
        converged = false;
    }

    sol.dc.u_dc.assign(u.data(), u.data() + n);
    const Eigen::VectorXd cur = gmat * u;
    sol.dc.i_inj.assign(cur.data(), cur.data() + n);
    for (const auto& br : c.dc_branches) {
        const auto i = c.dc_bus_index(br.from), j = c.dc_bus_index(br.to);
        sol.dc.i_branch.push_back((sol.dc.u_dc[i] - sol.dc.u_dc[j]) / br.r);
    }
    sol.dc.iterations = it;
    sol.dc.max_residual = worst;
    if (!converged) {
        sol.status = DcStatus::NonConvergence;
        return sol;
    }

    // Recover converter operating points; DC-slack converters back out p_s from their DC power.
    sol.converters.resize(c.converters.size());
    try {
        for (std::size_t b = 0; b < nd; ++b) {
            const auto k = term[b].conv;
            const auto& in = inputs[k];
            double p_s = 0.0;
            switch (term[b].role) {
                case Role::FixedPower: p_s = *in.setpoints.p_s; break;
                case Role::Droop: p_s = in.setpoints.droop->p_s_at(u[static_cast<Eigen::Index>(b)]); break;
                case Role::FixedVoltage: {
                    const double target = u[static_cast<Eigen::Index>(b)] * cur[static_cast<Eigen::Index>(b)];
                    p_s = in.p_s_guess;
                    bool ok = false;
                    for (int k2 = 0; k2 < 50; ++k2) {
                        const double r = p_dc_of(k, p_s) - target;
                        if (std::abs(r) <= 1e-13) {
                            ok = true;
                            break;
                        }
                        const double h = 1e-7;
                        const double d = (p_dc_of(k, p_s + h) - p_dc_of(k, p_s - h)) / (2.0 * h);
                        if (!(std::abs(d) > 1e-12)) break;
                        p_s -= r / d;
                        if (!std::isfinite(p_s)) break;
                    }
                    if (!ok) {
                        sol.status = DcStatus::NonConvergence;
                        return sol;
                    }
                    break;
                }
            }
            sol.converters[k] = converter_state_from_ac(c.converters[k], in.u_s, in.delta_s, p_s, in.q_s);
        }
    } catch (const DomainError&) {
        sol.status = DcStatus::NonConvergence;
        return sol;
    }
    sol.dc.converged = true;
    sol.status = DcStatus::Converged;
    for (std::size_t b = 0; b < nd; ++b) {
        if (sol.dc.u_dc[b] < c.dc_buses[b].u_min || sol.dc.u_dc[b] > c.dc_buses[b].u_max) {
            sol.status = DcStatus::InfeasibleSetpoint;
            sol.infeasible_converters.push_back(static_cast<int>(term[b].conv));
        }
    }
    return sol;
}

}  // namespace acdc
