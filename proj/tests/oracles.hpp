#pragma once

// Independent reference implementations shared by the unit and acceptance suites.

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "acdc/vsc_dc_grid.hpp"
#include "support.hpp"

namespace testing {

using namespace acdc;

// S_s = U_s conj((U_s - U_c) Y), S_c = U_c conj((U_s - U_c) Y), flowing away from the AC bus.
struct Oracle {
    cplx s_s, s_c;
};

inline Oracle complex_oracle(double us, double ds, double uc, double dc, double g, double b) {
    const cplx vs = std::polar(us, ds), vc = std::polar(uc, dc);
    const cplx i = (vs - vc) * cplx(g, b);
    return {vs * std::conj(i), vc * std::conj(i)};
}


struct Grid {
    CaseData c;
    std::vector<ConverterOperatingInput> in;
};

// DC power delivered by a converter for a given AC-side draw, straight from phasors.
inline double p_dc_oracle(const Converter& v, const ConverterOperatingInput& in, double p_s) {
    const cplx vs = std::polar(in.u_s, in.delta_s);
    const cplx i = std::conj(cplx(p_s, in.q_s) / vs);
    const cplx vc = vs - cplx(v.r_xfmr, v.x_xfmr) * i;
    const cplx sc = vc * std::conj(i);
    const double ic = std::abs(sc) / (std::sqrt(3.0) * std::abs(vc));
    return sc.real() - (v.loss_a + v.loss_b * ic + v.loss_c * ic * ic);
}

inline Grid random_grid(testing::Rng& rng, int n, bool droop) {
    Grid g;
    for (int b = 1; b <= n; ++b) {
        DcBus d;
        d.id = b;
        d.u_min = 0.5;
        d.u_max = 1.5;
        g.c.dc_buses.push_back(d);
    }
    for (int b = 2; b <= n; ++b) g.c.dc_branches.push_back({rng.pick(1, b - 1), b, rng.uni(0.005, 0.1), 5.0});
    if (n == 3 && rng.coin()) g.c.dc_branches.push_back({1, 3, rng.uni(0.005, 0.1), 5.0});
    const int slack = rng.pick(0, n - 1);
    for (int k = 0; k < n; ++k) {
        Converter v;
        v.ac_bus = k + 1;
        v.dc_bus = k + 1;
        v.r_xfmr = rng.uni(0.0, 0.005);
        v.x_xfmr = rng.uni(0.05, 0.2);
        ControlMode m;
        if (droop) m = mode::Droop{rng.uni(0.005, 0.05), rng.uni(0.98, 1.02), rng.uni(-0.5, 0.5), rng.uni(-0.2, 0.2)};
        else if (k == slack) m = mode::ConstUdcConstQs{rng.uni(0.97, 1.03), rng.uni(-0.2, 0.2)};
        else m = mode::ConstPsConstQs{rng.uni(-0.5, 0.5), rng.uni(-0.2, 0.2)};
        v.mode = m;
        g.c.converters.push_back(v);

        ConverterOperatingInput in;
        in.setpoints = resolve_control_mode(m);
        in.q_s = in.setpoints.q_s.value_or(0.0);
        in.u_s = rng.uni(0.95, 1.05);
        in.delta_s = rng.uni(-0.2, 0.2);
        g.in.push_back(in);
    }
    return g;
}

inline Eigen::MatrixXd conductance(const CaseData& c) {
    const auto n = static_cast<Eigen::Index>(c.dc_buses.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (const auto& br : c.dc_branches) {
        const int i = br.from - 1, j = br.to - 1;
        g(i, i) += 1 / br.r;
        g(j, j) += 1 / br.r;
        g(i, j) -= 1 / br.r;
        g(j, i) -= 1 / br.r;
    }
    return g;
}

// Newton on every non-fixed bus with a forward-difference Jacobian.
inline std::optional<Eigen::VectorXd> newton_oracle(const Grid& g) {
    const auto gm = conductance(g.c);
    const auto n = gm.rows();
    Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
    std::vector<int> free;
    for (int b = 0; b < n; ++b) {
        const auto& sp = g.in[b].setpoints;
        if (sp.u_dc && !sp.droop) u[b] = *sp.u_dc;
        else free.push_back(b);
    }
    auto injection = [&](int b, double ub) {
        const auto& sp = g.in[b].setpoints;
        const double ps = sp.droop ? sp.droop->p_s_set - (ub - sp.droop->u_dc_set) / sp.droop->slope : *sp.p_s;
        return p_dc_oracle(g.c.converters[b], g.in[b], ps);
    };
    auto resid = [&](const Eigen::VectorXd& uu) {
        Eigen::VectorXd r(free.size());
        const Eigen::VectorXd cur = gm * uu;
        for (std::size_t k = 0; k < free.size(); ++k) r[k] = uu[free[k]] * cur[free[k]] - injection(free[k], uu[free[k]]);
        return r;
    };
    for (int it = 0; it < 100; ++it) {
        const Eigen::VectorXd r = resid(u);
        if (r.cwiseAbs().maxCoeff() < 1e-13) return u;
        Eigen::MatrixXd jac(free.size(), free.size());
        for (std::size_t k = 0; k < free.size(); ++k) {
            Eigen::VectorXd up = u;
            const double h = 1e-8;
            up[free[k]] += h;
            jac.col(k) = (resid(up) - r) / h;
        }
        const Eigen::VectorXd du = jac.fullPivLu().solve(-r);
        for (std::size_t k = 0; k < free.size(); ++k) u[free[k]] += du[k];
        if (!u.allFinite() || (u.array() <= 0).any()) return std::nullopt;
    }
    return resid(u).cwiseAbs().maxCoeff() < 1e-11 ? std::optional(u) : std::nullopt;
}

// Slack bus 1 at u1, bus 2 injects a fixed DC power through one branch.
inline double bisection_u2(double u1, double r, double p2) {
    double lo = u1 / 2, hi = 3.0;
    auto f = [&](double u) { return u * (u - u1) / r - p2; };
    for (int k = 0; k < 200; ++k) {
        const double mid = (lo + hi) / 2;
        (f(mid) > 0 ? hi : lo) = mid;
    }
    return (lo + hi) / 2;
}

struct Typing {
    std::vector<int> pv, pq;
};

inline Typing typing_of(const CaseData& c) {
    Typing t;
    for (std::size_t i = 0; i < c.buses.size(); ++i) {
        if (c.buses[i].kind == BusKind::PV) t.pv.push_back(static_cast<int>(i));
        if (c.buses[i].kind == BusKind::PQ) t.pq.push_back(static_cast<int>(i));
    }
    return t;
}

// Gauss-Seidel on the two_bus network with r = 0: slack at 1.0, load s2 at bus 2.
inline cplx gauss_seidel_two_bus(double x, cplx s_load) {
    const cplx y12 = -1.0 / cplx(0, x), y22 = -y12, v1(1.0, 0.0);
    cplx v2(1.0, 0.0);
    for (int k = 0; k < 10000; ++k) {
        const cplx next = (std::conj(-s_load) / std::conj(v2) - y12 * v1) / y22;
        if (std::abs(next - v2) < 1e-15) break;
        v2 = next;
    }
    return v2;
}

}  // namespace testing
