#include <doctest.h>

#include <cmath>

#include "acdc/acdc_sequential.hpp"
#include "acdc/decision_space.hpp"
#include "acdc/objectives.hpp"
#include "support.hpp"

using namespace acdc;

using testing::energy_residual;

TEST_CASE("idle lossless converters reduce to the pure AC solution") {
    auto c = testing::shipped("case14_2t");
    for (auto& v : c.converters) {
        v.mode = mode::ConstPsConstQs{0.0, 0.0};
        v.loss_a = v.loss_b = v.loss_c = 0.0;
        v.p_s = v.q_s = 0.0;
    }
    const auto st = solve_acdc(c, base_controls(c));
    REQUIRE(st.converged);

    auto ac_only = c;
    ac_only.converters.clear();
    ac_only.dc_buses.clear();
    ac_only.dc_branches.clear();
    const auto ref = solve_ac_pf(ac_only, AcInjectionOverlay(c.buses.size()), default_ac_settings(ac_only));
    REQUIRE(ref.converged);
    for (std::size_t i = 0; i < c.buses.size(); ++i) {
        CHECK(std::abs(st.ac.v[i] - ref.v[i]) <= 1e-6);
        CHECK(std::abs(st.ac.theta[i] - ref.theta[i]) <= 1e-6);
    }
}

TEST_CASE("case with no converters is a single AC solve") {
    const auto c = testing::shipped("case14_ac");
    const auto st = solve_acdc(c, base_controls(c));
    const auto ref = solve_ac_pf(c, AcInjectionOverlay(c.buses.size()), default_ac_settings(c));
    CHECK(st.converged);
    CHECK(st.ac.v == ref.v);
}

TEST_CASE("baseline of case14_2t") {
    const auto c = testing::shipped("case14_2t");
    const auto st = solve_acdc(c, base_controls(c));
    REQUIRE(st.converged);
    CHECK(st.coupling_mismatch <= 1e-6);
    CHECK(energy_residual(st, c) <= 1e-5);
    const auto o = evaluate(st, c, true);
    // regression value under the shipped cost data
    CHECK(o.f_cost == doctest::Approx(8289.727).epsilon(1e-6));
    for (double u : st.dc.u_dc) CHECK((u > 0.94 && u < 1.06));
}

TEST_CASE("re-solving from a converged state takes one outer iteration") {
    for (const char* name : {"case14_2t", "case14_3t", "case14_3t_droop", "case118_3t"}) {
        CAPTURE(name);
        const auto c = testing::shipped(name);
        const auto ctl = base_controls(c);
        const auto first = solve_acdc(c, ctl);
        REQUIRE(first.converged);
        AcDcOptions opt;
        opt.warm_start = &first;
        const auto again = solve_acdc(c, ctl, opt);
        CHECK(again.converged);
        CHECK(again.outer_iterations == 1);
        for (std::size_t i = 0; i < c.buses.size(); ++i) CHECK(std::abs(again.ac.v[i] - first.ac.v[i]) <= 1e-8);
        for (std::size_t k = 0; k < c.converters.size(); ++k)
            CHECK(std::abs(again.converters[k].p_s - first.converters[k].p_s) <= 1e-8);
    }
}

TEST_CASE("an impossible converter set-point is reported, not thrown") {
    const auto c = testing::shipped("case14_2t");
    auto ctl = base_controls(c);
    for (auto& m : ctl.modes)
        if (auto* p = std::get_if<mode::ConstPsConstQs>(&m)) p->p_s = 5.0;
    SystemState st;
    CHECK_NOTHROW(st = solve_acdc(c, ctl));
    const auto rep = constraint_violation(st, c);
    CHECK((!st.converged || rep.total > 0.0));
}

TEST_CASE("droop converters sit on their characteristic") {
    const auto c = testing::shipped("case14_3t_droop");
    const auto st = solve_acdc(c, base_controls(c));
    REQUIRE(st.converged);
    CHECK(energy_residual(st, c) <= 1e-5);
    for (std::size_t k = 0; k < c.converters.size(); ++k) {
        const auto& d = std::get<mode::Droop>(c.converters[k].mode);
        const double u = st.dc.u_dc[c.dc_bus_index(c.converters[k].dc_bus)];
        CHECK(std::abs(st.converters[k].p_s - (d.p_s - (u - d.u_dc) / d.slope)) <= 1e-8);
    }
}

TEST_CASE("terminal-voltage modes hold the AC bus voltage") {
    auto c = testing::shipped("case14_2t");
    for (auto& v : c.converters) {
        if (auto* m = std::get_if<mode::ConstPsConstQs>(&v.mode)) v.mode = mode::ConstPsConstUs{m->p_s, 1.02};
    }
    const auto st = solve_acdc(c, base_controls(c));
    REQUIRE(st.converged);
    for (const auto& v : c.converters)
        if (holds_ac_voltage(v.mode)) CHECK(st.ac.v[c.bus_index(v.ac_bus)] == doctest::Approx(1.02).epsilon(1e-9));
    CHECK(energy_residual(st, c) <= 1e-5);
}
