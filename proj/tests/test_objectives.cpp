#include <doctest.h>

#include <cstring>

#include "acdc/decision_space.hpp"
#include "acdc/objectives.hpp"
#include "support.hpp"

using namespace acdc;

namespace {

SystemState solved_two_bus(CaseData& c) {
    c = testing::two_bus(0.01, 0.1, 0.3, 0.05);
    for (auto& b : c.buses) b.v_min = 0.94, b.v_max = 1.06;
    c.generators[0].p_max = 2.0;
    auto st = solve_acdc(c, base_controls(c));
    REQUIRE(st.converged);
    return st;
}

}  // namespace

TEST_CASE("generation cost") {
    CaseData c;
    Generator g;
    g.cost_b = 1.0;
    c.generators = {g};
    CHECK(generation_cost(std::vector<double>{2.0}, c) == 2.0);

    Generator h;
    h.cost_a = 5;
    h.cost_b = 3;
    h.cost_c = 7;
    c.generators = {h, h, h};
    CHECK(generation_cost(std::vector<double>{0, 0, 0}, c) == 21.0);
}

TEST_CASE("case14 dispatch lands in the 8.1-8.2 k$/h band") {
    const auto c = testing::shipped("case14_ac");
    const double f = generation_cost(std::vector<double>{1.952, 0.369, 0.299, 0.001, 0.085}, c);
    CHECK(f > 8100);
    CHECK(f < 8200);
}

TEST_CASE("voltage deviation by hand") {
    CaseData c;
    c.buses.resize(2);
    c.dc_buses.resize(1);
    SystemState s;
    s.ac.v = {1.01, 0.99};
    s.dc.u_dc = {1.02};
    CHECK(voltage_deviation(s, c, true) == doctest::Approx(0.0006).epsilon(1e-12));
    CHECK(voltage_deviation(s, c, false) == doctest::Approx(0.0002).epsilon(1e-12));
    s.ac.v = {1.0, 1.0};
    s.dc.u_dc = {1.0};
    CHECK(voltage_deviation(s, c, true) == 0.0);
}

TEST_CASE("feasible state has no violation") {
    CaseData c;
    const auto st = solved_two_bus(c);
    const auto rep = constraint_violation(st, c);
    CHECK(rep.total == 0.0);
    CHECK(rep.breaches.empty());
    CHECK(evaluate(st, c, true).feasible);
}

TEST_CASE("over-voltage is normalized by the band width") {
    CaseData c;
    auto st = solved_two_bus(c);
    st.ac.v[1] = 1.08;
    const auto rep = constraint_violation(st, c);
    REQUIRE(rep.breaches.size() == 1);
    CHECK(rep.breaches[0].constraint == "bus voltage");
    CHECK(rep.breaches[0].excess == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(rep.total == doctest::Approx(0.02 / 0.12).epsilon(1e-12));
    CHECK_FALSE(evaluate(st, c, true).feasible);
}

TEST_CASE("non-convergence costs exactly the surcharge") {
    CaseData c;
    auto st = solved_two_bus(c);
    st.converged = false;
    const auto rep = constraint_violation(st, c);
    CHECK(rep.total == 10.0);
    CHECK(rep.surcharge);
}

TEST_CASE("objective properties over random control vectors") {
    const auto c = testing::shipped("case14_3t");
    const DecisionSpace space(c);
    const auto lo = space.lower(), hi = space.upper();
    testing::Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(lo.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uni(lo[i], hi[i]);
        const auto st = solve_acdc(c, space.decode(x));
        const auto a = evaluate(st, c, true);
        const auto b = evaluate(st, c, true);
        CHECK(std::memcmp(&a.f_cost, &b.f_cost, sizeof(double)) == 0);
        CHECK(std::memcmp(&a.v_dev, &b.v_dev, sizeof(double)) == 0);
        CHECK(a.violation == b.violation);
        CHECK(voltage_deviation(st, c, true) >= voltage_deviation(st, c, false));
        const auto rep = constraint_violation(st, c);
        CHECK(a.feasible == rep.breaches.empty());
        CHECK(a.feasible == (rep.total == 0.0));
        CHECK(a.violation >= 0.0);
    }
}
