#include <doctest.h>

#include "acdc/decision_space.hpp"
#include "support.hpp"

using namespace acdc;

namespace {

std::size_t slot(const DecisionSpace& s, const std::string& name) {
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.variables()[i].name == name) return i;
    FAIL("no slot " << name);
    return 0;
}

}  // namespace

TEST_CASE("case14_2t layout") {
    const auto c = testing::shipped("case14_2t");
    const DecisionSpace s(c);
    std::vector<std::string> names;
    for (const auto& v : s.variables()) names.push_back(v.name);
    const std::vector<std::string> want{"pg.2",      "pg.3",      "pg.6",     "pg.8",     "ug.2",     "ug.3",
                                        "ug.6",      "ug.8",      "conv0.u_dc", "conv0.q_s", "conv1.p_s", "conv1.q_s",
                                        "tap.4-7",   "tap.4-9",   "tap.5-6",  "qc.9"};
    CHECK(names == want);
}

TEST_CASE("integer slots round onto their grids") {
    const auto c = testing::shipped("case14_2t");
    const DecisionSpace s(c);
    auto x = s.lower();
    const auto tap = slot(s, "tap.4-7"), cap = slot(s, "qc.9");
    x[tap] = 5.6;
    x[cap] = 21.2;
    const auto p = s.physical(x);
    CHECK(p[tap] == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(p[cap] == doctest::Approx(0.21).epsilon(1e-12));
    const auto ctl = s.decode(x);
    CHECK(ctl.ac.taps[0] == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(ctl.ac.shunt_q[0] == doctest::Approx(0.21).epsilon(1e-12));
}

TEST_CASE("all slots at their minima decode to the minimum bounds") {
    const auto c = testing::shipped("case14_3t");
    const DecisionSpace s(c);
    const auto p = s.physical(s.lower());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& v = s.variables()[i];
        CHECK(p[i] == (v.integer ? v.grid_min : v.lo));
    }
}

TEST_CASE("encode inverts decode on grid points") {
    for (const char* name : {"case14_2t", "case14_3t_droop", "case118_3t"}) {
        const auto c = testing::shipped(name);
        const DecisionSpace s(c);
        testing::Rng rng(4);
        const auto lo = s.lower(), hi = s.upper();
        for (int t = 0; t < 20; ++t) {
            std::vector<double> x(lo.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] = rng.uni(lo[i], hi[i]);
                if (s.variables()[i].integer) x[i] = std::round(x[i]);
            }
            const auto back = s.encode(s.decode(x));
            for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("seed point is the case settings projected onto the box and grids") {
    const auto c = testing::shipped("case14_2t");
    OpfProblem p(c, true);
    const DecisionSpace& s = p.space();
    const auto seed = p.seed_point();
    REQUIRE(seed.size() == p.dim());
    const auto base = s.encode(base_controls(c));
    CHECK(seed == base);
    const auto phys = s.physical(seed);
    CHECK(phys[slot(s, "pg.2")] == c.generators[1].p);
    CHECK(phys[slot(s, "ug.8")] == 1.06);  // case value 1.09 sits above the band
    CHECK(phys[slot(s, "tap.4-7")] == doctest::Approx(0.975));  // 0.978 snaps to the nearest step
    CHECK(phys[slot(s, "conv1.p_s")] == -0.492);
}

TEST_CASE("warm starts do not move converged answers") {
    const auto c = testing::shipped("case14_3t");
    OpfProblem warm(c, true, true), cold(c, true, false);
    testing::Rng rng(12);
    const auto lo = warm.lower(), hi = warm.upper();
    std::vector<double> x(lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (lo[i] + hi[i]) / 2;
    for (int t = 0; t < 30; ++t) {
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = std::clamp(x[i] + rng.uni(-0.02, 0.02) * (hi[i] - lo[i]), lo[i], hi[i]);
        const auto a = warm.evaluate(x, 0);
        const auto b = cold.evaluate(x, 0);
        if (a.violation >= 10.0 || b.violation >= 10.0) continue;
        // both solves stop somewhere inside the 1e-6 solver tolerances
        CHECK(std::abs(a.f_cost - b.f_cost) <= 1e-6 * b.f_cost);
        CHECK(std::abs(a.v_dev - b.v_dev) <= 1e-6);
    }
}
