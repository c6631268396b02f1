#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "acdc/acdc_sequential.hpp"
#include "acdc/case_model.hpp"

namespace testing {

using cplx = std::complex<double>;

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
    bool coin() { return pick(0, 1) == 1; }
};

inline acdc::CaseData shipped(const char* name) { return acdc::load_case(acdc::resolve_case_path(name)); }

// slack bus 1 at 1.0, load bus 2, one line
inline acdc::CaseData two_bus(double r, double x, double p_load, double q_load) {
    acdc::CaseData c;
    c.name = "two_bus";
    acdc::AcBus b1;
    b1.id = 1;
    b1.kind = acdc::BusKind::Slack;
    acdc::AcBus b2;
    b2.id = 2;
    b2.p_load = p_load;
    b2.q_load = q_load;
    b2.v_min = 0.5;
    b2.v_max = 1.5;
    c.buses = {b1, b2};
    acdc::AcBranch br;
    br.from = 1;
    br.to = 2;
    br.r = r;
    br.x = x;
    c.branches = {br};
    acdc::Generator g;
    g.bus = 1;
    g.v_set = 1.0;
    g.p_max = 10.0;
    g.q_min = -10.0;
    g.q_max = 10.0;
    c.generators = {g};
    return c;
}

// AC residual: generation + converter injections - load - losses; DC residual: injections - line losses.
inline double energy_residual(const acdc::SystemState& s, const acdc::CaseData& c) {
    double ac = 0.0;
    for (double p : s.ac.p_gen) ac += p;
    for (std::size_t i = 0; i < c.buses.size(); ++i) ac -= c.buses[i].p_load + c.buses[i].shunt_g * s.ac.v[i] * s.ac.v[i];
    for (std::size_t k = 0; k < c.branches.size(); ++k) ac -= s.ac.p_from[k] + s.ac.p_to[k];
    for (const auto& cv : s.converters) ac -= cv.p_s;
    double dc = 0.0;
    for (std::size_t b = 0; b < c.dc_buses.size(); ++b) dc += s.dc.u_dc[b] * s.dc.i_inj[b];
    for (std::size_t k = 0; k < c.dc_branches.size(); ++k) dc -= s.dc.i_branch[k] * s.dc.i_branch[k] * c.dc_branches[k].r;
    return std::abs(ac) + std::abs(dc);
}

}  // namespace testing
