#include "acdc/objectives.hpp"

#include <cmath>
#include <string>

namespace acdc {

double generation_cost(const std::vector<double>& p_gen, const CaseData& c) {
    double f = 0.0;
    for (std::size_t g = 0; g < c.generators.size() && g < p_gen.size(); ++g) {
        const auto& gen = c.generators[g];
        const double p = p_gen[g];
        f += gen.cost_a * p * p + gen.cost_b * p + gen.cost_c;
    }
    return f;
}

double generation_cost(const SystemState& s, const CaseData& c) { return generation_cost(s.ac.p_gen, c); }

double voltage_deviation(const SystemState& s, const CaseData& c, bool include_dc) {
    double v = 0.0;
    for (std::size_t i = 0; i < c.buses.size() && i < s.ac.v.size(); ++i) {
        const double d = s.ac.v[i] - c.buses[i].v_ref;
        v += d * d;
    }
    if (include_dc) {
        for (std::size_t j = 0; j < c.dc_buses.size() && j < s.dc.u_dc.size(); ++j) {
            const double d = s.dc.u_dc[j] - c.dc_buses[j].u_ref;
            v += d * d;
        }
    }
    return v;
}

namespace {

// Slack on each limit so that quantities sitting on a bound after a solve are not flagged.
constexpr double kLimitTol = 1e-6;

struct Collector {
    ViolationReport& r;

    void range(const char* what, const std::string& who, double x, double lo, double hi) {
        double excess = 0.0;
        if (x > hi) excess = x - hi;
        else if (x < lo) excess = lo - x;
        else if (!std::isnan(x)) return;
        const double span = hi - lo > 0.0 ? hi - lo : 1.0;
        add(what, who, std::isnan(x) ? 1.0 : excess, span);
    }

    void add(const char* what, const std::string& who, double excess, double scale) {
        if (!(excess > kLimitTol)) return;
        const double norm = excess / scale;
        r.breaches.push_back({what, who, excess, norm});
        r.total += norm;
    }
};

}  // namespace

ViolationReport constraint_violation(const SystemState& s, const CaseData& c) {
    ViolationReport r;
    Collector col{r};

    for (std::size_t i = 0; i < c.buses.size() && i < s.ac.v.size(); ++i) {
        const auto& b = c.buses[i];
        col.range("bus voltage", "bus " + std::to_string(b.id), s.ac.v[i], b.v_min, b.v_max);
    }
    for (std::size_t g = 0; g < c.generators.size() && g < s.ac.p_gen.size(); ++g) {
        const auto& gen = c.generators[g];
        const std::string who = "generator at bus " + std::to_string(gen.bus);
        col.range("generator p", who, s.ac.p_gen[g], gen.p_min, gen.p_max);
        if (g < s.ac.q_gen.size()) col.range("generator q", who, s.ac.q_gen[g], gen.q_min, gen.q_max);
    }
    for (std::size_t k = 0; k < c.branches.size() && k < s.ac.p_from.size(); ++k) {
        const auto& br = c.branches[k];
        const double sf = std::hypot(s.ac.p_from[k], s.ac.q_from[k]);
        const double stt = std::hypot(s.ac.p_to[k], s.ac.q_to[k]);
        col.add("branch flow", "branch " + std::to_string(br.from) + "-" + std::to_string(br.to),
                std::max(sf, stt) - br.s_max, br.s_max);
    }
    for (std::size_t k = 0; k < c.converters.size() && k < s.converters.size(); ++k) {
        const auto& cv = c.converters[k];
        const auto& cs = s.converters[k];
        const std::string who = "converter " + std::to_string(k) + " at bus " + std::to_string(cv.ac_bus);
        col.range("converter p_s", who, cs.p_s, cv.p_s_min, cv.p_s_max);
        col.range("converter q_s", who, cs.q_s, cv.q_s_min, cv.q_s_max);
        const auto cap = check_pq_capability(cs.p_s, cs.q_s, cv.pq_circle);
        const double ring = cv.pq_circle.r_max - cv.pq_circle.r_min;
        if (cap.status != Capability::Inside) col.add("converter capability", who, cap.amount, ring > 0.0 ? ring : 1.0);
    }
    for (std::size_t j = 0; j < c.dc_buses.size() && j < s.dc.u_dc.size(); ++j) {
        const auto& b = c.dc_buses[j];
        const std::string who = "dc bus " + std::to_string(b.id);
        col.range("dc voltage", who, s.dc.u_dc[j], b.u_min, b.u_max);
        if (b.i_max && j < s.dc.i_inj.size()) col.range("dc bus current", who, s.dc.i_inj[j], -*b.i_max, *b.i_max);
    }
    for (std::size_t k = 0; k < c.dc_branches.size() && k < s.dc.i_branch.size(); ++k) {
        const auto& br = c.dc_branches[k];
        col.range("dc branch current", "dc branch " + std::to_string(br.from) + "-" + std::to_string(br.to),
                  s.dc.i_branch[k], -br.i_max, br.i_max);
    }
    if (!s.converged) {
        r.surcharge = true;
        r.total += kNonConvergenceSurcharge;
    }
    return r;
}

ObjectivePoint evaluate(const SystemState& s, const CaseData& c, bool include_dc) {
    ObjectivePoint p;
    p.f_cost = generation_cost(s, c);
    p.v_dev = voltage_deviation(s, c, include_dc);
    if (!std::isfinite(p.f_cost)) p.f_cost = 1e12;
    if (!std::isfinite(p.v_dev)) p.v_dev = 1e6;
    p.violation = constraint_violation(s, c).total;
    p.feasible = p.violation <= kFeasibilityTol;
    return p;
}

}  // namespace acdc
