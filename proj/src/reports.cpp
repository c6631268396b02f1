#include "acdc/reports.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace acdc {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << std::setprecision(12);
    return out;
}

const char* dc_status_name(DcStatus s) {
    switch (s) {
        case DcStatus::Converged: return "converged";
        case DcStatus::NonConvergence: return "non_convergence";
        case DcStatus::InfeasibleSetpoint: return "infeasible_setpoint";
    }
    return "?";
}

}  // namespace

Json state_to_json(const SystemState& s, const CaseData& c, bool include_dc) {
    Json j;
    j["case"] = c.name;
    j["converged"] = s.converged;
    j["outer_iterations"] = s.outer_iterations;
    j["coupling_mismatch"] = s.coupling_mismatch;
    j["dc_status"] = dc_status_name(s.dc_status);

    Json ac;
    ac["converged"] = s.ac.converged;
    ac["iterations"] = s.ac.iterations;
    ac["max_mismatch"] = s.ac.max_mismatch;
    Json buses = Json::array();
    for (std::size_t i = 0; i < c.buses.size() && i < s.ac.v.size(); ++i)
        buses.push_back({{"id", c.buses[i].id}, {"v", s.ac.v[i]}, {"theta", s.ac.theta[i]}, {"p_inj", s.ac.p_inj[i]},
                         {"q_inj", s.ac.q_inj[i]}});
    ac["buses"] = buses;
    Json gens = Json::array();
    for (std::size_t g = 0; g < c.generators.size() && g < s.ac.p_gen.size(); ++g)
        gens.push_back({{"bus", c.generators[g].bus}, {"p", s.ac.p_gen[g]}, {"q", s.ac.q_gen[g]}});
    ac["generators"] = gens;
    Json branches = Json::array();
    for (std::size_t k = 0; k < c.branches.size() && k < s.ac.p_from.size(); ++k)
        branches.push_back({{"from", c.branches[k].from}, {"to", c.branches[k].to}, {"p_from", s.ac.p_from[k]},
                            {"q_from", s.ac.q_from[k]}, {"p_to", s.ac.p_to[k]}, {"q_to", s.ac.q_to[k]}});
    ac["branches"] = branches;
    ac["q_limited_buses"] = s.ac.q_limited_buses;
    j["ac"] = ac;

    Json dc;
    dc["converged"] = s.dc.converged;
    dc["iterations"] = s.dc.iterations;
    Json dcb = Json::array();
    for (std::size_t i = 0; i < c.dc_buses.size() && i < s.dc.u_dc.size(); ++i)
        dcb.push_back({{"id", c.dc_buses[i].id}, {"u_dc", s.dc.u_dc[i]}, {"i_inj", s.dc.i_inj[i]}});
    dc["buses"] = dcb;
    Json dcl = Json::array();
    for (std::size_t k = 0; k < c.dc_branches.size() && k < s.dc.i_branch.size(); ++k)
        dcl.push_back({{"from", c.dc_branches[k].from}, {"to", c.dc_branches[k].to}, {"i", s.dc.i_branch[k]}});
    dc["branches"] = dcl;
    j["dc"] = dc;

    Json conv = Json::array();
    for (std::size_t k = 0; k < s.converters.size(); ++k) {
        const auto& x = s.converters[k];
        conv.push_back({{"ac_bus", c.converters[k].ac_bus}, {"dc_bus", c.converters[k].dc_bus},
                        {"mode", mode_name(c.converters[k].mode)}, {"p_s", x.p_s}, {"q_s", x.q_s}, {"p_c", x.p_c},
                        {"q_c", x.q_c}, {"u_s", x.u_s}, {"delta_s", x.delta_s}, {"u_c", x.u_c},
                        {"delta_c", x.delta_c}, {"i_c", x.i_c}, {"p_loss", x.p_loss}, {"p_dc", x.p_dc}});
    }
    j["converters"] = conv;

    const auto obj = evaluate(s, c, include_dc);
    const auto viol = constraint_violation(s, c);
    Json o;
    o["f_cost_usd_per_h"] = obj.f_cost;
    o["v_dev_pu2"] = obj.v_dev;
    o["v_dev_ac_pu2"] = voltage_deviation(s, c, false);
    o["include_dc"] = include_dc;
    o["violation"] = obj.violation;
    o["feasible"] = obj.feasible;
    Json br = Json::array();
    for (const auto& b : viol.breaches)
        br.push_back({{"constraint", b.constraint}, {"entity", b.entity}, {"excess", b.excess}, {"normalized", b.normalized}});
    o["breakdown"] = br;
    o["non_convergence_surcharge"] = viol.surcharge ? kNonConvergenceSurcharge : 0.0;
    j["objectives"] = o;
    return j;
}

ParetoTable pareto_table(const DecisionSpace& space, const ParetoArchive& archive) {
    ParetoTable t;
    for (const auto& v : space.variables()) t.control_names.push_back(v.name);
    for (const auto& e : archive.entries()) {
        t.controls.push_back(space.physical(e.x));
        t.objectives.push_back(e.obj);
    }
    return t;
}

void write_pareto_csv(const std::filesystem::path& path, const ParetoTable& t) {
    auto out = open_out(path);
    for (const auto& n : t.control_names) out << n << ',';
    out << "f_cost_usd_per_h,v_dev_pu2,violation\n";
    for (std::size_t r = 0; r < t.objectives.size(); ++r) {
        for (double x : t.controls[r]) out << x << ',';
        out << t.objectives[r].f_cost << ',' << t.objectives[r].v_dev << ',' << t.objectives[r].violation << '\n';
    }
}

ParetoTable read_pareto_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("file not found: " + path.string());
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path.string());
    const auto header = split(line);
    const std::size_t n = header.size();
    if (n < 3 || header[n - 3] != "f_cost_usd_per_h" || header[n - 2] != "v_dev_pu2" || header[n - 1] != "violation")
        throw std::runtime_error("missing objective columns in " + path.string());
    ParetoTable t;
    t.control_names.assign(header.begin(), header.end() - 3);
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != n) throw std::runtime_error("row " + std::to_string(row) + ": expected " + std::to_string(n) + " columns");
        std::vector<double> vals;
        try {
            for (const auto& c : cells) vals.push_back(std::stod(c));
        } catch (const std::exception&) {
            throw std::runtime_error("row " + std::to_string(row) + ": not a number");
        }
        t.controls.emplace_back(vals.begin(), vals.end() - 3);
        ObjectivePoint o;
        o.f_cost = vals[n - 3];
        o.v_dev = vals[n - 2];
        o.violation = vals[n - 1];
        o.feasible = o.violation <= kFeasibilityTol;
        t.objectives.push_back(o);
    }
    return t;
}

Json pareto_to_json(const ParetoTable& t) {
    Json arr = Json::array();
    for (std::size_t r = 0; r < t.objectives.size(); ++r) {
        Json controls;
        for (std::size_t k = 0; k < t.control_names.size(); ++k) controls[t.control_names[k]] = t.controls[r][k];
        arr.push_back({{"controls", controls},
                       {"f_cost_usd_per_h", t.objectives[r].f_cost},
                       {"v_dev_pu2", t.objectives[r].v_dev},
                       {"violation", t.objectives[r].violation},
                       {"feasible", t.objectives[r].feasible}});
    }
    return Json{{"solutions", arr}};
}

Json stats_to_json(const RunStats& s, const std::string& algo, const OptimizerConfig& cfg) {
    return Json{{"algorithm", algo},
                {"seed", cfg.seed},
                {"pop", cfg.s_pop},
                {"subswarms", cfg.subswarms},
                {"iters", cfg.i_max},
                {"exchange_interval", cfg.i_t},
                {"evaluations", s.evaluations},
                {"wall_seconds", s.wall_seconds},
                {"hypervolume_trace", s.hv_trace}};
}

void write_front_dat(const std::filesystem::path& path, const std::vector<ObjectivePoint>& pts) {
    auto out = open_out(path);
    out << "# f_cost_usd_per_h v_dev_pu2\n";
    for (const auto& p : pts) out << p.f_cost << ' ' << p.v_dev << '\n';
}

Json decision_to_json(const DecisionReport& r, const ParetoTable& t) {
    Json clusters = Json::array();
    for (std::size_t k = 0; k < r.clusters.size(); ++k) {
        const auto& c = r.clusters[k];
        Json members = Json::array();
        for (std::size_t m = 0; m < c.members.size(); ++m) {
            const auto i = c.members[m];
            members.push_back({{"row", i},
                               {"f_cost_usd_per_h", t.objectives[i].f_cost},
                               {"v_dev_pu2", t.objectives[i].v_dev},
                               {"priority_d", c.ranking.d[m]}});
        }
        Json controls;
        for (std::size_t v = 0; v < t.control_names.size(); ++v) controls[t.control_names[v]] = t.controls[c.compromise][v];
        clusters.push_back({{"cluster", k},
                            {"label", c.label},
                            {"center", {{"f_cost_usd_per_h", c.center[0]}, {"v_dev_pu2", c.center[1]}}},
                            {"degenerate", c.ranking.degenerate},
                            {"tie", c.tie},
                            {"members", members},
                            {"compromise",
                             {{"row", c.compromise},
                              {"f_cost_usd_per_h", t.objectives[c.compromise].f_cost},
                              {"v_dev_pu2", t.objectives[c.compromise].v_dev},
                              {"controls", controls}}}});
    }
    return Json{{"fcm", {{"iterations", r.fcm.iterations}, {"loss", r.fcm.loss}}}, {"clusters", clusters}};
}

void write_compromise_csv(const std::filesystem::path& path, const DecisionReport& r, const ParetoTable& t) {
    auto out = open_out(path);
    out << "cluster,f_cost_usd_per_h,v_dev_pu2,priority_d\n";
    for (std::size_t k = 0; k < r.clusters.size(); ++k) {
        const auto& c = r.clusters[k];
        const auto pos = std::find(c.members.begin(), c.members.end(), c.compromise) - c.members.begin();
        out << k << ',' << t.objectives[c.compromise].f_cost << ',' << t.objectives[c.compromise].v_dev << ','
            << c.ranking.d[static_cast<std::size_t>(pos)] << '\n';
    }
}

void write_front_clustered_dat(const std::filesystem::path& path, const DecisionReport& r, const ParetoTable& t) {
    auto out = open_out(path);
    out << "# f_cost_usd_per_h v_dev_pu2 cluster\n";
    for (std::size_t k = 0; k < r.clusters.size(); ++k)
        for (auto i : r.clusters[k].members) out << t.objectives[i].f_cost << ' ' << t.objectives[i].v_dev << ' ' << k << '\n';
}

void write_json(const std::filesystem::path& path, const Json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace acdc
