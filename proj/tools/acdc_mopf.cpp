// acdc-mopf: command-line front end for the AC/DC multi-objective OPF pipeline.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "acdc/acdc_sequential.hpp"
#include "acdc/case_model.hpp"
#include "acdc/cmopso.hpp"
#include "acdc/decision_space.hpp"
#include "acdc/decision_support.hpp"
#include "acdc/objectives.hpp"
#include "acdc/reports.hpp"
#include "acdc/study.hpp"

namespace fs = std::filesystem;
using namespace acdc;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNonConvergence = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CaseData open_case(const std::string& name) {
    const auto path = resolve_case_path(name);
    if (!fs::exists(path)) throw UsageError("file not found: " + name);
    auto c = load_case(path);
    const auto v = validate_case(c);
    if (!v.empty()) {
        std::ostringstream msg;
        msg << "invalid case " << name << ":";
        for (const auto& e : v) msg << "\n  " << e.entity << ": " << e.message;
        throw UsageError(msg.str());
    }
    return c;
}

fs::path prepare_out(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec || !fs::is_directory(p)) throw UsageError("cannot create output directory " + dir);
    return p;
}

double to_number(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad value for " + key + ": " + s);
    }
}

std::size_t generator_at(const CaseData& c, int bus, const std::string& key) {
    for (std::size_t g = 0; g < c.generators.size(); ++g)
        if (c.generators[g].bus == bus) return g;
    throw UsageError("no generator at bus in " + key);
}

// key=value overrides: converter.N.{p_s,q_s,u_s,u_dc,slope}, pg.<bus>, ug.<bus>,
// tap.<from>-<to> (ratio), qc.<bus> (p.u. at 1.0 V). Converter N is 0-based.
void apply_override(const CaseData& c, ControlSettings& s, const std::string& item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("override needs key=value: " + item);
    const std::string key = item.substr(0, eq);
    const double val = to_number(key, item.substr(eq + 1));

    auto parts = std::vector<std::string>{};
    {
        std::stringstream ss(key);
        std::string tok;
        while (std::getline(ss, tok, '.')) parts.push_back(tok);
    }
    auto as_int = [&](const std::string& t) {
        try {
            return std::stoi(t);
        } catch (const std::exception&) {
            throw UsageError("bad index in " + key);
        }
    };

    if (parts.size() == 3 && parts[0] == "converter") {
        const int k = as_int(parts[1]);
        if (k < 0 || static_cast<std::size_t>(k) >= s.modes.size()) throw UsageError("no such converter in " + key);
        const auto& f = parts[2];
        bool hit = false;
        std::visit(
            [&](auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (requires { m.p_s; }) if (f == "p_s") m.p_s = val, hit = true;
                if constexpr (requires { m.q_s; }) if (f == "q_s") m.q_s = val, hit = true;
                if constexpr (requires { m.u_s; }) if (f == "u_s") m.u_s = val, hit = true;
                if constexpr (requires { m.u_dc; }) if (f == "u_dc") m.u_dc = val, hit = true;
                if constexpr (std::is_same_v<T, mode::Droop>) if (f == "slope") m.slope = val, hit = true;
            },
            s.modes[static_cast<std::size_t>(k)]);
        if (!hit) throw UsageError(key + " is not a set-point of mode " + mode_name(s.modes[static_cast<std::size_t>(k)]));
        return;
    }
    if (parts.size() == 2 && parts[0] == "pg") {
        s.ac.gen_p[generator_at(c, as_int(parts[1]), key)] = val;
        return;
    }
    if (parts.size() == 2 && parts[0] == "ug") {
        s.ac.gen_v[generator_at(c, as_int(parts[1]), key)] = val;
        return;
    }
    if (parts.size() == 2 && parts[0] == "tap") {
        const auto dash = parts[1].find('-');
        if (dash == std::string::npos) throw UsageError("tap key needs <from>-<to>: " + key);
        const int from = as_int(parts[1].substr(0, dash)), to = as_int(parts[1].substr(dash + 1));
        const auto taps = c.tap_branches();
        for (std::size_t t = 0; t < taps.size(); ++t) {
            const auto& br = c.branches[taps[t]];
            if (br.from == from && br.to == to) {
                s.ac.taps[t] = val;
                return;
            }
        }
        throw UsageError("no tap changer on " + key);
    }
    if (parts.size() == 2 && parts[0] == "qc") {
        const int bus = as_int(parts[1]);
        for (std::size_t b = 0; b < c.shunts.size(); ++b)
            if (c.shunts[b].bus == bus) {
                s.ac.shunt_q[b] = val;
                return;
            }
        throw UsageError("no capacitor bank at " + key);
    }
    throw UsageError("unknown override key: " + key);
}

std::vector<double> parse_weights(const std::string& s) {
    std::vector<double> w;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) w.push_back(to_number("--weights", tok));
    if (w.size() != 2) throw UsageError("--weights takes two comma-separated values");
    if (w[0] < 0 || w[1] < 0 || w[0] + w[1] <= 0) throw UsageError("--weights must be non-negative with a positive sum");
    return w;
}

void print_objectives(const ObjectivePoint& o) {
    std::cout << std::fixed << std::setprecision(4) << "  F      " << o.f_cost << " $/h\n"
              << std::setprecision(6) << "  V_de   " << o.v_dev << " p.u.^2\n"
              << "  viol   " << o.violation << (o.feasible ? "  (feasible)" : "") << "\n";
}

// ---- pf ----

struct PfArgs {
    std::string case_name;
    std::vector<std::string> sets;
    std::string out = ".";
    bool ac_only = false;
};

int cmd_pf(const PfArgs& a) {
    const auto c = open_case(a.case_name);
    auto controls = base_controls(c);
    for (const auto& s : a.sets) apply_override(c, controls, s);
    const auto dir = prepare_out(a.out);

    const auto st = solve_acdc(c, controls);
    const bool include_dc = !a.ac_only;
    write_json(dir / "state.json", state_to_json(st, c, include_dc));

    std::cout << c.name << ": " << (st.converged ? "converged" : "NOT converged") << " after " << st.outer_iterations
              << " outer iteration(s)\n";
    if (!st.converged) {
        std::cerr << "power flow did not converge (coupling mismatch " << st.coupling_mismatch << ")\n";
        return kNonConvergence;
    }
    print_objectives(evaluate(st, c, include_dc));
    auto rep = constraint_violation(st, c);
    std::sort(rep.breaches.begin(), rep.breaches.end(),
              [](const Breach& x, const Breach& y) { return x.normalized > y.normalized; });
    if (!rep.breaches.empty()) {
        std::cout << "  worst violations:\n";
        for (std::size_t i = 0; i < std::min<std::size_t>(5, rep.breaches.size()); ++i) {
            const auto& b = rep.breaches[i];
            std::cout << "    " << std::left << std::setw(14) << b.constraint << std::setw(14) << b.entity << std::right
                      << std::setprecision(6) << b.excess << "\n";
        }
    }
    return kOk;
}

// ---- optimize ----

struct OptArgs {
    std::string case_name;
    std::string algo = "cmopso";
    int pop = 100;
    int iters = 0;
    int subswarms = 4;
    int exchange = 5;
    std::string exchange_mode = "overwrite";
    std::uint64_t seed = 42;
    std::size_t archive = 100;
    std::string out = ".";
    bool ac_only = false;
};

int cmd_optimize(const OptArgs& a) {
    const auto c = open_case(a.case_name);
    OptimizerConfig cfg;
    cfg.s_pop = a.pop;
    cfg.subswarms = a.subswarms;
    cfg.i_max = a.iters > 0 ? a.iters : default_iterations(c);
    cfg.i_t = a.exchange;
    cfg.seed = a.seed;
    cfg.archive_capacity = a.archive;
    cfg.exchange = a.exchange_mode == "merge" ? ExchangeMode::Merge : ExchangeMode::Overwrite;
    if (a.algo == "cmopso") validate_config(cfg);

    const auto dir = prepare_out(a.out);
    OpfProblem problem(c, !a.ac_only);
    const auto res = a.algo == "cmopso" ? run_cmopso(problem, cfg) : run_nsga2(problem, cfg);

    const auto table = pareto_table(problem.space(), res.archive);
    write_pareto_csv(dir / "pareto.csv", table);
    write_json(dir / "pareto.json", pareto_to_json(table));
    write_json(dir / "stats.json", stats_to_json(res.stats, a.algo, cfg));
    write_front_dat(dir / "front.dat", table.objectives);

    std::size_t feasible = 0;
    double fmin = 0, fmax = 0, vmin = 0;
    for (const auto& o : table.objectives) {
        if (!o.feasible) continue;
        if (feasible++ == 0) fmin = fmax = o.f_cost, vmin = o.v_dev;
        fmin = std::min(fmin, o.f_cost);
        fmax = std::max(fmax, o.f_cost);
        vmin = std::min(vmin, o.v_dev);
    }
    std::cout << a.algo << " on " << c.name << ": " << table.objectives.size() << " archive points (" << feasible
              << " feasible), " << res.stats.evaluations << " evaluations, " << std::fixed << std::setprecision(2)
              << res.stats.wall_seconds << " s\n";
    if (feasible)
        std::cout << "  cost range " << fmin << " .. " << fmax << " $/h, min V_de " << std::setprecision(6) << vmin
                  << "\n";
    return kOk;
}

// ---- decide ----

struct DecideArgs {
    std::string pareto;
    int clusters = 2;
    std::string weights = "0.5,0.5";
    std::uint64_t seed = 42;
    std::string out = ".";
};

int cmd_decide(const DecideArgs& a) {
    const auto w = parse_weights(a.weights);
    if (!fs::exists(a.pareto)) throw UsageError("file not found: " + a.pareto);
    const auto all = read_pareto_csv(a.pareto);

    // Only feasible rows are offered to the operator, unless none are.
    ParetoTable t;
    t.control_names = all.control_names;
    for (std::size_t i = 0; i < all.objectives.size(); ++i)
        if (all.objectives[i].feasible) {
            t.controls.push_back(all.controls[i]);
            t.objectives.push_back(all.objectives[i]);
        }
    if (t.objectives.empty()) t = all;
    if (t.objectives.size() < 2) throw UsageError("decide needs at least 2 Pareto rows, got " + std::to_string(t.objectives.size()));
    if (a.clusters < 1) throw UsageError("--clusters must be at least 1");

    const auto dir = prepare_out(a.out);
    DecisionReport rep;
    try {
        rep = select_compromise(t.objectives, a.clusters, {w[0], w[1]}, a.seed);
    } catch (const DegenerateInput& e) {
        throw UsageError(e.what());
    }
    write_json(dir / "decision.json", decision_to_json(rep, t));
    write_compromise_csv(dir / "compromise.csv", rep, t);
    write_front_clustered_dat(dir / "front_clustered.dat", rep, t);

    std::cout << std::left << std::setw(22) << "cluster" << std::right << std::setw(8) << "size" << std::setw(14)
              << "F ($/h)" << std::setw(12) << "V_de" << std::setw(9) << "d\n";
    for (const auto& cl : rep.clusters) {
        const auto& o = t.objectives[cl.compromise];
        double d = 0;
        for (std::size_t m = 0; m < cl.members.size(); ++m)
            if (cl.members[m] == cl.compromise) d = cl.ranking.d[m];
        std::cout << std::left << std::setw(22) << cl.label << std::right << std::setw(8) << cl.members.size()
                  << std::fixed << std::setw(14) << std::setprecision(2) << o.f_cost << std::setw(12)
                  << std::setprecision(6) << o.v_dev << std::setw(8) << std::setprecision(4) << d << "\n";
    }
    return kOk;
}

// ---- study ----

struct StudyArgs {
    std::string name;
    int seeds = 1;
    std::uint64_t seed = 42;
    int pop = 100;
    int iters = 0;
    std::string out = ".";
    bool ac_only = false;
};

int cmd_study(const StudyArgs& a) {
    study_variants(a.name);  // throws on unknown names before any work
    if (a.seeds < 1) throw UsageError("--seeds must be at least 1");
    StudyOptions opt;
    opt.cfg.s_pop = a.pop;
    opt.cfg.i_max = a.iters;
    opt.include_dc = !a.ac_only;
    opt.seeds.clear();
    for (int k = 0; k < a.seeds; ++k) opt.seeds.push_back(a.seed + static_cast<std::uint64_t>(k));
    {
        auto probe = opt.cfg;
        probe.i_max = std::max(probe.i_max, 1);
        validate_config(probe);
    }

    const auto dir = prepare_out(a.out);
    const auto rows = run_study(a.name, opt);

    Json j = Json::array();
    std::cout << std::left << std::setw(9) << "variant" << std::setw(24) << "case" << std::right << std::setw(12)
              << "F ($/h)" << std::setw(12) << "V_de" << std::setw(10) << "IMP_F %" << std::setw(10) << "IMP_V %\n";
    for (const auto& r : rows) {
        std::cout << std::left << std::setw(9) << r.variant.label << std::setw(24) << r.variant.case_name << std::right
                  << std::fixed << std::setprecision(2) << std::setw(12) << r.median_f << std::setprecision(6)
                  << std::setw(12) << r.median_v << std::setprecision(3) << std::setw(10) << r.imp_f << std::setw(10)
                  << r.imp_v << "\n";
        j.push_back({{"variant", r.variant.label},
                     {"case", r.variant.case_name},
                     {"description", r.variant.description},
                     {"median_f_cost", r.median_f},
                     {"median_v_dev", r.median_v},
                     {"imp_f_percent", r.imp_f},
                     {"imp_v_percent", r.imp_v},
                     {"min_cost", r.min_cost},
                     {"min_v_dev", r.min_v_dev}});
    }
    write_json(dir / "study.json", Json{{"study", a.name}, {"seeds", opt.seeds}, {"rows", j}});
    return kOk;
}

// ---- validate ----

int cmd_validate(const std::string& name) {
    const auto path = resolve_case_path(name);
    if (!fs::exists(path)) throw UsageError("file not found: " + name);
    const auto c = load_case(path);
    const auto v = validate_case(c);
    if (v.empty()) {
        std::cout << c.name << ": ok (" << c.buses.size() << " AC buses, " << c.dc_buses.size() << " DC buses, "
                  << c.converters.size() << " converters)\n";
        return kOk;
    }
    for (const auto& e : v) std::cerr << e.entity << ": " << e.message << "\n";
    return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective optimal power flow for hybrid AC/DC grids with VSC-HVDC"};
    app.require_subcommand(1);

    PfArgs pf;
    auto* sub_pf = app.add_subcommand("pf", "single AC/DC power flow at the case (or overridden) settings");
    sub_pf->add_option("--case", pf.case_name, "case file or shipped case name")->required();
    sub_pf->add_option("--set", pf.sets, "override, e.g. converter.1.p_s=0.3, pg.2=0.4, tap.4-7=0.98, qc.9=0.19");
    sub_pf->add_option("--out", pf.out, "output directory");
    sub_pf->add_flag("--ac-only", pf.ac_only, "V_de over AC buses only");

    OptArgs op;
    auto* sub_opt = app.add_subcommand("optimize", "search the Pareto front of cost and voltage deviation");
    sub_opt->add_option("--case", op.case_name, "case file or shipped case name")->required();
    sub_opt->add_option("--algo", op.algo)->check(CLI::IsMember({"cmopso", "nsga2"}));
    sub_opt->add_option("--pop", op.pop, "population size");
    sub_opt->add_option("--iters", op.iters, "iterations (default 50, or 100 on large cases)");
    sub_opt->add_option("--subswarms", op.subswarms);
    sub_opt->add_option("--exchange", op.exchange, "iterations between subswarm exchanges");
    sub_opt->add_option("--exchange-mode", op.exchange_mode)->check(CLI::IsMember({"overwrite", "merge"}));
    sub_opt->add_option("--archive", op.archive, "archive capacity");
    sub_opt->add_option("--seed", op.seed);
    sub_opt->add_option("--out", op.out, "output directory");
    sub_opt->add_flag("--ac-only", op.ac_only, "voltage deviation over AC buses only");

    DecideArgs de;
    auto* sub_de = app.add_subcommand("decide", "cluster a Pareto set and pick per-cluster compromises");
    sub_de->add_option("--pareto,pareto", de.pareto, "pareto.csv from optimize")->required();
    sub_de->add_option("--clusters", de.clusters);
    sub_de->add_option("--weights", de.weights, "objective weights, e.g. 0.7,0.3");
    sub_de->add_option("--seed", de.seed);
    sub_de->add_option("--out", de.out, "output directory");

    StudyArgs sa;
    auto* sub_st = app.add_subcommand("study", "run the full pipeline over a family of case variants");
    sub_st->add_option("study", sa.name, "case14-modes or case118-terminals")->required();
    sub_st->add_option("--seeds", sa.seeds, "number of seeds, starting at --seed");
    sub_st->add_option("--seed", sa.seed);
    sub_st->add_option("--pop", sa.pop);
    sub_st->add_option("--iters", sa.iters);
    sub_st->add_option("--out", sa.out, "output directory");
    sub_st->add_flag("--ac-only", sa.ac_only);

    std::string vcase;
    auto* sub_va = app.add_subcommand("validate", "check a case file");
    sub_va->add_option("--case,case", vcase)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (sub_pf->parsed()) return cmd_pf(pf);
        if (sub_opt->parsed()) return cmd_optimize(op);
        if (sub_de->parsed()) return cmd_decide(de);
        if (sub_st->parsed()) return cmd_study(sa);
        if (sub_va->parsed()) return cmd_validate(vcase);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
