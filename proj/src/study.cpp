#include "acdc/study.hpp"

#include <algorithm>
#include <stdexcept>

namespace acdc {

std::vector<StudyVariant> study_variants(const std::string& study) {
    if (study == "case14-modes")
        return {
            {"Case 0", "case14_ac", "AC-only IEEE 14-bus"},
            {"Case 1", "case14_2t", "2-terminal, VSC1 const Udc/Qs, VSC2 const Ps/Qs"},
            {"Case 2", "case14_2t_swapped", "2-terminal, modes of Case 1 swapped"},
            {"Case 3", "case14_3t_vsc1_slack", "3-terminal, VSC1 const Udc/Qs"},
            {"Case 4", "case14_3t_vsc2_slack", "3-terminal, VSC2 const Udc/Qs"},
            {"Case 5", "case14_3t", "3-terminal, VSC3 const Udc/Qs"},
            {"Case 6", "case14_3t_droop", "3-terminal, droop on all converters"},
        };
    if (study == "case118-terminals")
        return {
            {"Case 0", "case118_ac", "AC-only IEEE 118-bus"},
            {"Case 1", "case118_2t", "2-terminal at buses 103/104"},
            {"Case 2", "case118_3t", "3-terminal at buses 103/105/104"},
            {"Case 3", "case118_3t_droop", "3-terminal, droop on all converters"},
        };
    throw std::invalid_argument("unknown study: " + study);
}

int default_iterations(const CaseData& c) { return c.buses.size() > 50 ? 100 : 50; }

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::size_t representative_index(const std::vector<ObjectivePoint>& pts, Obj2 weights) {
    std::vector<Obj2> feas;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].feasible) {
            feas.push_back({pts[i].f_cost, pts[i].v_dev});
            idx.push_back(i);
        }
    if (feas.empty()) return 0;
    const auto g = grp_priority(feas, weights);
    return idx[static_cast<std::size_t>(std::max_element(g.d.begin(), g.d.end()) - g.d.begin())];
}

std::vector<VariantOutcome> run_study(const std::string& study, const StudyOptions& opt) {
    const auto variants = study_variants(study);
    std::vector<VariantOutcome> out;
    for (const auto& v : variants) {
        const CaseData c = load_case(resolve_case_path(v.case_name));
        OptimizerConfig cfg = opt.cfg;
        if (cfg.i_max <= 0) cfg.i_max = default_iterations(c);
        VariantOutcome vo;
        vo.variant = v;
        for (auto seed : opt.seeds) {
            cfg.seed = seed;
            const auto res = run_cmopso(c, cfg, opt.include_dc);
            const auto pts = res.archive.objectives();
            vo.representative.push_back(pts[representative_index(pts, opt.weights)]);
            double fmin = pts.front().f_cost, vmin = pts.front().v_dev;
            for (const auto& p : pts)
                if (p.feasible) {
                    fmin = std::min(fmin, p.f_cost);
                    vmin = std::min(vmin, p.v_dev);
                }
            vo.min_cost.push_back(fmin);
            vo.min_v_dev.push_back(vmin);
        }
        std::vector<double> fs, vs;
        for (const auto& p : vo.representative) {
            fs.push_back(p.f_cost);
            vs.push_back(p.v_dev);
        }
        vo.median_f = median(fs);
        vo.median_v = median(vs);
        out.push_back(std::move(vo));
    }
    const double f0 = out.front().median_f, v0 = out.front().median_v;
    for (auto& vo : out) {
        vo.imp_f = f0 != 0.0 ? 100.0 * (f0 - vo.median_f) / f0 : 0.0;
        vo.imp_v = v0 != 0.0 ? 100.0 * (v0 - vo.median_v) / v0 : 0.0;
    }
    return out;
}

}  // namespace acdc
