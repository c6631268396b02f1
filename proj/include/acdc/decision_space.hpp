#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "acdc/acdc_sequential.hpp"
#include "acdc/objectives.hpp"

namespace acdc {

enum class VarKind { GenP, GenV, ConvPs, ConvQs, ConvUs, ConvUdc, Tap, Shunt };

struct Variable {
    std::string name;  // pg.<bus>, ug.<bus>, conv<k>.p_s, tap.<from>-<to>, qc.<bus>, ...
    VarKind kind = VarKind::GenP;
    std::size_t target = 0;  // generator, converter, tap-branch or bank position
    double lo = 0.0;         // for integer slots: 0
    double hi = 0.0;         // for integer slots: step count
    bool integer = false;
    double grid_min = 0.0;  // physical value of index 0
    double grid_step = 0.0;
};

/// Layout of the optimizer's mixed continuous/integer vector for one case.
/// Integer slots store a relaxed real and decode to grid_min + round(x) * grid_step.
class DecisionSpace {
public:
    explicit DecisionSpace(const CaseData& c);

    std::size_t size() const { return vars_.size(); }
    const std::vector<Variable>& variables() const { return vars_; }
    std::vector<double> lower() const;
    std::vector<double> upper() const;

    ControlSettings decode(const std::vector<double>& x) const;
    /// Inverse of decode for settings already on the grids.
    std::vector<double> encode(const ControlSettings& s) const;
    /// Physical value of every slot after rounding, in variable order.
    std::vector<double> physical(const std::vector<double>& x) const;
    std::vector<double> clamp(std::vector<double> x) const;

private:
    const CaseData* case_;
    std::vector<Variable> vars_;
};

/// What the optimizers see: a box-bounded vector problem with a two-objective,
/// constraint-aware evaluation. `slot` identifies the caller (e.g. a particle)
/// so implementations may warm-start from that caller's previous evaluation.
class Problem {
public:
    virtual ~Problem() = default;
    virtual std::size_t dim() const = 0;
    virtual std::vector<double> lower() const = 0;
    virtual std::vector<double> upper() const = 0;
    virtual bool is_integer(std::size_t i) const { (void)i; return false; }
    virtual ObjectivePoint evaluate(const std::vector<double>& x, std::size_t slot) = 0;
    /// Optional starting point to include in the initial population.
    virtual std::vector<double> seed_point() const { return {}; }
};

class OpfProblem : public Problem {
public:
    OpfProblem(const CaseData& c, bool include_dc, bool warm_start = true);

    std::size_t dim() const override { return space_.size(); }
    std::vector<double> lower() const override { return space_.lower(); }
    std::vector<double> upper() const override { return space_.upper(); }
    bool is_integer(std::size_t i) const override { return space_.variables()[i].integer; }
    ObjectivePoint evaluate(const std::vector<double>& x, std::size_t slot) override;
    std::vector<double> seed_point() const override;

    const DecisionSpace& space() const { return space_; }
    const CaseData& case_data() const { return *case_; }
    bool include_dc() const { return include_dc_; }
    SystemState solve(const std::vector<double>& x) const;

private:
    const CaseData* case_;
    DecisionSpace space_;
    bool include_dc_;
    bool warm_;
    std::vector<SystemState> slots_;
};

}  // namespace acdc
