#include "acdc/case_model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace acdc {

using nlohmann::json;

namespace {

int grid_steps(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi > lo)) return -1;
    const double n = (hi - lo) / step;
    const double rounded = std::round(n);
    if (rounded < 1.0 || std::abs(n - rounded) > 1e-6 * std::max(1.0, rounded)) return -1;
    return static_cast<int>(rounded);
}

// Field access with a path-qualified SchemaError for missing or mistyped entries.
class Reader {
public:
    Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw SchemaError(where_ + ": expected an object");
    }

    template <typename T>
    T req(const char* key) const {
        auto it = j_.find(key);
        if (it == j_.end()) throw SchemaError(where_ + ": missing required field '" + key + "'");
        return as<T>(*it, key);
    }

    template <typename T>
    T opt(const char* key, T fallback) const {
        auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return fallback;
        return as<T>(*it, key);
    }

    bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    const json& at(const char* key) const { return j_.at(key); }
    const std::string& where() const { return where_; }

private:
    template <typename T>
    T as(const json& v, const char* key) const {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw SchemaError(where_ + "." + key + ": expected a boolean");
        } else if constexpr (std::is_arithmetic_v<T>) {
            if (!v.is_number()) throw SchemaError(where_ + "." + key + ": expected a number");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw SchemaError(where_ + "." + key + ": expected a string");
        }
        return v.get<T>();
    }

    const json& j_;
    std::string where_;
};

BusKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "slack") return BusKind::Slack;
    if (s == "pv") return BusKind::PV;
    if (s == "pq") return BusKind::PQ;
    throw SchemaError(where + ".kind: unknown bus kind '" + s + "'");
}

const char* kind_name(BusKind k) {
    switch (k) {
        case BusKind::Slack: return "slack";
        case BusKind::PV: return "pv";
        case BusKind::PQ: return "pq";
    }
    return "pq";
}

ControlMode parse_mode(const json& j, const std::string& where) {
    Reader r(j, where);
    const auto type = r.req<std::string>("type");
    if (type == "const_udc_const_qs") return mode::ConstUdcConstQs{r.req<double>("u_dc"), r.req<double>("q_s")};
    if (type == "const_udc_const_us") return mode::ConstUdcConstUs{r.req<double>("u_dc"), r.req<double>("u_s")};
    if (type == "const_ps_const_qs") return mode::ConstPsConstQs{r.req<double>("p_s"), r.req<double>("q_s")};
    if (type == "const_ps_const_us") return mode::ConstPsConstUs{r.req<double>("p_s"), r.req<double>("u_s")};
    if (type == "droop")
        return mode::Droop{r.req<double>("slope"), r.req<double>("u_dc"), r.req<double>("p_s"), r.opt<double>("q_s", 0.0)};
    throw SchemaError(where + ".type: unknown control mode '" + type + "'");
}

json mode_json(const ControlMode& m) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, mode::ConstUdcConstQs>)
                return {{"type", "const_udc_const_qs"}, {"u_dc", v.u_dc}, {"q_s", v.q_s}};
            else if constexpr (std::is_same_v<T, mode::ConstUdcConstUs>)
                return {{"type", "const_udc_const_us"}, {"u_dc", v.u_dc}, {"u_s", v.u_s}};
            else if constexpr (std::is_same_v<T, mode::ConstPsConstQs>)
                return {{"type", "const_ps_const_qs"}, {"p_s", v.p_s}, {"q_s", v.q_s}};
            else if constexpr (std::is_same_v<T, mode::ConstPsConstUs>)
                return {{"type", "const_ps_const_us"}, {"p_s", v.p_s}, {"u_s", v.u_s}};
            else
                return {{"type", "droop"}, {"slope", v.slope}, {"u_dc", v.u_dc}, {"p_s", v.p_s}, {"q_s", v.q_s}};
        },
        m);
}

const json& array_field(const json& root, const char* key, bool required) {
    static const json empty = json::array();
    auto it = root.find(key);
    if (it == root.end()) {
        if (required) throw SchemaError(std::string("case: missing required field '") + key + "'");
        return empty;
    }
    if (!it->is_array()) throw SchemaError(std::string("case.") + key + ": expected an array");
    return *it;
}

std::string item(const char* list, std::size_t i) { return std::string(list) + "[" + std::to_string(i) + "]"; }

CaseData from_json(const json& root) {
    if (!root.is_object()) throw SchemaError("case: top level must be an object");
    Reader top(root, "case");
    CaseData c;
    c.name = top.opt<std::string>("name", "");
    c.description = top.opt<std::string>("description", "");
    c.s_base = top.opt<double>("s_base", 100.0);

    const auto& buses = array_field(root, "buses", true);
    for (std::size_t i = 0; i < buses.size(); ++i) {
        Reader r(buses[i], item("buses", i));
        AcBus b;
        b.id = r.req<int>("id");
        b.kind = parse_kind(r.req<std::string>("kind"), r.where());
        b.p_load = r.opt("p_load", 0.0);
        b.q_load = r.opt("q_load", 0.0);
        b.shunt_g = r.opt("shunt_g", 0.0);
        b.shunt_b = r.opt("shunt_b", 0.0);
        b.v_min = r.opt("v_min", 0.94);
        b.v_max = r.opt("v_max", 1.06);
        b.v_ref = r.opt("v_ref", 1.0);
        c.buses.push_back(b);
    }

    const auto& branches = array_field(root, "branches", true);
    for (std::size_t i = 0; i < branches.size(); ++i) {
        Reader r(branches[i], item("branches", i));
        AcBranch br;
        br.from = r.req<int>("from");
        br.to = r.req<int>("to");
        br.r = r.opt("r", 0.0);
        br.x = r.req<double>("x");
        br.b_charging = r.opt("b_charging", 0.0);
        br.ratio = r.opt("ratio", 1.0);
        br.s_max = r.opt("s_max", 99.0);
        if (r.has("tap")) {
            Reader t(r.at("tap"), r.where() + ".tap");
            br.tap = TapChanger{t.req<double>("ratio_min"), t.req<double>("ratio_max"), t.req<double>("step")};
        }
        c.branches.push_back(br);
    }

    const auto& gens = array_field(root, "generators", true);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Reader r(gens[i], item("generators", i));
        Generator g;
        g.bus = r.req<int>("bus");
        g.p = r.opt("p", 0.0);
        g.v_set = r.opt("v_set", 1.0);
        g.p_min = r.req<double>("p_min");
        g.p_max = r.req<double>("p_max");
        g.q_min = r.req<double>("q_min");
        g.q_max = r.req<double>("q_max");
        g.cost_a = r.opt("cost_a", 0.0);
        g.cost_b = r.opt("cost_b", 0.0);
        g.cost_c = r.opt("cost_c", 0.0);
        g.controllable = r.opt("controllable", true);
        c.generators.push_back(g);
    }

    const auto& shunts = array_field(root, "shunts", false);
    for (std::size_t i = 0; i < shunts.size(); ++i) {
        Reader r(shunts[i], item("shunts", i));
        ShuntCapacitorBank s;
        s.bus = r.req<int>("bus");
        s.q_min = r.req<double>("q_min");
        s.q_max = r.req<double>("q_max");
        s.step = r.req<double>("step");
        s.q = r.opt("q", s.q_min);
        c.shunts.push_back(s);
    }

    const auto& dc_buses = array_field(root, "dc_buses", false);
    for (std::size_t i = 0; i < dc_buses.size(); ++i) {
        Reader r(dc_buses[i], item("dc_buses", i));
        DcBus b;
        b.id = r.req<int>("id");
        b.u_min = r.opt("u_min", 0.94);
        b.u_max = r.opt("u_max", 1.06);
        b.u_ref = r.opt("u_ref", 1.0);
        if (r.has("i_max")) b.i_max = r.req<double>("i_max");
        c.dc_buses.push_back(b);
    }

    const auto& dc_branches = array_field(root, "dc_branches", false);
    for (std::size_t i = 0; i < dc_branches.size(); ++i) {
        Reader r(dc_branches[i], item("dc_branches", i));
        c.dc_branches.push_back({r.req<int>("from"), r.req<int>("to"), r.req<double>("r"), r.req<double>("i_max")});
    }

    const auto& convs = array_field(root, "converters", false);
    for (std::size_t i = 0; i < convs.size(); ++i) {
        Reader r(convs[i], item("converters", i));
        Converter v;
        v.ac_bus = r.req<int>("ac_bus");
        v.dc_bus = r.req<int>("dc_bus");
        v.r_xfmr = r.req<double>("r_xfmr");
        v.x_xfmr = r.req<double>("x_xfmr");
        v.b_filter = r.opt("b_filter", 0.0);
        v.loss_a = r.opt("loss_a", 11.033e-3);
        v.loss_b = r.opt("loss_b", 3.464e-3);
        v.loss_c = r.opt("loss_c", 5.534e-3);
        if (!r.has("mode")) throw SchemaError(r.where() + ": missing required field 'mode'");
        v.mode = parse_mode(r.at("mode"), r.where() + ".mode");
        v.p_s_min = r.opt("p_s_min", -1.0);
        v.p_s_max = r.opt("p_s_max", 1.0);
        v.q_s_min = r.opt("q_s_min", -1.0);
        v.q_s_max = r.opt("q_s_max", 1.0);
        if (r.has("pq_circle")) {
            Reader p(r.at("pq_circle"), r.where() + ".pq_circle");
            v.pq_circle = {p.opt("p0", 0.0), p.opt("q0", 0.0), p.opt("r_min", 0.0), p.opt("r_max", 1.0)};
        }
        v.p_s = r.opt("p_s", 0.0);
        v.q_s = r.opt("q_s", 0.0);
        c.converters.push_back(v);
    }

    // Dangling references are schema errors: nothing downstream can interpret them.
    auto need_bus = [&](int id, const std::string& where) {
        if (!c.find_bus(id)) throw SchemaError(where + ": references unknown AC bus " + std::to_string(id));
    };
    auto need_dc = [&](int id, const std::string& where) {
        if (!c.find_dc_bus(id)) throw SchemaError(where + ": references unknown DC bus " + std::to_string(id));
    };
    for (std::size_t i = 0; i < c.branches.size(); ++i) {
        need_bus(c.branches[i].from, item("branches", i));
        need_bus(c.branches[i].to, item("branches", i));
    }
    for (std::size_t i = 0; i < c.generators.size(); ++i) need_bus(c.generators[i].bus, item("generators", i));
    for (std::size_t i = 0; i < c.shunts.size(); ++i) need_bus(c.shunts[i].bus, item("shunts", i));
    for (std::size_t i = 0; i < c.dc_branches.size(); ++i) {
        need_dc(c.dc_branches[i].from, item("dc_branches", i));
        need_dc(c.dc_branches[i].to, item("dc_branches", i));
    }
    for (std::size_t i = 0; i < c.converters.size(); ++i) {
        need_bus(c.converters[i].ac_bus, item("converters", i));
        need_dc(c.converters[i].dc_bus, item("converters", i));
    }
    return c;
}

json to_json(const CaseData& c) {
    json root;
    root["name"] = c.name;
    root["description"] = c.description;
    root["s_base"] = c.s_base;
    root["buses"] = json::array();
    for (const auto& b : c.buses)
        root["buses"].push_back({{"id", b.id}, {"kind", kind_name(b.kind)}, {"p_load", b.p_load}, {"q_load", b.q_load},
                                 {"shunt_g", b.shunt_g}, {"shunt_b", b.shunt_b}, {"v_min", b.v_min},
                                 {"v_max", b.v_max}, {"v_ref", b.v_ref}});
    root["branches"] = json::array();
    for (const auto& br : c.branches) {
        json j = {{"from", br.from}, {"to", br.to}, {"r", br.r}, {"x", br.x}, {"b_charging", br.b_charging},
                  {"ratio", br.ratio}, {"s_max", br.s_max}};
        if (br.tap)
            j["tap"] = {{"ratio_min", br.tap->ratio_min}, {"ratio_max", br.tap->ratio_max}, {"step", br.tap->step}};
        root["branches"].push_back(j);
    }
    root["generators"] = json::array();
    for (const auto& g : c.generators)
        root["generators"].push_back({{"bus", g.bus}, {"p", g.p}, {"v_set", g.v_set}, {"p_min", g.p_min},
                                      {"p_max", g.p_max}, {"q_min", g.q_min}, {"q_max", g.q_max},
                                      {"cost_a", g.cost_a}, {"cost_b", g.cost_b}, {"cost_c", g.cost_c},
                                      {"controllable", g.controllable}});
    root["shunts"] = json::array();
    for (const auto& s : c.shunts)
        root["shunts"].push_back(
            {{"bus", s.bus}, {"q", s.q}, {"q_min", s.q_min}, {"q_max", s.q_max}, {"step", s.step}});
    root["dc_buses"] = json::array();
    for (const auto& b : c.dc_buses) {
        json j = {{"id", b.id}, {"u_min", b.u_min}, {"u_max", b.u_max}, {"u_ref", b.u_ref}};
        if (b.i_max) j["i_max"] = *b.i_max;
        root["dc_buses"].push_back(j);
    }
    root["dc_branches"] = json::array();
    for (const auto& b : c.dc_branches)
        root["dc_branches"].push_back({{"from", b.from}, {"to", b.to}, {"r", b.r}, {"i_max", b.i_max}});
    root["converters"] = json::array();
    for (const auto& v : c.converters)
        root["converters"].push_back(
            {{"ac_bus", v.ac_bus}, {"dc_bus", v.dc_bus}, {"r_xfmr", v.r_xfmr}, {"x_xfmr", v.x_xfmr},
             {"b_filter", v.b_filter}, {"loss_a", v.loss_a}, {"loss_b", v.loss_b}, {"loss_c", v.loss_c},
             {"mode", mode_json(v.mode)}, {"p_s_min", v.p_s_min}, {"p_s_max", v.p_s_max}, {"q_s_min", v.q_s_min},
             {"q_s_max", v.q_s_max},
             {"pq_circle",
              {{"p0", v.pq_circle.p0}, {"q0", v.pq_circle.q0}, {"r_min", v.pq_circle.r_min},
               {"r_max", v.pq_circle.r_max}}},
             {"p_s", v.p_s}, {"q_s", v.q_s}});
    return root;
}

}  // namespace

int TapChanger::step_count() const { return grid_steps(ratio_min, ratio_max, step); }
int ShuntCapacitorBank::step_count() const { return grid_steps(q_min, q_max, step); }

bool holds_dc_voltage(const ControlMode& m) {
    return std::holds_alternative<mode::ConstUdcConstQs>(m) || std::holds_alternative<mode::ConstUdcConstUs>(m);
}
bool holds_ac_voltage(const ControlMode& m) {
    return std::holds_alternative<mode::ConstUdcConstUs>(m) || std::holds_alternative<mode::ConstPsConstUs>(m);
}
bool is_droop(const ControlMode& m) { return std::holds_alternative<mode::Droop>(m); }

std::string mode_name(const ControlMode& m) { return mode_json(m)["type"].get<std::string>(); }

std::optional<std::size_t> CaseData::find_bus(int id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id) return i;
    return std::nullopt;
}

std::optional<std::size_t> CaseData::find_dc_bus(int id) const {
    for (std::size_t i = 0; i < dc_buses.size(); ++i)
        if (dc_buses[i].id == id) return i;
    return std::nullopt;
}

std::size_t CaseData::bus_index(int id) const {
    if (auto i = find_bus(id)) return *i;
    throw std::out_of_range("unknown AC bus " + std::to_string(id));
}

std::size_t CaseData::dc_bus_index(int id) const {
    if (auto i = find_dc_bus(id)) return *i;
    throw std::out_of_range("unknown DC bus " + std::to_string(id));
}

std::vector<std::size_t> CaseData::tap_branches() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < branches.size(); ++i)
        if (branches[i].tap) out.push_back(i);
    return out;
}

std::size_t CaseData::slack_bus() const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].kind == BusKind::Slack) return i;
    throw std::logic_error("case has no slack bus");
}

CaseData parse_case(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    try {
        return from_json(root);
    } catch (const json::exception& e) {
        throw SchemaError(e.what());
    }
}

CaseData load_case(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("file not found: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_case(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

std::string serialize_case(const CaseData& c) { return to_json(c).dump(1); }

std::filesystem::path resolve_case_path(const std::string& name) {
    namespace fs = std::filesystem;
    fs::path p(name);
    if (fs::exists(p)) return p;
    const fs::path data(ACDC_DATA_DIR);
    for (const auto& candidate : {data / p, data / (name + ".json"), data / p.filename()})
        if (fs::exists(candidate)) return candidate;
    return p;
}

std::vector<Violation> validate_case(const CaseData& c) {
    std::vector<Violation> out;
    auto flag = [&](std::string entity, std::string msg) { out.push_back({std::move(entity), std::move(msg)}); };

    if (!(c.s_base > 0.0)) flag("case", "s_base must be positive");

    std::set<int> ids;
    for (std::size_t i = 0; i < c.buses.size(); ++i) {
        const auto& b = c.buses[i];
        const auto e = "bus " + std::to_string(b.id);
        if (!ids.insert(b.id).second) flag(e, "duplicate bus id");
        if (!(b.v_min < b.v_max)) flag(e, "v_min must be below v_max");
        if (b.v_ref < b.v_min || b.v_ref > b.v_max) flag(e, "v_ref outside [v_min, v_max]");
    }
    if (c.buses.empty()) flag("case", "no AC buses");

    for (std::size_t i = 0; i < c.branches.size(); ++i) {
        const auto& br = c.branches[i];
        const auto e = "branch " + std::to_string(br.from) + "-" + std::to_string(br.to);
        if (!c.find_bus(br.from) || !c.find_bus(br.to)) flag(e, "dangling bus reference");
        if (br.from == br.to) flag(e, "branch connects a bus to itself");
        if (br.r < 0.0) flag(e, "negative resistance");
        if (br.x == 0.0) flag(e, "zero reactance");
        if (!(br.s_max > 0.0)) flag(e, "s_max must be positive");
        if (!(br.ratio > 0.0)) flag(e, "ratio must be positive");
        if (br.tap) {
            if (!(br.tap->ratio_min < br.tap->ratio_max)) flag(e, "tap ratio_min must be below ratio_max");
            else if (br.tap->step_count() < 1) flag(e, "step does not divide range");
        }
    }

    for (std::size_t i = 0; i < c.generators.size(); ++i) {
        const auto& g = c.generators[i];
        const auto e = "generator " + std::to_string(i) + " (bus " + std::to_string(g.bus) + ")";
        if (!c.find_bus(g.bus)) flag(e, "dangling bus reference");
        if (g.p_min > g.p_max) flag(e, "p_min exceeds p_max");
        if (g.q_min > g.q_max) flag(e, "q_min exceeds q_max");
        if (g.cost_a < 0.0) flag(e, "negative quadratic cost coefficient");
    }

    for (std::size_t i = 0; i < c.shunts.size(); ++i) {
        const auto& s = c.shunts[i];
        const auto e = "shunt " + std::to_string(i) + " (bus " + std::to_string(s.bus) + ")";
        if (!c.find_bus(s.bus)) flag(e, "dangling bus reference");
        if (s.q_min > s.q_max) flag(e, "q_min exceeds q_max");
        else if (s.step_count() < 1) flag(e, "step does not divide range");
    }

    // One slack per AC island.
    {
        std::map<int, std::size_t> pos;
        for (std::size_t i = 0; i < c.buses.size(); ++i) pos[c.buses[i].id] = i;
        std::vector<std::size_t> parent(c.buses.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& br : c.branches) {
            auto a = pos.find(br.from), b = pos.find(br.to);
            if (a != pos.end() && b != pos.end()) parent[find(a->second)] = find(b->second);
        }
        std::map<std::size_t, int> slacks;
        for (std::size_t i = 0; i < c.buses.size(); ++i) {
            auto& n = slacks[find(i)];
            if (c.buses[i].kind == BusKind::Slack) ++n;
        }
        for (const auto& [root, n] : slacks) {
            if (n != 1)
                flag("AC island of bus " + std::to_string(c.buses[root].id),
                     n == 0 ? "no slack bus" : "more than one slack bus");
        }
    }

    std::set<int> dc_ids;
    for (const auto& b : c.dc_buses) {
        const auto e = "dc bus " + std::to_string(b.id);
        if (!dc_ids.insert(b.id).second) flag(e, "duplicate DC bus id");
        if (!(b.u_min < b.u_max)) flag(e, "u_min must be below u_max");
        if (b.u_ref < b.u_min || b.u_ref > b.u_max) flag(e, "u_ref outside [u_min, u_max]");
    }
    for (const auto& br : c.dc_branches) {
        const auto e = "dc branch " + std::to_string(br.from) + "-" + std::to_string(br.to);
        if (!c.find_dc_bus(br.from) || !c.find_dc_bus(br.to)) flag(e, "dangling DC bus reference");
        if (!(br.r > 0.0)) flag(e, "resistance must be positive");
        if (!(br.i_max > 0.0)) flag(e, "i_max must be positive");
    }

    std::map<int, int> dc_cover;
    std::set<int> conv_ac_buses;
    int udc_holders = 0, droops = 0;
    for (std::size_t i = 0; i < c.converters.size(); ++i) {
        const auto& v = c.converters[i];
        const auto e = "converter " + std::to_string(i) + " (bus " + std::to_string(v.ac_bus) + ")";
        if (!c.find_bus(v.ac_bus)) flag(e, "dangling AC bus reference");
        if (!c.find_dc_bus(v.dc_bus)) flag(e, "dangling DC bus reference");
        ++dc_cover[v.dc_bus];
        if (!conv_ac_buses.insert(v.ac_bus).second) flag(e, "two converters share one AC bus");
        if (v.x_xfmr == 0.0) flag(e, "zero coupling reactance");
        if (v.r_xfmr < 0.0) flag(e, "negative coupling resistance");
        if (!(v.pq_circle.r_max > v.pq_circle.r_min && v.pq_circle.r_min >= 0.0))
            flag(e, "P-Q circle needs r_max > r_min >= 0");
        if (v.p_s_min > v.p_s_max) flag(e, "p_s_min exceeds p_s_max");
        if (v.q_s_min > v.q_s_max) flag(e, "q_s_min exceeds q_s_max");
        if (holds_dc_voltage(v.mode)) ++udc_holders;
        if (const auto* d = std::get_if<mode::Droop>(&v.mode)) {
            ++droops;
            if (!(d->slope > 0.0)) flag(e, "droop slope must be positive");
        }
        if (holds_ac_voltage(v.mode)) {
            if (auto bi = c.find_bus(v.ac_bus); bi && c.buses[*bi].kind != BusKind::PQ)
                flag(e, "AC voltage control on a bus that already regulates voltage");
        }
    }
    for (const auto& b : c.dc_buses) {
        const int n = dc_cover.count(b.id) ? dc_cover[b.id] : 0;
        if (n != 1) flag("dc bus " + std::to_string(b.id), "must host exactly one converter");
    }
    if (!c.converters.empty()) {
        if (droops == 0 && udc_holders == 0) flag("dc grid", "no DC slack");
        if (droops == 0 && udc_holders > 1) flag("dc grid", "more than one constant-Udc converter");
    }

    // DC grid connectivity.
    if (!c.dc_buses.empty()) {
        std::map<int, std::set<int>> adj;
        for (const auto& br : c.dc_branches) {
            adj[br.from].insert(br.to);
            adj[br.to].insert(br.from);
        }
        std::set<int> seen{c.dc_buses.front().id};
        std::vector<int> stack{c.dc_buses.front().id};
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int w : adj[u])
                if (seen.insert(w).second) stack.push_back(w);
        }
        if (seen.size() != c.dc_buses.size()) flag("dc grid", "DC grid is not connected");
    }
    return out;
}

}  // namespace acdc
