#include <doctest.h>

#include <fstream>
#include <sstream>

#include "acdc/case_model.hpp"
#include "support.hpp"

using namespace acdc;
using testing::shipped;

namespace {

const char* kAll[] = {"case14_ac",  "case14_2t",           "case14_2t_swapped",   "case14_3t",
                      "case14_3t_droop", "case14_3t_vsc1_slack", "case14_3t_vsc2_slack", "case118_ac",
                      "case118_2t", "case118_3t",          "case118_3t_droop"};

bool has_message(const std::vector<Violation>& v, const std::string& msg) {
    for (const auto& e : v)
        if (e.message == msg) return true;
    return false;
}

std::string read_file(const std::string& name) {
    std::ifstream in(resolve_case_path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("case14_2t loads with two converters on buses 4 and 5") {
    const auto c = shipped("case14_2t");
    CHECK(c.buses.size() == 14);
    REQUIRE(c.converters.size() == 2);
    std::vector<int> at;
    for (const auto& v : c.converters) {
        at.push_back(v.ac_bus);
        CHECK(v.r_xfmr == 0.0015);
        CHECK(v.x_xfmr == 0.1121);
    }
    std::sort(at.begin(), at.end());
    CHECK(at == std::vector<int>{4, 5});
}

TEST_CASE("2-terminal converter set-points") {
    const auto c = shipped("case14_2t");
    for (const auto& v : c.converters) {
        if (v.ac_bus == 4) {
            CHECK(v.p_s == -0.492);
            CHECK(v.q_s == 0.116);
        } else {
            CHECK(v.p_s == 0.495);
            CHECK(v.q_s == -0.105);
            const auto* m = std::get_if<mode::ConstUdcConstQs>(&v.mode);
            REQUIRE(m);
            CHECK(m->u_dc == 1.0);
        }
    }
}

TEST_CASE("3-terminal converters on buses 2, 4, 5 with x = 0.150") {
    const auto c = shipped("case14_3t");
    REQUIRE(c.converters.size() == 3);
    const double ps[] = {0.877, -0.983, 0.118};
    const double qs[] = {0.001, 0.124, -0.135};
    const int bus[] = {2, 4, 5};
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(c.converters[k].ac_bus == bus[k]);
        CHECK(c.converters[k].x_xfmr == 0.150);
        CHECK(c.converters[k].r_xfmr == 0.0015);
        CHECK(c.converters[k].p_s == ps[k]);
        CHECK(c.converters[k].q_s == qs[k]);
    }
}

TEST_CASE("every shipped case validates clean") {
    for (const char* name : kAll) {
        CAPTURE(name);
        const auto c = shipped(name);
        const auto v = validate_case(c);
        for (const auto& e : v) MESSAGE(e.entity << ": " << e.message);
        CHECK(v.empty());
    }
}

TEST_CASE("round trip through serialize") {
    for (const char* name : kAll) {
        CAPTURE(name);
        const auto c = shipped(name);
        CHECK(parse_case(serialize_case(c)) == c);
    }
}

TEST_CASE("dangling converter bus is a schema error") {
    auto text = read_file("case14_2t");
    const auto pos = text.find("\"ac_bus\": 5");
    // 14-bus case, so 99 does not exist
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 11, "\"ac_bus\": 99");
    CHECK_THROWS_AS(parse_case(text), SchemaError);
}

TEST_CASE("malformed json is a parse error") {
    CHECK_THROWS_AS(parse_case("{\"name\": "), ParseError);
    CHECK_THROWS_AS(load_case("/nonexistent/case.json"), ParseError);
}

TEST_CASE("missing field is a schema error") {
    auto text = read_file("case14_2t");
    const auto pos = text.find("\"kind\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 6, "\"kimd\"");
    CHECK_THROWS_AS(parse_case(text), SchemaError);
}

TEST_CASE("no DC slack") {
    auto c = shipped("case14_2t");
    for (auto& v : c.converters) v.mode = mode::ConstPsConstQs{0.1, 0.0};
    CHECK(has_message(validate_case(c), "no DC slack"));
}

TEST_CASE("tap step must divide its range") {
    auto c = shipped("case14_2t");
    for (auto& br : c.branches)
        if (br.tap) {
            br.tap->step = 0.3;
            break;
        }
    CHECK(has_message(validate_case(c), "step does not divide range"));
}

TEST_CASE("validate_case never throws on scrambled cases") {
    testing::Rng rng(7);
    const auto base = shipped("case14_3t");
    for (int trial = 0; trial < 300; ++trial) {
        auto c = base;
        const int edits = rng.pick(1, 6);
        for (int e = 0; e < edits; ++e) {
            switch (rng.pick(0, 8)) {
                case 0: c.buses[rng.pick(0, 13)].id = rng.pick(-3, 20); break;
                case 1: c.branches[rng.pick(0, static_cast<int>(c.branches.size()) - 1)].to = rng.pick(0, 30); break;
                case 2: c.converters[rng.pick(0, 2)].dc_bus = rng.pick(0, 5); break;
                case 3: c.dc_branches.clear(); break;
                case 4: c.buses.clear(); break;
                case 5: c.converters[rng.pick(0, 2)].mode = mode::Droop{rng.uni(-1, 1), 1.0, 0.0, 0.0}; break;
                case 6: c.generators[rng.pick(0, 4)].bus = rng.pick(0, 30); break;
                case 7: c.s_base = rng.uni(-10, 10); break;
                default: if (!c.dc_buses.empty()) c.dc_buses.pop_back(); break;
            }
            if (c.buses.empty()) break;
        }
        CHECK_NOTHROW(validate_case(c));
    }
}
