#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "acdc/reports.hpp"
#include "support.hpp"

using namespace acdc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
    const auto dir = fs::temp_directory_path() / "acdc_report_tests";
    fs::create_directories(dir);
    return dir / name;
}

ParetoTable small_table() {
    ParetoTable t;
    t.control_names = {"pg.2", "tap.4-7"};
    t.controls = {{0.3712345678901, 0.975}, {0.41, 1.0}};
    ObjectivePoint a{8190.123456789, 0.0123456789, 0.0, true};
    ObjectivePoint b{8210.5, 0.005, 0.25, false};
    t.objectives = {a, b};
    return t;
}

}  // namespace

TEST_CASE("pareto csv round trip") {
    const auto t = small_table();
    const auto path = scratch("pareto.csv");
    write_pareto_csv(path, t);
    const auto back = read_pareto_csv(path);
    CHECK(back.control_names == t.control_names);
    REQUIRE(back.objectives.size() == 2);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t k = 0; k < 2; ++k) CHECK(back.controls[r][k] == doctest::Approx(t.controls[r][k]).epsilon(1e-11));
        CHECK(back.objectives[r].f_cost == doctest::Approx(t.objectives[r].f_cost).epsilon(1e-11));
        CHECK(back.objectives[r].v_dev == doctest::Approx(t.objectives[r].v_dev).epsilon(1e-11));
        CHECK(back.objectives[r].feasible == t.objectives[r].feasible);
    }
}

TEST_CASE("malformed pareto csv") {
    const auto path = scratch("bad.csv");
    {
        std::ofstream(path) << "pg.2,f_cost_usd_per_h,v_dev_pu2\n1,2,3\n";
    }
    CHECK_THROWS_AS(read_pareto_csv(path), std::runtime_error);
    {
        std::ofstream(path) << "pg.2,f_cost_usd_per_h,v_dev_pu2,violation\n1,2,x,0\n";
    }
    CHECK_THROWS_AS(read_pareto_csv(path), std::runtime_error);
    {
        std::ofstream(path) << "pg.2,f_cost_usd_per_h,v_dev_pu2,violation\n1,2,3\n";
    }
    CHECK_THROWS_AS(read_pareto_csv(path), std::runtime_error);
    CHECK_THROWS_AS(read_pareto_csv(scratch("nope.csv")), std::runtime_error);
}

TEST_CASE("json outputs re-parse") {
    const auto t = small_table();
    const auto j = pareto_to_json(t);
    const auto path = scratch("pareto.json");
    write_json(path, j);
    std::ifstream in(path);
    const auto back = Json::parse(in);
    REQUIRE(back["solutions"].size() == 2);
    CHECK(back["solutions"][0]["controls"]["tap.4-7"].get<double>() == 0.975);
    CHECK(back["solutions"][1]["feasible"].get<bool>() == false);

    const auto c = testing::shipped("case14_2t");
    const auto st = solve_acdc(c, base_controls(c));
    const auto sj = state_to_json(st, c, true);
    const auto reparsed = Json::parse(sj.dump());
    CHECK(reparsed["converged"].get<bool>());
    CHECK(reparsed["ac"]["buses"].size() == c.buses.size());
    CHECK(reparsed["converters"].size() == c.converters.size());
    CHECK(reparsed["objectives"]["f_cost_usd_per_h"].get<double>() == doctest::Approx(evaluate(st, c, true).f_cost));

    const auto rep = select_compromise(std::vector<Obj2>{{8170, 0.02}, {8200, 0.005}}, 2, {0.5, 0.5}, 1);
    const auto dj = Json::parse(decision_to_json(rep, t).dump());
    CHECK(dj["clusters"].size() == 2);
    CHECK(dj["clusters"][0]["compromise"]["controls"].contains("pg.2"));
}
