#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>

#include "mvlab/errors.hpp"
#include "mvlab/suites.hpp"
#include "mvlab/sweep.hpp"

using namespace mvlab;

TEST_CASE("config text and overrides") {
    const auto kv = parse_config_text("# comment\nsuite = mcf\n\nrmin=0.2 # trailing\njobs = 3\n");
    CHECK(kv.at("suite") == "mcf");
    CHECK(kv.at("rmin") == "0.2");
    Config c;
    for (const auto& [k, v] : kv) apply_setting(c, k, v);
    CHECK(c.suite == "mcf");
    CHECK(*c.rmin == 0.2);
    CHECK(c.jobs == 3);
    apply_setting(c, "tol_scale", "2");
    CHECK(c.tol_scale == 2.0);
    CHECK_THROWS_AS(apply_setting(c, "bogus", "1"), UsageError);
    CHECK_THROWS_AS(apply_setting(c, "jobs", "0"), UsageError);
    CHECK_THROWS_AS(apply_setting(c, "rmax", "abc"), UsageError);
    CHECK_THROWS_AS(apply_setting(c, "format", "xml"), UsageError);
    CHECK_THROWS_AS(parse_config_text("no equals sign"), UsageError);
    for (const auto& k : config_keys()) CHECK_NOTHROW(parse_config_text(k + " = x"));
}

TEST_CASE("report JSON round trip") {
    SuiteReport r;
    r.suite = "demo";
    r.wall_ms = 12.5;
    r.checks.push_back({"a", 1.0, 1.0, 1e-6, true, 0.0});
    r.checks.push_back({"b", 0.25, std::string("<= 0"), 1e-6, false, 1e-9});
    r.pass = false;
    CHECK(report_from_json(to_json(r)) == r);
    r.checks[0].value = std::numeric_limits<double>::quiet_NaN();
    CHECK(std::isnan(report_from_json(to_json(r)).checks[0].value));
    CHECK_THROWS_AS(report_from_json("{\"suite\": 1}"), UsageError);
}

TEST_CASE("geometry names") {
    CHECK(parse_geometry("hyperbolic3", std::nullopt).dimension() == 3);
    CHECK(parse_geometry("shrinking-s", 2).kind() == GeometryKind::shrinking_sphere);
    CHECK(parse_geometry("gaussian-soliton4", 4).dimension() == 4);
    CHECK_THROWS_AS(parse_geometry("euclidean3", 2), UsageError);
    CHECK_THROWS_AS(parse_geometry("torus", std::nullopt), UsageError);
}

TEST_CASE("sweep reports") {
    const SweepReport up = make_sweep_report("q", {0, 1, 2}, {1.0, 2.0, 1.5}, {0, 0, 0}, Direction::non_decreasing, 0.1);
    CHECK_FALSE(up.monotone);
    CHECK(up.row_ok(1));
    CHECK_FALSE(up.row_ok(2));
    CHECK(up.worst_violation == doctest::Approx(0.5));
    const SweepReport c = make_sweep_report("q", {0, 1}, {1.0, 1.05}, {0.01, 0.01}, Direction::constant, 0.0);
    CHECK_FALSE(c.monotone);
    CHECK_THROWS_AS(make_sweep_report("q", {1, 0}, {0, 0}, {0, 0}, Direction::none, 0.0), RangeError);
    CHECK(linear_grid(0.5, 1.5, 3) == std::vector<double>{0.5, 1.0, 1.5});
    CHECK_THROWS_AS(linear_grid(1.0, 0.5, 3), UsageError);
}

TEST_CASE("sweep CSV format") {
    Config c;
    c.quantity = "jbar";
    c.rmin = 0.5;
    c.rmax = 1.0;
    c.steps = 2;
    const std::string csv = sweep_csv(run_sweep(c));
    CHECK(csv.rfind("parameter,value,error_estimate,monotone_ok\n", 0) == 0);
    CHECK(csv.find("0.5,1.5203469010662") != std::string::npos);
    c.quantity = "nothing";
    CHECK_THROWS_AS(run_sweep(c), UsageError);
    c.quantity = "I";
    c.kernel = "heat";
    CHECK_THROWS_AS(run_sweep(c), UsageError);
}

TEST_CASE("parallel_for") {
    std::vector<int> v(100, 0);
    parallel_for(v.size(), 4, [&](std::size_t i) { v[i] = static_cast<int>(i); });
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i));
    CHECK_THROWS_WITH(parallel_for(10, 3,
                                   [](std::size_t i) {
                                       if (i == 7) throw RangeError("seven");
                                       if (i == 4) throw RangeError("four");
                                   }),
                      "four");
}

TEST_CASE("suites are deterministic without timing") {
    Config c;
    c.timing = false;
    const SuiteReport a = run_suite("mcf", c);
    c.jobs = 3;
    const SuiteReport b = run_suite("mcf", c);
    CHECK(a.pass);
    CHECK(a == b);
    CHECK(a.wall_ms == 0.0);
    CHECK_THROWS_AS(run_suite("nope", c), UsageError);
    c.geometry = "euclidean3";
    CHECK_THROWS_AS(run_suite("ricci", c), UsageError);
}
