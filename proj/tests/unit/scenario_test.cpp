#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "gridform/scenario/builder.hpp"
#include "gridform/scenario/cases.hpp"
#include "gridform/scenario/metrics.hpp"
#include "gridform/scenario/scenario.hpp"
#include "gridform/simcore/errors.hpp"

using namespace gridform;
using namespace gridform::scenario;
using nlohmann::json;

TEST_CASE("every bundled scenario survives parse and serialize") {
  REQUIRE(embedded_scenarios().size() == 8);
  for (const auto& [name, text] : embedded_scenarios()) {
    CAPTURE(name);
    const auto spec = parse_scenario(text);
    CHECK(validate(spec).empty());
    const auto again = parse_scenario(serialize(spec));
    CHECK(again == spec);
    CHECK(serialize(again) == serialize(spec));
  }
}

TEST_CASE("validation reports every problem at once") {
  // structural problems are collected in one pass
  auto j = json::parse(embedded_scenarios().at("case1a"));
  j["devices"][2]["type"] = "teleporter";
  j["devices"][1]["colour"] = "blue";
  j["dt"] = "small";
  try {
    parse_scenario(j.dump());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.problems().size() == 3);
    CHECK(std::string(e.what()).find("teleporter") != std::string::npos);
  }

  // so are semantic ones once the structure is sound
  j = json::parse(embedded_scenarios().at("case1a"));
  j["duration"] = -1.0;
  j["topology"]["lines"][0]["to"] = "NOWHERE";
  j["devices"].push_back(j["devices"][1]);
  try {
    parse_scenario(j.dump());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.problems().size() >= 3);
    CHECK(std::string(e.what()).find("NOWHERE") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario("{not json"), ValidationError);
}

TEST_CASE("ROCOF metric on a known ramp") {
  const double dt = 1e-3;
  std::vector<double> f(2000, 50.0);
  // 2 Hz/s between 0.5 s and 1.0 s
  for (std::size_t k = 500; k < f.size(); ++k) f[k] = 50.0 - 2.0 * std::min(0.5, (k - 500.0) * dt);
  CHECK(max_rocof(f, dt) == doctest::Approx(2.0).epsilon(1e-9));
  const std::vector<double> flat(100, 50.0);
  CHECK(max_rocof(flat, dt) == 0.0);
}

TEST_CASE("settling time") {
  const double dt = 1e-3;
  std::vector<double> x(3000, 1.0);
  for (std::size_t k = 0; k < 1200; ++k) x[k] = 0.0;
  CHECK(settling_time(x, dt, 0.01) == doctest::Approx(1.2).epsilon(1e-3));
  CHECK(settling_time(std::vector<double>(100, 2.0), dt, 0.01) == 0.0);
}

TEST_CASE("runs are deterministic to the byte") {
  auto spec = case_spec("case1c");
  spec.duration = 0.3;
  spec.events.clear();
  const auto a = execute(spec);
  const auto b = execute(spec);
  std::ostringstream sa, sb;
  a.series.write_csv(sa);
  b.series.write_csv(sb);
  CHECK(sa.str() == sb.str());
  CHECK(a.series.size() == 301);
}

TEST_CASE("engine power balance and settled state") {
  for (const char* name : {"case1c", "case3e"}) {
    CAPTURE(name);
    auto spec = case_spec(name);
    auto built = build(spec);
    auto& sim = *built.sim;
    sim.settle(spec.settle > 0 ? spec.settle : 0.5);
    const auto bal = sim.power_balance();
    CHECK(std::abs(bal.injected - bal.losses) < 1e-9 * std::max(1.0, std::abs(bal.injected)) + 1e-9);
    CHECK(sim.solution().kcl_residual < 1e-8);
    // settled: no state moves noticeably
    double worst = 0.0;
    for (double d : sim.derivative()) worst = std::max(worst, std::abs(d));
    CHECK(worst < 1.0);
  }
}

TEST_CASE("unknown case and unknown device references") {
  CHECK_THROWS(case_spec("case9"));
  auto j = json::parse(embedded_scenarios().at("case1a"));
  j["events"][0]["device"] = "ghost";
  CHECK_THROWS_AS(parse_scenario(j.dump()), ValidationError);
}
