#include <doctest.h>

#include <complex>

#include "gridform/network/network.hpp"
#include "gridform/simcore/errors.hpp"

using namespace gridform;
using namespace gridform::network;

namespace {

Bus bus(const std::string& id) {
  Bus b;
  b.id = id;
  return b;
}

Network three_bus() {
  Network n;
  n.add_bus(bus("B0"));
  n.add_bus(bus("B1"));
  n.add_bus(bus("B2"));
  n.add_line({"L01", "B0", "B1", 0.01, 0.1});
  n.add_line({"L12", "B1", "B2", 0.02, 0.2, 0.01});
  return n;
}

Structure stiff_source(std::vector<std::size_t> sources = {}) {
  Structure st;
  st.ideal_sources = {0};
  st.source_buses = std::move(sources);
  return st;
}

StageInputs load_at_b2(Phasor s) {
  StageInputs in;
  in.ideal_v = {Phasor(1.0, 0.0)};
  in.powers.push_back({2, s});
  return in;
}

}  // namespace

TEST_CASE("admittance matrix matches hand assembly") {
  const auto n = three_bus();
  const auto y = n.admittance();
  const Phasor y01 = 1.0 / Phasor(0.01, 0.1), y12 = 1.0 / Phasor(0.02, 0.2), half_b(0.0, 0.005);
  CHECK(std::abs(y(0, 0) - y01) < 1e-12);
  CHECK(std::abs(y(1, 1) - (y01 + y12 + half_b)) < 1e-12);
  CHECK(std::abs(y(2, 2) - (y12 + half_b)) < 1e-12);
  CHECK(std::abs(y(0, 1) + y01) < 1e-12);
  CHECK(std::abs(y(1, 2) - y(2, 1)) < 1e-15);
  CHECK(std::abs(y(0, 2)) == 0.0);
}

TEST_CASE("constant-power solution satisfies KCL and conserves power") {
  const auto n = three_bus();
  Solver solver;
  const Phasor s_load(-0.5, -0.1);
  const auto sol = solver.solve(n, stiff_source(), load_at_b2(s_load));
  REQUIRE(sol.v.size() == 3);
  CHECK(sol.kcl_residual < 1e-10);

  // independent KCL: Y v equals the device injections
  const auto y = n.admittance();
  Eigen::VectorXcd v(3);
  for (int k = 0; k < 3; ++k) v(k) = sol.v[static_cast<std::size_t>(k)];
  const Eigen::VectorXcd i = y * v;
  CHECK(std::abs(i(0) - sol.ideal_current.at(0)) < 1e-9);
  CHECK(std::abs(i(1)) < 1e-9);
  CHECK(std::abs(i(2) - sol.power_current.at(0)) < 1e-9);

  // the load draws exactly its setpoint
  CHECK(std::abs(sol.v[2] * std::conj(sol.power_current[0]) - s_load) < 1e-9);

  // the source covers load plus series losses
  double losses = 0.0;
  for (const auto& l : n.lines()) {
    const auto a = n.bus_index(l.from), b = n.bus_index(l.to);
    const Phasor il = (sol.v[a] - sol.v[b]) / Phasor(l.r, l.x);
    losses += std::norm(il) * l.r;
  }
  const double p_src = (sol.v[0] * std::conj(sol.ideal_current[0])).real();
  CHECK(p_src == doctest::Approx(0.5 + losses).epsilon(1e-9));
}

TEST_CASE("Norton source against the two-bus divider") {
  Network n;
  n.add_bus(bus("A"));
  n.add_bus(bus("B"));
  n.add_line({"L", "A", "B", 0.0, 0.1});
  Structure st;
  st.nortons.push_back({0, Phasor(0.0, 0.1)});
  st.shunts.push_back({1, Phasor(0.5, 0.0)});
  StageInputs in;
  in.norton_emf = {Phasor(1.0, 0.0)};
  Solver solver;
  const auto sol = solver.solve(n, st, in);
  const Phasor z_load = 2.0, z_series(0.0, 0.2);
  const Phasor v_b = z_load / (z_load + z_series);
  CHECK(std::abs(sol.v[1] - v_b) < 1e-12);
  CHECK(std::abs(sol.norton_current[0] - 1.0 / (z_load + z_series)) < 1e-12);
}

TEST_CASE("Newton fallback reaches the same solution") {
  const auto n = three_bus();
  const auto in = load_at_b2(Phasor(-0.9, -0.3));
  Solver fixed_point;
  const auto a = fixed_point.solve(n, stiff_source(), in);
  Solver newton;
  newton.max_iterations = 1;
  const auto b = newton.solve(n, stiff_source(), in);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(a.v[k] - b.v[k]) < 1e-9);
  CHECK(b.kcl_residual < 1e-9);
}

TEST_CASE("breaker open then close restores the network") {
  auto n = three_bus();
  const auto y0 = n.admittance();
  const auto v0 = n.version();
  n.open_breaker("L12");
  CHECK_FALSE(n.line("L12").closed);
  CHECK(n.version() != v0);
  CHECK(std::abs(n.admittance()(1, 2)) == 0.0);
  n.close_breaker("L12");
  CHECK(n.admittance() == y0);
  CHECK_THROWS_AS(n.open_breaker("nope"), UnknownId);
}

TEST_CASE("fault application and clearing") {
  auto n = three_bus();
  const auto y0 = n.admittance();
  Solver solver;
  const auto in = load_at_b2(Phasor(-0.3, 0.0));
  const auto pre = solver.solve(n, stiff_source(), in);
  n.apply_fault("B1", Phasor(0.0, 0.05));
  const auto during = solver.solve(n, stiff_source(), in);
  CHECK(std::abs(during.v[1]) < 0.5 * std::abs(pre.v[1]));
  n.clear_fault("B1");
  CHECK(n.admittance() == y0);
  const auto post = solver.solve(n, stiff_source(), in);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(post.v[k] - pre.v[k]) < 1e-12);
  CHECK_THROWS_AS(n.apply_fault("B1", Phasor(-1.0, 0.0)), Error);
}

TEST_CASE("island detection") {
  auto n = three_bus();
  n.open_breaker("L12");
  const auto islands = n.detect_islands({true, false, false}, {false, false, true});
  REQUIRE(islands.size() == 2);
  int orphan = 0;
  for (const auto& isl : islands)
    if (isl.energized && !isl.has_forming) ++orphan;
  CHECK(orphan == 1);

  Solver solver;
  CHECK_THROWS_AS(solver.solve(n, stiff_source({2}), load_at_b2(Phasor(-0.1, 0.0))), IslandWithoutFormingSource);
  // a dead island is simply de-energized
  const auto sol = solver.solve(n, stiff_source(), load_at_b2(Phasor(-0.1, 0.0)));
  CHECK(sol.v[2] == Phasor(0.0, 0.0));
}

TEST_CASE("power element degrades to constant impedance at low voltage") {
  const PowerElement e{0, Phasor(-1.0, 0.0), 0.7, 0.0};
  const auto i_hi = power_element_current(e, 1.0);
  CHECK(std::abs(i_hi - Phasor(-1.0, 0.0)) < 1e-15);
  const auto i_lo = power_element_current(e, 0.35);
  // half the threshold voltage: a quarter of the power
  CHECK((Phasor(0.35) * std::conj(i_lo)).real() == doctest::Approx(-0.25));
  const PowerElement capped{0, Phasor(-1.0, 0.0), 0.3, 1.2};
  CHECK(std::abs(power_element_current(capped, 0.5)) == doctest::Approx(1.2));
}

TEST_CASE("invalid topology") {
  Network n;
  n.add_bus(bus("A"));
  CHECK_THROWS_AS(n.add_bus(bus("A")), Error);
  CHECK_THROWS_AS(n.add_line({"L", "A", "Z", 0.0, 0.1}), UnknownId);
  n.add_bus(bus("B"));
  CHECK_THROWS_AS(n.add_line({"L", "A", "B", 0.0, 0.0}), Error);
}
