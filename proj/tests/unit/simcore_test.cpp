#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gridform/simcore/device.hpp"
#include "gridform/simcore/dq.hpp"
#include "gridform/simcore/errors.hpp"
#include "gridform/simcore/events.hpp"
#include "gridform/simcore/per_unit.hpp"
#include "gridform/simcore/time_series.hpp"

using namespace gridform;
using namespace gridform::simcore;

TEST_CASE("dq transform round trip and power invariance") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0), ang(0.0, 2 * std::numbers::pi);
  for (int k = 0; k < 1000; ++k) {
    const FrameAngle frame(ang(rng), 1.0);
    const DqPair v{u(rng), u(rng)}, i{u(rng), u(rng)};
    const auto va = dq_to_abc(v, frame), ia = dq_to_abc(i, frame);
    const auto back = abc_to_dq(va, frame);
    REQUIRE(back.q == doctest::Approx(v.q));
    REQUIRE(back.d == doctest::Approx(v.d));
    // amplitude-invariant: three-phase power is 3/2 of the dq product
    REQUIRE(instantaneous_power(va, ia) == doctest::Approx(1.5 * active_power(v, i)));
  }
}

TEST_CASE("phasor convention q - jd") {
  const DqPair x{0.8, 0.3};
  CHECK(x.phasor() == Phasor(0.8, -0.3));
  CHECK(DqPair::from_phasor(x.phasor()) == x);
  const DqPair v{1.0, 0.0}, i{0.5, 0.2};
  const Phasor s = v.phasor() * std::conj(i.phasor());
  CHECK(active_power(v, i) == doctest::Approx(s.real()));
  CHECK(reactive_power(v, i) == doctest::Approx(s.imag()));
}

TEST_CASE("angle wrapping") {
  CHECK(wrap_angle(-0.1) == doctest::Approx(2 * std::numbers::pi - 0.1));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - 2 * std::numbers::pi));
  const FrameAngle f(0.0, 1.01);
  CHECK(f.advanced(0.01, 100.0).theta() == doctest::Approx(1.01));
}

TEST_CASE("events keep declaration order at equal times") {
  std::vector<SimEvent> ev{{2.0, OpenBreaker{"b"}}, {1.0, OpenBreaker{"a"}}, {2.0, CloseBreaker{"c"}}};
  order_events(ev);
  CHECK(std::get<OpenBreaker>(ev[0].action).line == "a");
  CHECK(std::get<OpenBreaker>(ev[1].action).line == "b");
  CHECK(std::get<CloseBreaker>(ev[2].action).line == "c");

  EventQueue q(ev);
  const double dt = 1e-4;
  CHECK(q.due(0.9999, dt).empty());
  CHECK(q.due(1.0, dt).size() == 1);
  CHECK(q.due(1.0001, dt).empty());
  CHECK(q.due(2.0, dt).size() == 2);
  CHECK(q.empty());
}

TEST_CASE("reference ramp") {
  Ramp r(0.2);
  CHECK(r.at(5.0) == 0.2);
  r.retarget(1.0, 1.2, 2.0);
  CHECK(r.at(1.0) == doctest::Approx(0.2));
  CHECK(r.at(2.0) == doctest::Approx(0.7));
  CHECK(r.at(9.0) == doctest::Approx(1.2));
  r.retarget(4.0, 0.0, 0.0);
  CHECK(r.at(4.0) == doctest::Approx(0.0));
}

TEST_CASE("time series CSV round trip is exact after quantization") {
  TimeSeries ts(1e-3, "x");
  ts.add_channel("b");
  ts.add_channel("a");
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  for (int k = 0; k < 50; ++k) ts.append(std::vector<double>{n(rng), n(rng) * 1e-7});
  std::stringstream ss;
  ts.write_csv(ss);
  const auto back = TimeSeries::read_csv(ss, "x");
  const auto q = ts.quantized();
  REQUIRE(back.size() == 50);
  CHECK(back.channel_names() == ts.channel_names());
  for (const auto& c : ts.channel_names()) CHECK(back.channel(c) == q.channel(c));
  std::stringstream again;
  back.write_csv(again);
  std::stringstream first;
  ts.write_csv(first);
  CHECK(again.str() == first.str());
  CHECK(quantize6(1.23456789) == 1.23457);
}

TEST_CASE("per-unit base") {
  const PerUnitBase b{100e6, 230e3, 50.0};
  CHECK(b.z_base() == doctest::Approx(529.0));
  CHECK(b.i_base() == doctest::Approx(100e6 / (std::sqrt(3.0) * 230e3)));
  CHECK(b.omega_base() == doctest::Approx(100 * std::numbers::pi));
  CHECK_THROWS_AS(PerUnitBase(0.0, 1.0, 50.0), Error);
}
