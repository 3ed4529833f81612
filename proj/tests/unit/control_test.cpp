#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gridform/control/cascade.hpp"
#include "gridform/control/dc_side.hpp"
#include "gridform/control/droop.hpp"
#include "gridform/devices/pll.hpp"
#include "gridform/simcore/errors.hpp"

using namespace gridform;
using namespace gridform::control;

namespace {
bool close_rel(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace

TEST_CASE("cascade gains follow the filter-impedance tuning") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lf(1e-5, 1e-3), rf(1e-4, 0.05), cf(1e-5, 1e-3), ts(1e-4, 5e-3),
      dv(0.3, 1.2);
  for (int k = 0; k < 1000; ++k) {
    const double l = lf(rng), r = rf(rng), c = cf(rng), t = ts(rng), d = dv(rng);
    const auto g = CascadeGains::tuned(l, r, c, t, d);
    const double w = 20.0 * std::numbers::pi / t;
    REQUIRE(close_rel(g.omega_v, w));
    REQUIRE(close_rel(g.k_pc * t, l));
    REQUIRE(close_rel(g.k_ic * t, r));
    REQUIRE(close_rel(g.k_pv, 2.0 * c * d * w));
    REQUIRE(close_rel(g.k_iv, w * w * c));
  }
}

TEST_CASE("explicit voltage bandwidth overrides the default") {
  const auto g = CascadeGains::tuned_with_bandwidth(3e-4, 0.01, 3e-4, 2.5e-4, 0.707, 1772.0);
  CHECK(g.omega_v == 1772.0);
  CHECK(g.k_pv == doctest::Approx(2 * 3e-4 * 0.707 * 1772.0));
  CHECK(g.k_iv == doctest::Approx(1772.0 * 1772.0 * 3e-4));
  CHECK_THROWS_AS(CascadeGains::tuned(0.0, 0.01, 3e-4, 2e-3), Error);
}

TEST_CASE("saturation keeps the angle and bounds the magnitude") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> comp(-5.0, 5.0), rating(0.1, 2.0);
  for (int k = 0; k < 100000; ++k) {
    const DqPair i{comp(rng), comp(rng)};
    const double i_n = rating(rng);
    const DqPair s = saturate_current(i, i_n);
    REQUIRE(s.magnitude() <= i_n * (1 + 1e-12));
    // collinear and same direction
    REQUIRE(std::abs(s.q * i.d - s.d * i.q) <= 1e-12 * (1 + i.magnitude() * i_n));
    REQUIRE(s.q * i.q + s.d * i.d >= 0.0);
    if (i.magnitude() <= i_n) {
      REQUIRE(s.q == doctest::Approx(i.q));
      REQUIRE(s.d == doctest::Approx(i.d));
    } else {
      REQUIRE(s.magnitude() == doctest::Approx(i_n).epsilon(1e-9));
    }
  }
  CHECK(saturate_current({0.0, 0.0}, 1.0) == DqPair{0.0, 0.0});
  CHECK(saturate_current({3.0, 0.0}, 1.0) == DqPair{1.0, 0.0});
}

TEST_CASE("droop auto-tune gives 2 % and 10 % deviation at rated power") {
  for (double s_n : {0.5, 1.0, 3.6}) {
    const auto p = DroopParams::auto_tuned(s_n, 0.01, 0.02);
    CHECK(active_droop(0.0, s_n, p) == doctest::Approx(1.02));
    CHECK(active_droop(s_n, 0.0, p) == doctest::Approx(0.98));
    CHECK(reactive_droop(-s_n, 0.0, p) == doctest::Approx(1.1));
  }
  // a load (P* = -0.6) that is over-consuming pushes frequency down
  const auto p = DroopParams::auto_tuned(1.0, 0.01, 0.01);
  CHECK(active_droop(-0.7, -0.6, p) > 1.0);
  CHECK(active_droop(-0.5, -0.6, p) < 1.0);
}

TEST_CASE("low-pass advance is exact for a constant input") {
  LowPass lp{0.0};
  lp.advance(1.0, 0.01, 0.01);
  CHECK(lp.state == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(lp.derivative(1.0, 0.01) == doctest::Approx(std::exp(-1.0) / 0.01));
}

TEST_CASE("ROCOF limiter holds under adversarial references") {
  const RateLimiter lim(2.0, 50.0);
  CHECK(lim.limit() == doctest::Approx(0.04));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> jump(-0.5, 0.5), tau(1e-4, 0.1);
  const double dt = 1e-4;
  double f = 1.0;
  for (int k = 0; k < 200000; ++k) {
    // square waves, single-sample spikes and noise
    double target = (k / 500) % 2 ? 1.2 : 0.8;
    if (k % 97 == 0) target = 1.0 + 10 * jump(rng);
    if (k % 3 == 0) target += jump(rng);
    const double next = lim.step(target, f, dt);
    REQUIRE(std::abs(next - f) <= lim.limit() * dt * (1 + 1e-12));
    REQUIRE(std::abs(lim.derivative(target, f, tau(rng))) <= lim.limit());
    f = next;
  }
  CHECK(lim.step(1.0 + 1e-7, 1.0, dt) == doctest::Approx(1.0 + 1e-7));
  CHECK_THROWS_AS(RateLimiter(0.0, 50.0), Error);
}

TEST_CASE("DC side holds its operating point") {
  DcSideParams p;
  p.r_h = 1.4;
  const double power = 0.5;
  DcSideState s{1.0, dc_side_bias_for(power, p)};
  const auto o = dc_side_outputs(s, p);
  CHECK(o.p_h == doctest::Approx(power));
  CHECK_FALSE(o.clamped);
  const auto d = dc_side_derivative(s, p, power);
  CHECK(d.v_t == doctest::Approx(0.0));
  CHECK(d.integral == doctest::Approx(0.0));
  // more grid-side power charges the link, and the controller raises the load
  s = dc_side_step(s, p, power + 0.1, 1e-4);
  CHECK(s.v_t > 1.0);
}

TEST_CASE("PLL gains and lock") {
  const double wb = 2 * std::numbers::pi * 50;
  const auto g = devices::PllParams::tuned(0.1, 0.707, wb);
  const double wn = 4.0 / (0.707 * 0.1);
  CHECK(g.k_p * wb == doctest::Approx(2 * 0.707 * wn));
  CHECK(g.k_i * wb == doctest::Approx(wn * wn));

  // locked: no motion
  const simcore::Phasor v = std::polar(1.0, 0.3);
  auto d = devices::pll_derivative({0.3, 0.0}, g, v, wb);
  CHECK(d.theta == doctest::Approx(0.0));
  CHECK(d.integral == doctest::Approx(0.0));

  // tracks a 0.5 Hz offset
  devices::PllState s{0.0, 0.0};
  const double dt = 1e-4, slip = 2 * std::numbers::pi * 0.5;
  for (int k = 0; k < 10000; ++k) {
    const double t = k * dt;
    const auto v_t = std::polar(1.0, slip * t);
    const auto ds = devices::pll_derivative(s, g, v_t, wb);
    s.theta += dt * ds.theta;
    s.integral += dt * ds.integral;
  }
  CHECK(devices::pll_frequency(s, g, std::polar(1.0, slip * 1.0)) == doctest::Approx(1.01).epsilon(1e-3));
  CHECK(devices::pll_error(0.0, 1.0) == 0.0);
}
