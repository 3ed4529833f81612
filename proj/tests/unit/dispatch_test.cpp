#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "gridform/dispatch/dispatch.hpp"
#include "gridform/dispatch/io.hpp"
#include "gridform/dispatch/profiles.hpp"

using namespace gridform;
using namespace gridform::dispatch;

namespace {

DispatchProblem small_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> hours(3, 12), nd(0, 60), avail(0, 6), level(1, 40), pick(0, 3), opt(0, 2);
  const double alphas[] = {0.5, 0.75, 0.9, 1.0};
  DispatchProblem p;
  const int h = hours(rng);
  for (int i = 0; i < h; ++i) {
    p.p_load_nd.push_back(nd(rng));
    p.p_ren_avail.push_back(20.0 * avail(rng));
  }
  p.e_disp_total = static_cast<double>(h * level(rng));
  p.alpha = alphas[pick(rng)];
  p.option = static_cast<Option>(opt(rng));
  p.ramp_fraction = std::numeric_limits<double>::infinity();
  return p;
}

// Exhaustive search over integer flexible-load levels. For a fixed level the
// best hourly split is closed form: use renewables first, then generation.
double oracle(const DispatchProblem& p) {
  const auto h = p.hours();
  const int e = static_cast<int>(std::lround(p.e_disp_total));
  const int cap = static_cast<int>(std::lround(2.0 * p.e_disp_total / static_cast<double>(h)));
  const double ren_max_factor = p.option == Option::C ? 1.0 : p.alpha;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(static_cast<std::size_t>(e) + 1, inf);
  best[0] = 0.0;
  for (std::size_t i = 0; i < h; ++i) {
    std::vector<double> next(best.size(), inf);
    for (int used = 0; used <= e; ++used) {
      if (best[static_cast<std::size_t>(used)] == inf) continue;
      for (int d = 0; d <= cap && used + d <= e; ++d) {
        if (p.option == Option::A && d != e / static_cast<int>(h)) continue;
        const double gen = std::max(0.0, p.p_load_nd[i] + d - ren_max_factor * p.p_ren_avail[i]);
        auto& slot = next[static_cast<std::size_t>(used + d)];
        slot = std::min(slot, best[static_cast<std::size_t>(used)] + gen);
      }
    }
    best.swap(next);
  }
  return best[static_cast<std::size_t>(e)];
}

DispatchProblem with_option(DispatchProblem p, Option o) {
  p.option = o;
  return p;
}

ProfileShape random_shape(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.6, 1.4);
  ProfileShape s;
  s.solar_peak *= u(rng);
  s.wind_mean *= u(rng);
  s.nd_mean *= u(rng);
  s.flex_mean *= u(rng);
  return s;
}

}  // namespace

TEST_CASE("balance forces generation when there is nothing else") {
  DispatchProblem p;
  p.p_ren_avail = {0.0};
  p.p_load_nd = {10.0};
  p.e_disp_total = 5.0;
  p.option = Option::B;
  const auto s = solve(p);
  CHECK(s.objective == doctest::Approx(15.0));
  CHECK(s.p_gencon[0] == doctest::Approx(15.0));
  const auto r = report(p, s);
  CHECK(r.curtailment_gwh == 0.0);
}

TEST_CASE("LP optimum equals the exhaustive oracle on 50 small instances") {
  std::mt19937_64 rng(20240);
  for (int k = 0; k < 50; ++k) {
    const auto p = small_instance(rng);
    CAPTURE(k);
    const auto s = solve(p);
    const double o = oracle(p);
    CHECK(std::abs(s.objective - o) <= 1e-6 * std::max(1.0, o));
    CHECK(constraint_violation(p, s) < 1e-6);
  }
}

TEST_CASE("option ordering and feasibility on 100 long instances") {
  std::mt19937_64 rng(77);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CAPTURE(seed);
    const auto base = synthetic_problem(seed, random_shape(rng));
    double obj[3];
    for (int o = 0; o < 3; ++o) {
      const auto p = with_option(base, static_cast<Option>(o));
      const auto s = solve(p);
      REQUIRE(constraint_violation(p, s) < 1e-6);
      REQUIRE(s.certificate.gap < 1e-7);
      REQUIRE(s.certificate.gap > -1e-7);
      obj[o] = s.objective;
    }
    const double tol = 1e-7 * std::max(1.0, obj[0]);
    CHECK(obj[2] <= obj[1] + tol);
    CHECK(obj[1] <= obj[0] + tol);
  }
}

TEST_CASE("a larger reserve factor never raises the objective") {
  for (std::uint64_t seed : {3u, 8u, 21u}) {
    auto p = synthetic_problem(seed);
    p.option = Option::B;
    double prev = std::numeric_limits<double>::infinity();
    for (double a = 0.5; a <= 1.0 + 1e-12; a += 0.1) {
      p.alpha = std::min(a, 1.0);
      const double obj = solve(p).objective;
      CHECK(obj <= prev + 1e-7 * std::max(1.0, prev));
      prev = obj;
    }
  }
}

TEST_CASE("scaling all powers scales the objective") {
  const auto base = with_option(synthetic_problem(5), Option::B);
  const auto ref = solve(base);
  const auto lp_ref = build(base);
  auto active = [](const LinearProgram& lp, const DispatchSolution& s, double scale) {
    std::vector<int> set;
    const double tol = 1e-7 * scale;
    for (std::size_t i = 0; i < s.p_ren.size(); ++i) {
      const Layout l{s.p_ren.size()};
      for (auto [col, v] : {std::pair{l.ren(i), s.p_ren[i]}, {l.gen(i), s.p_gencon[i]}, {l.dis(i), s.p_load_dis[i]}})
        set.push_back(std::abs(v - lp.col_lo[col]) < tol ? -1 : std::abs(v - lp.col_hi[col]) < tol ? 1 : 0);
    }
    return set;
  };
  for (double c : {2.0, 0.25, 3.0}) {
    CAPTURE(c);
    auto p = base;
    for (auto& v : p.p_ren_avail) v *= c;
    for (auto& v : p.p_load_nd) v *= c;
    p.e_disp_total *= c;
    const auto s = solve(p);
    CHECK(s.objective == doctest::Approx(c * ref.objective).epsilon(1e-9));
    if (c != 3.0) CHECK(active(build(p), s, c) == active(lp_ref, ref, 1.0));
  }
}

TEST_CASE("option A holds the flexible load constant") {
  const auto p = with_option(synthetic_problem(2), Option::A);
  const auto s = solve(p);
  for (double d : s.p_load_dis) CHECK(d == doctest::Approx(p.e_disp_total / 150.0));
}

TEST_CASE("energy totals add up") {
  const auto p = with_option(synthetic_problem(4), Option::C);
  const auto s = solve(p);
  const auto r = report(p, s);
  CHECK(r.renewable_gwh + r.conventional_gwh == doctest::Approx(r.nd_load_gwh + r.flexible_gwh).epsilon(1e-12));
  CHECK(r.flexible_gwh == doctest::Approx(p.e_disp_total / 1000.0));
  CHECK(s.objective == doctest::Approx(r.conventional_gwh * 1000.0));
  const auto tot = s.p_load_tot(p);
  CHECK(tot[7] == doctest::Approx(s.p_load_dis[7] + p.p_load_nd[7]));
  CHECK(format(Option::C, r).rfind("C: renewable ", 0) == 0);
}

TEST_CASE("malformed and infeasible problems are rejected before solving") {
  DispatchProblem p;
  p.p_ren_avail = {1.0, 2.0};
  p.p_load_nd = {1.0, 2.0, 3.0};
  p.alpha = 1.5;
  p.e_disp_total = 1.0;
  try {
    build(p);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.problems().size() >= 2);
  }

  DispatchProblem q;
  q.p_ren_avail = {0.0, 0.0, 0.0};
  q.p_load_nd = {1.0, 1.0, 1.0};
  q.flex = Range{0.0, 10.0};
  q.e_disp_total = 40.0;
  CHECK_THROWS_AS(build(q), ValidationError);

  q.e_disp_total = 3.0;
  q.gen_max = 0.5;
  CHECK_THROWS_AS(build(q), Infeasible);
  CHECK_THROWS_AS(parse_option("D"), ValidationError);
}

TEST_CASE("simplex on a cycling-prone degenerate program") {
  // classic example that cycles under naive Dantzig pricing
  LinearProgram lp;
  const double big = 1e3;
  auto x4 = lp.add_column("x4", -0.75, 0, big);
  auto x5 = lp.add_column("x5", 20, 0, big);
  auto x6 = lp.add_column("x6", -0.5, 0, big);
  auto x7 = lp.add_column("x7", 6, 0, big);
  auto r1 = lp.add_row("r1", -big * 100, 0);
  auto r2 = lp.add_row("r2", -big * 100, 0);
  auto r3 = lp.add_row("r3", -big, 1);
  lp.at(r1, x4) = 0.25, lp.at(r1, x5) = -8, lp.at(r1, x6) = -1, lp.at(r1, x7) = 9;
  lp.at(r2, x4) = 0.5, lp.at(r2, x5) = -12, lp.at(r2, x6) = -0.5, lp.at(r2, x7) = 3;
  lp.at(r3, x6) = 1;
  for (int stall : {50, 0}) {
    SimplexOptions opt;
    opt.stall_limit = stall;
    const auto r = solve_lp(lp, opt);
    CHECK(r.objective == doctest::Approx(-1.25));
    const auto cert = certify(lp, r.x, r.row_dual);
    CHECK(cert.primal_residual < 1e-12);
    CHECK(std::abs(cert.gap) < 1e-9);
  }
}

TEST_CASE("simplex reports infeasibility and rejects free variables") {
  LinearProgram lp;
  auto x = lp.add_column("x", 1, 0, 1);
  auto r = lp.add_row("r", 2, 3);
  lp.at(r, x) = 1;
  CHECK_THROWS_AS(solve_lp(lp), Infeasible);
  lp.col_hi[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solve_lp(lp), ValidationError);
}

TEST_CASE("problem files round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "gridform_dispatch_test";
  auto p = synthetic_problem(12);
  p.alpha = 0.85;
  p.flex = Range{10.0, 300.0};
  p.ramp_fraction = 0.3;
  write_problem(dir / "p.csv", p);
  const auto q = read_problem(dir / "p.csv");
  REQUIRE(q.hours() == p.hours());
  for (std::size_t i = 0; i < p.hours(); ++i) CHECK(q.p_ren_avail[i] == doctest::Approx(p.p_ren_avail[i]).epsilon(1e-8));
  CHECK(q.alpha == 0.85);
  CHECK(q.flex->hi == 300.0);
  CHECK(q.ramp_fraction == 0.3);
  const auto s = solve(q);
  const auto paths = write_solution(dir, "sol", q, s);
  CHECK(std::filesystem::exists(paths.csv));
  CHECK(std::filesystem::exists(paths.summary));
  CHECK_THROWS_AS(read_problem(dir / "missing.csv"), ValidationError);
  std::filesystem::remove_all(dir);
}
