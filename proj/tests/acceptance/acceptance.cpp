// Acceptance run: one line per criterion. Every number is recomputed here
// from the recorded series, independently of the case checks in the library.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gridform/control/cascade.hpp"
#include "gridform/control/droop.hpp"
#include "gridform/dispatch/dispatch.hpp"
#include "gridform/dispatch/io.hpp"
#include "gridform/dispatch/profiles.hpp"
#include "gridform/scenario/builder.hpp"
#include "gridform/scenario/cases.hpp"

using namespace gridform;
using simcore::RunResult;
using simcore::TimeSeries;

namespace {

struct Run {
  scenario::ScenarioSpec spec;
  RunResult result;
  double seconds = 0.0;
};

Run simulate(const std::string& name) {
  Run r{scenario::case_spec(name), {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  r.result = scenario::execute(r.spec);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Sample-index helpers over [t0, t1], inclusive.
struct View {
  const TimeSeries& s;
  std::size_t k(double t) const {
    const long i = std::lround(t / s.dt());
    return static_cast<std::size_t>(std::clamp<long>(i, 0, static_cast<long>(s.size()) - 1));
  }
  const std::vector<double>& x(const std::string& c) const { return s.channel(c); }
  double avg(const std::string& c, double t0, double t1) const {
    const auto& v = x(c);
    double sum = 0.0;
    for (std::size_t i = k(t0); i <= k(t1); ++i) sum += v[i];
    return sum / static_cast<double>(k(t1) - k(t0) + 1);
  }
  double lo(const std::string& c, double t0, double t1) const {
    const auto& v = x(c);
    return *std::min_element(v.begin() + static_cast<long>(k(t0)), v.begin() + static_cast<long>(k(t1)) + 1);
  }
  double hi(const std::string& c, double t0, double t1) const {
    const auto& v = x(c);
    return *std::max_element(v.begin() + static_cast<long>(k(t0)), v.begin() + static_cast<long>(k(t1)) + 1);
  }
  double end() const { return s.dt() * static_cast<double>(s.size() - 1); }
};

bool stable(const Run& r) { return r.result.verdict.kind == simcore::RunVerdict::Kind::stable; }

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what, double value) {
    std::ostringstream os;
    os.precision(4);
    os << (ok ? "ok   " : "FAIL ") << what << " = " << value;
    notes.push_back(os.str());
    pass = pass && ok;
  }
};

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

std::vector<std::string> ids_of_type(const scenario::ScenarioSpec& s, const std::string& type) {
  std::vector<std::string> out;
  for (const auto& d : s.devices)
    if (d.type == type) out.push_back(d.id);
  return out;
}

Outcome criterion1(const Run& a) {
  Outcome o;
  View v{a.result.series};
  const double fn = a.spec.base.f_base();
  const double exp = -v.avg("grid.P", 1.5, 1.99);
  o.require(within(exp, 0.2, 0.02), "grid export before the event [pu]", exp);
  const double nadir = v.lo("grid.f", 0.0, 3.599) - fn;
  o.require(within(nadir, -0.5, 0.1), "nadir deviation [Hz]", nadir);
  o.require(!stable(a) && a.result.verdict.t_diverge >= 3.6, "unstable after islanding at [s]",
            a.result.verdict.t_diverge);
  o.require(a.seconds < 30.0, "runtime [s]", a.seconds);
  return o;
}

Outcome criterion2(const Run& b, const Run& a) {
  Outcome o;
  View v{b.result.series}, va{a.result.series};
  const double fn = b.spec.base.f_base();
  const double nb = v.lo("grid.f", 0.0, 3.599) - fn, na = va.lo("grid.f", 0.0, 3.599) - fn;
  o.require(std::abs(nb) < std::abs(na), "|nadir| with support minus without [Hz]", std::abs(nb) - std::abs(na));
  const double before = v.avg("load.P", 1.5, 1.99), after = v.avg("load.P", 3.5, 3.599);
  o.require(within(before, 0.6, 0.03), "load before [pu]", before);
  o.require(within(after, 0.45, 0.03), "load after the frequency drop [pu]", after);
  o.require(!stable(b) && b.result.verdict.t_diverge >= 3.6, "unstable after islanding at [s]",
            b.result.verdict.t_diverge);
  return o;
}

Outcome criterion3(const Run& c) {
  Outcome o;
  View v{c.result.series};
  const double fn = c.spec.base.f_base();
  const double p0 = v.avg("wind.P", 1.5, 1.99), p1 = v.avg("wind.P", 3.5, 3.599);
  o.require(within(p0, 0.6, 0.03), "wind before [pu]", p0);
  o.require(within(p1, 0.8, 0.03), "wind after the event [pu]", p1);
  const double nadir = v.lo("grid.f", 0.0, 3.599) - fn;
  o.require(within(nadir, -0.4, 0.1), "nadir deviation [Hz]", nadir);
  o.require(stable(c), "stable (1 = yes)", stable(c));
  const double pi = v.avg("wind.P", v.end() - 0.5, v.end());
  o.require(within(pi, 0.5, 0.03), "islanded wind [pu]", pi);
  return o;
}

Outcome criterion4(const Run& d) {
  Outcome o;
  View v{d.result.series};
  const double e = v.end();
  const double dw = std::max(v.hi("wind.P", 0, e) - 0.8, 0.8 - v.lo("wind.P", 0, e));
  o.require(dw < 0.02, "wind deviation from 0.8 pu", dw);
  const double l0 = v.avg("load.P", 1.5, 1.99), l1 = v.avg("load.P", 3.5, 3.599);
  o.require(within(l0, 0.6, 0.03), "GFM load before [pu]", l0);
  o.require(within(l1, 0.4, 0.03), "GFM load after the event [pu]", l1);
  o.require(stable(d), "stable (1 = yes)", stable(d));
  const auto& dc = *std::get<control::GfmConverterParams>(d.spec.device("load")->params).dc;
  const double ddc = std::max(v.hi("load.v_dc", 0, e) - dc.v_t_nominal, dc.v_t_nominal - v.lo("load.v_dc", 0, e));
  o.require(ddc <= 0.02 * dc.v_t_nominal, "DC-link deviation [pu]", ddc);
  const double vh0 = v.lo("load.v_h", 0, e), vh1 = v.hi("load.v_h", 0, e);
  o.require(vh0 >= dc.v_h_min && vh1 <= dc.v_h_max, "heater voltage swing [pu]", vh1 - vh0);
  o.require(vh1 - vh0 > 1e-3, "heater voltage actually moves [pu]", vh1 - vh0);
  return o;
}

Outcome criterion5(const Run& r) {
  Outcome o;
  View v{r.result.series};
  const double fn = r.spec.base.f_base();
  const auto& pcc = v.x("PCC.V");
  double t_nom = -1;
  for (std::size_t i = 0; i < pcc.size(); ++i)
    if (pcc[i] >= 0.99) {
      t_nom = r.result.series.time(i);
      break;
    }
  o.require(within(t_nom, 5.0, 0.2), "voltage at nominal at [s]", t_nom);
  // power loops: droop starts acting, so the load power leaves its ramp-phase value
  const auto& mode = v.x("load.mode");
  double t_loops = -1;
  for (std::size_t i = v.k(5.5); i < mode.size(); ++i)
    if (mode[i] != mode[i - 1]) {
      t_loops = r.result.series.time(i);
      break;
    }
  o.require(within(t_loops, 7.0, 0.01), "power loops engage at [s]", t_loops);
  const double dem = v.avg("load.P", 11.5, 11.999);
  o.require(within(dem, 0.5, 0.03), "GFM load demand [pu]", dem);
  const double pw = v.avg("wind.P", v.end() - 0.5, v.end());
  o.require(within(pw, 0.75, 0.02), "final wind [pu]", pw);
  double fdev = 0;
  for (const char* c : {"load.f", "wind.f"})
    fdev = std::max({fdev, v.hi(c, 0, v.end()) - fn, fn - v.lo(c, 0, v.end())});
  o.require(fdev <= 0.02 * fn, "largest frequency excursion [Hz]", fdev);
  o.require(stable(r), "stable (1 = yes)", stable(r));
  return o;
}

double droop_gain(const scenario::ScenarioSpec& s, const std::string& id) {
  const auto& p = std::get<control::GfmConverterParams>(s.device(id)->params);
  // rated-power droop: 2 % of nominal frequency at full rating
  return p.k_p ? *p.k_p : 0.02 / p.s_n;
}

Outcome criterion6(const Run& r) {
  Outcome o;
  View v{r.result.series};
  const double g1 = std::abs(v.avg("GEN1.P", 2.1, 2.29));
  o.require(g1 <= 0.01, "GEN1 after the trip [pu]", g1);
  std::vector<double> scaled;
  for (const auto& id : ids_of_type(r.spec, "gfm_load"))
    scaled.push_back((v.avg(id + ".P", 2.2, 2.29) - v.avg(id + ".P", 1.8, 1.99)) * droop_gain(r.spec, id));
  double mean = 0;
  for (double x : scaled) mean += x / static_cast<double>(scaled.size());
  double spread = 0;
  for (double x : scaled) spread = std::max(spread, std::abs(x - mean) / std::abs(mean));
  o.require(scaled.size() == 4 && spread <= 0.05, "largest deviation of dP*k_p from the mean (relative)", spread);
  double vdev = 0;
  for (const auto& b : r.spec.buses)
    vdev = std::max({vdev, v.hi(b.id + ".V", 0, v.end()) - 1.0, 1.0 - v.lo(b.id + ".V", 0, v.end())});
  o.require(vdev <= 0.1, "bus voltage deviation [pu]", vdev);
  // renewables other than GEN1, metered over one fundamental cycle
  const auto cycle = static_cast<std::size_t>(std::lround(1.0 / (r.spec.base.f_base() * r.result.series.dt())));
  double rdev = 0;
  for (const auto& id : ids_of_type(r.spec, "mppt")) {
    if (id == "GEN1") continue;
    const auto& p = v.x(id + ".P");
    const double ref = v.avg(id + ".P", 1.8, 1.99);
    for (std::size_t i = v.k(2.0); i < p.size(); ++i) {
      double m = 0;
      for (std::size_t j = i + 1 - cycle; j <= i; ++j) m += p[j];
      m /= static_cast<double>(cycle);
      rdev = std::max(rdev, std::abs(m - ref) / ref);
    }
  }
  o.require(rdev <= 0.01, "renewable change (relative, one-cycle mean)", rdev);
  o.require(stable(r), "stable (1 = yes)", stable(r));
  return o;
}

Outcome criterion7(const Run& r) {
  Outcome o;
  View v{r.result.series};
  const double vb2 = v.avg("B2.V", 2.05, 2.099);
  o.require(within(vb2, 0.4, 0.05), "B2 voltage during the fault [pu]", vb2);
  double imax = 0;
  for (const auto& id : ids_of_type(r.spec, "gfm_load")) imax = std::max(imax, v.hi(id + ".I", 0, v.end()));
  o.require(imax <= 1.0, "largest GFM-L current [pu of rating]", imax);
  // loads adjacent to B2
  for (const char* id : {"GFM3", "GFM8", "GFM13"}) {
    const double p = v.avg(std::string(id) + ".P", 2.05, 2.099);
    o.require(p < 0.05, std::string(id) + " power during the fault [pu]", p);
  }
  double settle = 0;
  for (const auto& id : ids_of_type(r.spec, "gfm_load")) {
    const auto& p = v.x(id + ".P");
    const double pre = v.avg(id + ".P", 1.8, 1.99);
    const double band = 0.01 * std::max(1.0, std::abs(pre));
    for (std::size_t i = p.size(); i-- > v.k(2.1);)
      if (std::abs(p[i] - pre) > band) {
        settle = std::max(settle, r.result.series.time(i) - 2.1);
        break;
      }
  }
  o.require(settle <= 1.0, "back within 1 % of pre-fault after clearing [s]", settle);
  o.require(stable(r), "stable (1 = yes)", stable(r));
  return o;
}

Outcome criterion8(const Run& r) {
  Outcome o;
  View v{r.result.series};
  for (const auto& g : ids_of_type(r.spec, "sync_gen")) {
    const auto& p = std::get<devices::SyncGenParams>(r.spec.device(g)->params);
    o.require(p.h == 5.0, g + " H [s]", p.h);
    double dev = 0;
    for (double te : {2.0, 6.0}) {
      const double b = v.avg(g + ".P", te - 0.2, te - 0.001), a = v.avg(g + ".P", te + 1.5, te + 1.999);
      dev = std::max(dev, std::abs(a - b) / std::abs(b));
    }
    o.require(dev < 0.02, g + " electrical power change (relative)", dev);
  }
  for (const auto& id : ids_of_type(r.spec, "gfm_load"))
    for (double te : {2.0, 6.0}) {
      const double b = v.avg(id + ".P", te - 0.2, te - 0.001);
      const double full = v.avg(id + ".P", te + 0.5, te + 0.6) - b;
      const double part = v.x(id + ".P")[v.k(te + 0.06)] - b;
      std::ostringstream what;
      what << id << " share of adjustment at 60 ms after t=" << te;
      o.require(part / full >= 0.9, what.str(), part / full);
    }
  o.require(stable(r), "stable (1 = yes)", stable(r));
  return o;
}

// Exhaustive search over integer flexible-load levels on ramp-free data.
double brute_force(const dispatch::DispatchProblem& p) {
  const int h = static_cast<int>(p.hours());
  const int e = static_cast<int>(std::lround(p.e_disp_total));
  const int cap = 2 * e / h;
  const double r = p.option == dispatch::Option::C ? 1.0 : p.alpha;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(static_cast<std::size_t>(e) + 1, inf), next;
  cost[0] = 0;
  for (int i = 0; i < h; ++i) {
    next.assign(cost.size(), inf);
    for (int used = 0; used <= e; ++used) {
      if (cost[static_cast<std::size_t>(used)] == inf) continue;
      for (int d = 0; d <= cap && used + d <= e; ++d) {
        if (p.option == dispatch::Option::A && d * h != e) continue;
        const double need = p.p_load_nd[static_cast<std::size_t>(i)] + d - r * p.p_ren_avail[static_cast<std::size_t>(i)];
        next[static_cast<std::size_t>(used + d)] =
            std::min(next[static_cast<std::size_t>(used + d)], cost[static_cast<std::size_t>(used)] + std::max(0.0, need));
      }
    }
    cost.swap(next);
  }
  return cost[static_cast<std::size_t>(e)];
}

// Balance, energy and reserve constraints re-checked from the schedule alone.
double violation(const dispatch::DispatchProblem& p, const dispatch::DispatchSolution& s) {
  const double r = p.option == dispatch::Option::C ? 1.0 : p.alpha;
  double worst = 0, e = 0;
  for (std::size_t i = 0; i < p.hours(); ++i) {
    worst = std::max({worst, std::abs(s.p_ren[i] + s.p_gencon[i] - s.p_load_dis[i] - p.p_load_nd[i]),
                      s.p_ren[i] - r * p.p_ren_avail[i], -s.p_ren[i], -s.p_gencon[i], -s.p_load_dis[i]});
    e += s.p_load_dis[i];
  }
  double obj = 0;
  for (double g : s.p_gencon) obj += g;
  return std::max({worst, std::abs(e - p.e_disp_total), std::abs(obj - s.objective)});
}

Outcome criterion9() {
  Outcome o;
  using namespace dispatch;
  std::mt19937_64 rng(909);
  double worst_rel = 0, worst_viol = 0;
  for (int n = 0; n < 50; ++n) {
    std::uniform_int_distribution<int> hours(3, 12), nd(0, 50), av(0, 5), lvl(1, 30), opt(0, 2);
    DispatchProblem p;
    const int h = hours(rng);
    for (int i = 0; i < h; ++i) {
      p.p_load_nd.push_back(nd(rng));
      p.p_ren_avail.push_back(20.0 * av(rng));
    }
    p.e_disp_total = h * lvl(rng);
    p.alpha = 0.75;
    p.option = static_cast<Option>(opt(rng));
    p.ramp_fraction = std::numeric_limits<double>::infinity();
    const auto s = solve(p);
    const double b = brute_force(p);
    worst_rel = std::max(worst_rel, std::abs(s.objective - b) / std::max(1.0, b));
    worst_viol = std::max(worst_viol, violation(p, s));
  }
  o.require(worst_rel <= 1e-6, "LP vs exhaustive oracle, 50 instances (relative)", worst_rel);

  int order_bad = 0;
  for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
    const auto base = synthetic_problem(seed);
    double obj[3];
    for (int k = 0; k < 3; ++k) {
      auto p = base;
      p.option = static_cast<Option>(k);
      const auto s = solve(p);
      worst_viol = std::max(worst_viol, violation(p, s));
      obj[k] = s.objective;
    }
    const double tol = 1e-7 * std::max(1.0, obj[0]);
    if (obj[2] > obj[1] + tol || obj[1] > obj[0] + tol) ++order_bad;
  }
  o.require(order_bad == 0, "150-hour instances violating C <= B <= A (of 100)", order_bad);
  o.require(worst_viol <= 1e-6, "worst constraint violation [MW or MWh]", worst_viol);

  const auto bundled = read_problem(std::filesystem::path(GRIDFORM_DATA_DIR) / "profile_150h.csv");
  double conv[3];
  for (int k = 0; k < 3; ++k) {
    auto p = bundled;
    p.option = static_cast<Option>(k);
    const auto s = solve(p);
    conv[k] = report(p, s).conventional_gwh;
    std::printf("    %s\n", format(p.option, report(p, s)).c_str());
  }
  o.require(conv[2] <= conv[1] && conv[1] <= conv[0], "bundled profile ordering (1 = holds)",
            conv[2] <= conv[1] && conv[1] <= conv[0]);
  o.require(conv[2] < 0.05 * conv[0], "bundled profile conventional C / A", conv[2] / conv[0]);
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> lf(1e-5, 1e-3), rf(0.0, 0.05), cf(1e-5, 1e-3), ts(1e-4, 5e-3), dv(0.3, 1.2);
  double gain_err = 0;
  for (int k = 0; k < 1000; ++k) {
    const double l = lf(rng), r = rf(rng), c = cf(rng), t = ts(rng), d = dv(rng);
    const auto g = control::CascadeGains::tuned(l, r, c, t, d);
    const double w = 10.0 * 2.0 * std::numbers::pi / t;
    const double e[] = {g.k_pc - l / t, g.k_ic - r / t, (g.k_pv - 2 * c * d * w) / g.k_pv, (g.k_iv - w * w * c) / g.k_iv};
    for (double x : e) gain_err = std::max(gain_err, std::abs(x));
  }
  o.require(gain_err <= 1e-12, "gain formula error, 1000 draws", gain_err);

  std::uniform_real_distribution<double> comp(-4.0, 4.0), rating(0.2, 2.0);
  double over = 0, skew = 0;
  for (int k = 0; k < 100000; ++k) {
    const control::DqPair i{comp(rng), comp(rng)};
    const double n = rating(rng);
    const auto s = control::saturate_current(i, n);
    over = std::max(over, s.magnitude() - n);
    const double cross = std::abs(s.q * i.d - s.d * i.q) / std::max(1e-300, s.magnitude() * i.magnitude());
    const double along = s.q * i.q + s.d * i.d;
    skew = std::max(skew, along < 0 ? 1.0 : cross);
  }
  o.require(over <= 1e-12, "saturated magnitude above rating, 1e5 draws", over);
  o.require(skew <= 1e-12, "angle change by saturation (sin), 1e5 draws", skew);

  const control::RateLimiter lim(2.0, 50.0);
  const double dt = 1e-4;
  double f = 1.0, worst = 0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100000; ++k) {
    double target = (k / 300) % 2 ? 1.5 : 0.5;
    if (k % 7 == 0) target = 1.0 + 50.0 * u(rng);
    const double next = lim.step(target, f, dt);
    worst = std::max(worst, std::abs(next - f) / dt * 50.0);
    f = next;
  }
  o.require(worst <= 2.0 * (1 + 1e-9), "largest ROCOF through the limiter [Hz/s]", worst);
  return o;
}

}  // namespace

int main() {
  std::map<std::string, Run> runs;
  for (const auto& n : scenario::case_names()) runs.emplace(n, simulate(n));

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"case 1(a) MPPT wind, fixed load", [&] { return criterion1(runs.at("case1a")); }},
      {"case 1(b) frequency-support load", [&] { return criterion2(runs.at("case1b"), runs.at("case1a")); }},
      {"case 1(c) grid-forming wind", [&] { return criterion3(runs.at("case1c")); }},
      {"case 1(d) grid-forming load", [&] { return criterion4(runs.at("case1d")); }},
      {"case 2 black start", [&] { return criterion5(runs.at("case2")); }},
      {"case 3(e) generator trip and load step", [&] { return criterion6(runs.at("case3e")); }},
      {"case 3(f) three-phase fault", [&] { return criterion7(runs.at("case3f")); }},
      {"case 4 synchronous machines", [&] { return criterion8(runs.at("case4")); }},
      {"dispatch properties", [] { return criterion9(); }},
      {"control-law properties", [] { return criterion10(); }},
  };
  int failed = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("FAIL exception: ") + e.what());
    }
    std::printf("criterion %2d %s: %s\n", n, o.pass ? "PASS" : "FAIL", name.c_str());
    for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
    failed += !o.pass;
  }
  std::printf("%d of %d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
