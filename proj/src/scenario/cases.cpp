#include "gridform/scenario/cases.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "gridform/scenario/builder.hpp"
#include "gridform/simcore/errors.hpp"

namespace gridform::scenario {

namespace {

using simcore::TimeSeries;

struct Window {
  const TimeSeries& s;

  const std::vector<double>& ch(const std::string& name) const {
    if (!s.has(name)) throw Error("missing channel: " + name);
    return s.channel(name);
  }
  std::size_t index(double t) const {
    const double k = std::round(t / s.dt());
    return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(s.size() - 1)));
  }
  double at(const std::string& name, double t) const { return ch(name)[index(t)]; }
  template <class F>
  double fold(const std::string& name, double t0, double t1, double init, F f) const {
    const auto& x = ch(name);
    double acc = init;
    for (std::size_t k = index(t0); k <= index(t1) && k < x.size(); ++k) acc = f(acc, x[k]);
    return acc;
  }
  double min(const std::string& name, double t0, double t1) const {
    return fold(name, t0, t1, 1e300, [](double a, double v) { return std::min(a, v); });
  }
  double max(const std::string& name, double t0, double t1) const {
    return fold(name, t0, t1, -1e300, [](double a, double v) { return std::max(a, v); });
  }
  double mean(const std::string& name, double t0, double t1) const {
    const double n = static_cast<double>(index(t1) - index(t0) + 1);
    return fold(name, t0, t1, 0.0, [](double a, double v) { return a + v; }) / n;
  }
  double end() const { return s.time(s.size() - 1); }
  /// Trailing one-cycle mean of a channel, as a meter would report it.
  std::vector<double> cycle_mean(const std::string& name, double f_n) const {
    const auto& x = ch(name);
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(1.0 / (f_n * s.dt()))));
    std::vector<double> out(x.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      acc += x[k];
      if (k >= n) acc -= x[k - n];
      out[k] = acc / static_cast<double>(std::min(k + 1, n));
    }
    return out;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Check near(const std::string& what, double measured, double target, double tol) {
  return {what, measured, fmt(target) + " +/- " + fmt(tol), std::abs(measured - target) <= tol};
}
Check below(const std::string& what, double measured, double bound) {
  return {what, measured, "< " + fmt(bound), measured < bound};
}
Check at_most(const std::string& what, double measured, double bound) {
  return {what, measured, "<= " + fmt(bound), measured <= bound};
}
Check at_least(const std::string& what, double measured, double bound) {
  return {what, measured, ">= " + fmt(bound), measured >= bound};
}
Check verdict(const simcore::RunResult& r, bool stable, double after = 0.0) {
  const bool is_stable = r.verdict.kind == simcore::RunVerdict::Kind::stable;
  Check c{stable ? "verdict stable" : "verdict unstable after " + fmt(after) + " s",
          r.verdict.t_diverge, stable ? "stable" : "unstable", false};
  c.pass = stable ? is_stable : (!is_stable && r.verdict.t_diverge >= after);
  return c;
}

double nadir_deviation(const Window& w, const std::string& f, double t0, double t1, double f_n) {
  return w.min(f, t0, t1) - f_n;
}

constexpr double kEvent = 2.0;
constexpr double kIsland = 3.6;

std::vector<Check> case1a(const ScenarioSpec& spec, const simcore::RunResult& r) {
  Window w{r.series};
  const double fn = spec.base.f_base();
  return {near("grid export before the event [pu]", -w.mean("grid.P", 1.5, kEvent - 0.01), 0.2, 0.02),
          near("frequency nadir deviation [Hz]", nadir_deviation(w, "grid.f", 0.0, kIsland - 0.001, fn),
               -0.5, 0.1),
          verdict(r, false, kIsland)};
}

std::vector<Check> case1b(const ScenarioSpec& spec, const simcore::RunResult& r,
                          const std::map<std::string, CaseReport>& ref) {
  Window w{r.series};
  const double fn = spec.base.f_base();
  const double dev = nadir_deviation(w, "grid.f", 0.0, kIsland - 0.001, fn);
  std::vector<Check> c{near("load before the event [pu]", w.mean("load.P", 1.5, kEvent - 0.01), 0.6, 0.03),
                       near("load before islanding [pu]", w.mean("load.P", kIsland - 0.1, kIsland - 0.001),
                            0.45, 0.03),
                       verdict(r, false, kIsland)};
  if (auto it = ref.find("case1a"); it != ref.end()) {
    Window wa{it->second.result.series};
    const double dev_a = nadir_deviation(wa, "grid.f", 0.0, kIsland - 0.001, fn);
    c.push_back(below("|nadir deviation| relative to case1a [Hz]", std::abs(dev), std::abs(dev_a)));
  }
  return c;
}

std::vector<Check> case1c(const ScenarioSpec& spec, const simcore::RunResult& r) {
  Window w{r.series};
  const double fn = spec.base.f_base();
  return {near("wind before the event [pu]", w.mean("wind.P", 1.5, kEvent - 0.01), 0.6, 0.03),
          near("wind before islanding [pu]", w.mean("wind.P", kIsland - 0.1, kIsland - 0.001), 0.8, 0.03),
          near("frequency nadir deviation [Hz]", nadir_deviation(w, "grid.f", 0.0, kIsland - 0.001, fn),
               -0.4, 0.1),
          verdict(r, true),
          near("islanded wind output [pu]", w.mean("wind.P", w.end() - 0.5, w.end()), 0.5, 0.03)};
}

std::vector<Check> case1d(const ScenarioSpec& spec, const simcore::RunResult& r) {
  Window w{r.series};
  const auto& dc = *std::get<control::GfmConverterParams>(spec.device("load")->params).dc;
  const double end = w.end();
  const double dev_w = std::max(std::abs(w.max("wind.P", 0.0, end) - 0.8),
                                std::abs(w.min("wind.P", 0.0, end) - 0.8));
  const double dev_dc = std::max(std::abs(w.max("load.v_dc", 0.0, end) - dc.v_t_nominal),
                                 std::abs(w.min("load.v_dc", 0.0, end) - dc.v_t_nominal));
  return {below("wind deviation from 0.8 pu", dev_w, 0.02),
          near("GFM load before the event [pu]", w.mean("load.P", 1.5, kEvent - 0.01), 0.6, 0.03),
          near("GFM load before islanding [pu]", w.mean("load.P", kIsland - 0.1, kIsland - 0.001), 0.4, 0.03),
          verdict(r, true),
          at_most("DC-link deviation [pu]", dev_dc, 0.02 * dc.v_t_nominal),
          at_least("heater voltage minimum [pu]", w.min("load.v_h", 0.0, end), dc.v_h_min),
          at_most("heater voltage maximum [pu]", w.max("load.v_h", 0.0, end), dc.v_h_max)};
}

std::vector<Check> case2(const ScenarioSpec& spec, const simcore::RunResult& r) {
  Window w{r.series};
  const auto& plan = *spec.blackstart;
  const double fn = spec.base.f_base();
  const auto& v = w.ch("PCC.V");
  double t_nominal = -1.0;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] >= 0.99 * plan.v_nominal) {
      t_nominal = r.series.time(k);
      break;
    }
  const auto& mode = w.ch("load.mode");
  double t_engage = -1.0;
  for (std::size_t k = 1; k < mode.size(); ++k)
    if (mode[k] != mode[k - 1] && r.series.time(k) > plan.t_start + 0.5 * plan.voltage_ramp) {
      t_engage = r.series.time(k);
      break;
    }
  const double end = w.end();
  double f_dev = 0.0;
  for (const char* ch : {"load.f", "wind.f"}) {
    f_dev = std::max(f_dev, std::abs(w.max(ch, 0.0, end) - fn));
    f_dev = std::max(f_dev, std::abs(w.min(ch, 0.0, end) - fn));
  }
  return {near("voltage reaches nominal at [s]", t_nominal, 5.0, 0.2),
          near("power loops engage at [s]", t_engage, 7.0, 0.01),
          near("GFM load demand before handover [pu]",
               w.mean("load.P", plan.t_handover - 0.5, plan.t_handover - 0.001), 0.5, 0.03),
          near("final wind output [pu]", w.mean("wind.P", end - 0.5, end), 0.75, 0.02),
          at_most("largest frequency deviation [Hz]", f_dev, 0.02 * fn),
          verdict(r, true)};
}

std::vector<std::string> gfm_loads(const ScenarioSpec& spec) {
  std::vector<std::string> ids;
  for (const auto& d : spec.devices)
    if (d.type == "gfm_load") ids.push_back(d.id);
  return ids;
}

std::vector<Check> case3e(const ScenarioSpec& spec, const simcore::RunResult& r) {
  Window w{r.series};
  const double end = w.end();
  std::vector<Check> c;
  c.push_back(at_most("GEN1 output after the trip [pu]", std::abs(w.mean("GEN1.P", 2.1, 2.29)), 0.01));
  // Droop proportionality: dP_i * k_p,i is common to every forming load.
  std::vector<double> scaled;
  for (const auto& id : gfm_loads(spec)) {
    const auto& p = std::get<control::GfmConverterParams>(spec.device(id)->params);
    const double k_p = p.k_p.value_or(control::DroopParams::auto_tuned(p.s_n, p.tau_p, p.tau_q).k_p);
    const double dp = w.mean(id + ".P", 2.2, 2.29) - w.mean(id + ".P", 1.8, 1.99);
    scaled.push_back(dp * k_p);
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  const double mean = std::accumulate(scaled.begin(), scaled.end(), 0.0) / static_cast<double>(scaled.size());
  c.push_back(at_most("droop-scaled response spread (relative)", (*hi - *lo) / std::abs(mean), 0.05));
  double v_dev = 0.0;
  for (const auto& b : spec.buses) {
    v_dev = std::max(v_dev, std::abs(w.max(b.id + ".V", 0.0, end) - 1.0));
    v_dev = std::max(v_dev, std::abs(w.min(b.id + ".V", 0.0, end) - 1.0));
  }
  c.push_back(at_most("largest bus voltage deviation [pu]", v_dev, 0.1));
  double ren_dev = 0.0;
  for (const auto& d : spec.devices) {
    if (d.type != "mppt" || d.id == "GEN1") continue;
    const double before = w.mean(d.id + ".P", 1.8, 1.99);
    const double scale = std::max(std::abs(before), 1e-9);
    const auto p = w.cycle_mean(d.id + ".P", spec.base.f_base());
    for (std::size_t k = w.index(2.0); k < p.size(); ++k)
      ren_dev = std::max(ren_dev, std::abs(p[k] - before) / scale);
  }
  c.push_back(at_most("renewable output change, one-cycle mean (relative)", ren_dev, 0.01));
  c.push_back(verdict(r, true));
  return c;
}

std::vector<Check> case3f(const ScenarioSpec& spec, const simcore::RunResult& r) {
  Window w{r.series};
  const double end = w.end();
  std::vector<Check> c;
  c.push_back(near("B2 voltage during the fault [pu]", w.mean("B2.V", 2.05, 2.099), 0.4, 0.05));
  double i_max = 0.0;
  for (const auto& id : gfm_loads(spec)) i_max = std::max(i_max, w.max(id + ".I", 0.0, end));
  c.push_back(at_most("largest GFM-load current [pu of rating]", i_max, 1.0));
  for (const char* id : {"GFM3", "GFM8", "GFM13"})
    c.push_back(below(std::string(id) + " power during the fault [pu]", w.mean(std::string(id) + ".P", 2.05, 2.099),
                      0.05));
  double settle = 0.0;
  for (const auto& id : gfm_loads(spec)) {
    const std::string ch = id + ".P";
    const double pre = w.mean(ch, 1.8, 1.99);
    const double band = 0.01 * std::max(std::abs(pre), 1.0);
    const auto& x = w.ch(ch);
    for (std::size_t k = x.size(); k-- > w.index(2.1);)
      if (std::abs(x[k] - pre) > band) {
        settle = std::max(settle, r.series.time(k) - 2.1);
        break;
      }
  }
  c.push_back(at_most("return to pre-fault state after clearing [s]", settle, 1.0));
  c.push_back(verdict(r, true));
  return c;
}

std::vector<Check> case4(const ScenarioSpec& spec, const simcore::RunResult& r) {
  Window w{r.series};
  std::vector<Check> c;
  const double events[] = {2.0, 6.0};
  for (const char* g : {"GEN5", "GEN9", "GEN13"}) {
    const std::string ch = std::string(g) + ".P";
    double dev = 0.0;
    for (double te : events) {
      const double before = w.mean(ch, te - 0.2, te - 0.001);
      const double after = w.mean(ch, te + 1.5, te + 1.999);
      dev = std::max(dev, std::abs(after - before) / std::abs(before));
    }
    c.push_back(below(ch + " change across the events (relative)", dev, 0.02));
  }
  for (const auto& id : gfm_loads(spec)) {
    const std::string ch = id + ".P";
    double worst = 1.0;
    for (double te : events) {
      const double before = w.mean(ch, te - 0.2, te - 0.001);
      const double settled = w.mean(ch, te + 0.5, te + 0.6);
      const double total = settled - before;
      const double at60 = w.at(ch, te + 0.06) - before;
      worst = std::min(worst, std::abs(total) > 1e-6 ? at60 / total : 1.0);
    }
    c.push_back(at_least(ch + " share of adjustment done 60 ms after each event", worst, 0.9));
  }
  for (const char* g : {"GEN5", "GEN9", "GEN13"}) {
    const auto& p = std::get<devices::SyncGenParams>(spec.device(g)->params);
    c.push_back(near(std::string(g) + " inertia constant [s]", p.h, 5.0, 0.0));
  }
  c.push_back(verdict(r, true));
  return c;
}

}  // namespace

std::vector<std::string> case_names() {
  return {"case1a", "case1b", "case1c", "case1d", "case2", "case3e", "case3f", "case4"};
}

ScenarioSpec case_spec(const std::string& name) {
  const auto& files = embedded_scenarios();
  auto it = files.find(name);
  if (it == files.end()) throw UnknownId(name);
  return parse_scenario(it->second);
}

std::string frequency_channel(const ScenarioSpec& spec) {
  if (!spec.outputs.frequency_channel.empty()) return spec.outputs.frequency_channel;
  for (const auto& d : spec.devices)
    if (is_forming_type(d)) return d.id + ".f";
  throw Error("no frequency channel");
}

bool CaseReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<Check> evaluate_case(const std::string& name, const ScenarioSpec& spec,
                                 const simcore::RunResult& result,
                                 const std::map<std::string, CaseReport>& reference) {
  if (name == "case1a") return case1a(spec, result);
  if (name == "case1b") return case1b(spec, result, reference);
  if (name == "case1c") return case1c(spec, result);
  if (name == "case1d") return case1d(spec, result);
  if (name == "case2") return case2(spec, result);
  if (name == "case3e") return case3e(spec, result);
  if (name == "case3f") return case3f(spec, result);
  if (name == "case4") return case4(spec, result);
  throw UnknownId(name);
}

CaseReport run_case(const std::string& name, std::optional<double> dt) {
  CaseReport rep;
  rep.name = name;
  rep.spec = case_spec(name);
  const auto t0 = std::chrono::steady_clock::now();
  rep.result = execute(rep.spec, dt);
  rep.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.metrics = extract_metrics(rep.result.series, frequency_channel(rep.spec), rep.spec.base.f_base(),
                                rep.result.verdict);
  std::map<std::string, CaseReport> ref;
  if (name == "case1b") ref.emplace("case1a", run_case("case1a", dt));
  rep.checks = evaluate_case(name, rep.spec, rep.result, ref);
  return rep;
}

std::string diff_report(const CaseReport& r) {
  std::ostringstream os;
  os << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << " (verdict "
     << simcore::to_string(r.result.verdict.kind);
  if (!r.result.verdict.detail.empty()) os << ", " << r.result.verdict.detail;
  os << ", " << fmt(r.runtime) << " s)\n";
  for (const auto& c : r.checks)
    os << "  [" << (c.pass ? "ok" : "MISMATCH") << "] " << c.what << ": measured " << fmt(c.measured)
       << ", expected " << c.expected << "\n";
  return os.str();
}

}  // namespace gridform::scenario
