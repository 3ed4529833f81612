#include "gridform/scenario/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "gridform/simcore/errors.hpp"

namespace gridform::scenario {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

double tail_mean(const std::vector<double>& x, double dt, double tail) {
  const auto n = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(tail / dt)), 1, x.size());
  double s = 0.0;
  for (std::size_t k = x.size() - n; k < x.size(); ++k) s += x[k];
  return s / static_cast<double>(n);
}

}  // namespace

double max_rocof(const std::vector<double>& f, double dt, double window) {
  const auto half = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window / (2.0 * dt))));
  double best = 0.0;
  for (std::size_t k = half; k + half < f.size(); ++k)
    best = std::max(best, std::abs(f[k + half] - f[k - half]) / (2.0 * static_cast<double>(half) * dt));
  return best;
}

double settling_time(const std::vector<double>& x, double dt, double band, double tail) {
  if (x.empty()) return 0.0;
  const double ref = tail_mean(x, dt, tail);
  for (std::size_t k = x.size(); k-- > 0;)
    if (std::abs(x[k] - ref) > band) return static_cast<double>(k + 1) * dt;
  return 0.0;
}

RunMetrics extract_metrics(const simcore::TimeSeries& raw, const std::string& frequency_channel,
                           double f_base, const simcore::RunVerdict& verdict) {
  if (!raw.has(frequency_channel)) throw Error("missing channel: " + frequency_channel);
  const auto series = raw.quantized();
  const double dt = simcore::quantize6(series.dt());
  RunMetrics m;
  m.frequency_channel = frequency_channel;
  m.verdict = simcore::to_string(verdict.kind);
  m.t_diverge = verdict.t_diverge;

  const auto& f = series.channel(frequency_channel);
  if (!f.empty()) {
    m.nadir_hz = *std::min_element(f.begin(), f.end());
    m.max_rocof = max_rocof(f, dt);
    const double s = settling_time(f, dt, 0.01 * std::max(std::abs(tail_mean(f, dt, 0.5)), f_base));
    m.settling[frequency_channel] = s;
  }
  for (const auto& name : series.channel_names()) {
    const auto& x = series.channel(name);
    if (x.empty()) continue;
    if (ends_with(name, ".V")) {
      const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      m.voltage[name] = {*lo, *hi};
    } else if (ends_with(name, ".I")) {
      m.max_current[name] = *std::max_element(x.begin(), x.end());
    } else if (ends_with(name, ".P")) {
      m.settling[name] = settling_time(x, dt, 0.01 * std::max(std::abs(tail_mean(x, dt, 0.5)), 1.0));
    }
  }
  for (const auto& [_, s] : m.settling) m.settling_time = std::max(m.settling_time, s);
  return m;
}

std::string metrics_json(const RunMetrics& m) {
  nlohmann::json j;
  j["frequency_channel"] = m.frequency_channel;
  j["nadir_hz"] = m.nadir_hz;
  j["max_rocof_hz_per_s"] = m.max_rocof;
  j["settling_time_s"] = m.settling_time;
  j["settling_s"] = m.settling;
  for (const auto& [k, v] : m.voltage) j["voltage"][k] = {{"min", v.min}, {"max", v.max}};
  j["max_current"] = m.max_current;
  j["verdict"] = m.verdict;
  j["t_diverge"] = m.t_diverge;
  return j.dump(2);
}

}  // namespace gridform::scenario
