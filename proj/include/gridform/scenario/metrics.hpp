#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridform/simcore/engine.hpp"
#include "gridform/simcore/time_series.hpp"

namespace gridform::scenario {

struct Extrema {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const Extrema&) const = default;
};

struct RunMetrics {
  std::string frequency_channel;
  double nadir_hz = 0.0;       // minimum of the frequency channel
  double max_rocof = 0.0;      // Hz/s, 20 ms centered differences
  double settling_time = 0.0;  // s, latest over the settling channels
  std::map<std::string, double> settling;      // per P channel and the frequency channel
  std::map<std::string, Extrema> voltage;      // per "<bus>.V"
  std::map<std::string, double> max_current;   // per "<device>.I", device rating
  std::string verdict = "stable";
  double t_diverge = 0.0;
  bool operator==(const RunMetrics&) const = default;
};

/// Metrics from a series as stored on disk (values and step at 6 significant
/// digits), so a run and its saved CSV give identical numbers.
RunMetrics extract_metrics(const simcore::TimeSeries& series, const std::string& frequency_channel,
                           double f_base, const simcore::RunVerdict& verdict = {});

/// Largest |df/dt| using centered differences across `window` seconds.
double max_rocof(const std::vector<double>& f, double dt, double window = 0.02);

/// Time after which the signal stays within `band` of the mean of its final
/// `tail` seconds. Zero when it never leaves.
double settling_time(const std::vector<double>& x, double dt, double band, double tail = 0.5);

std::string metrics_json(const RunMetrics& m);

}  // namespace gridform::scenario
