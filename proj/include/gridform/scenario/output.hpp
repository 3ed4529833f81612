#pragma once

#include <filesystem>
#include <string>

#include "gridform/scenario/metrics.hpp"
#include "gridform/simcore/time_series.hpp"

namespace gridform::scenario {

struct OutputPaths {
  std::filesystem::path csv;
  std::filesystem::path metrics;
  std::filesystem::path plot;  // empty unless plot data was requested
};

/// Write <stem>.csv and <stem>_metrics.json, plus <stem>_plot.json when asked.
OutputPaths write_outputs(const std::filesystem::path& dir, const std::string& stem,
                          const simcore::TimeSeries& series, const RunMetrics& metrics,
                          bool plot_data = false);

/// Output directory: explicit flag, then GRIDFORM_OUT, then "out".
std::filesystem::path output_dir(const std::string& flag);

}  // namespace gridform::scenario
