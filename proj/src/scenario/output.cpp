#include "gridform/scenario/output.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "gridform/simcore/errors.hpp"

namespace gridform::scenario {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw Error("cannot write " + p.string());
  return os;
}

}  // namespace

OutputPaths write_outputs(const std::filesystem::path& dir, const std::string& stem,
                          const simcore::TimeSeries& series, const RunMetrics& metrics,
                          bool plot_data) {
  std::filesystem::create_directories(dir);
  OutputPaths paths{dir / (stem + ".csv"), dir / (stem + "_metrics.json"), {}};
  {
    auto os = open_out(paths.csv);
    series.write_csv(os);
  }
  {
    auto os = open_out(paths.metrics);
    os << metrics_json(metrics) << "\n";
  }
  if (plot_data) {
    // Decimated column arrays for external plotting tools.
    const auto q = series.quantized();
    const std::size_t every = std::max<std::size_t>(1, static_cast<std::size_t>(0.01 / q.dt() + 0.5));
    nlohmann::json j;
    std::vector<double> t;
    for (std::size_t k = 0; k < q.size(); k += every) t.push_back(simcore::quantize6(q.time(k)));
    j["time"] = t;
    for (const auto& name : q.channel_names()) {
      std::vector<double> v;
      const auto& x = q.channel(name);
      for (std::size_t k = 0; k < x.size(); k += every) v.push_back(x[k]);
      j["channels"][name] = v;
    }
    paths.plot = dir / (stem + "_plot.json");
    auto os = open_out(paths.plot);
    os << j.dump() << "\n";
  }
  return paths;
}

std::filesystem::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("GRIDFORM_OUT"); env && *env) return env;
  return "out";
}

}  // namespace gridform::scenario
