#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gridform::simcore {

/// Uniformly sampled named channels. Sample k is at time k*dt.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(double dt, std::string scenario_id = {});

  double dt() const { return dt_; }
  const std::string& scenario_id() const { return scenario_id_; }
  std::size_t size() const { return samples_; }
  double time(std::size_t k) const { return static_cast<double>(k) * dt_; }

  /// Declare a channel. Only valid before the first sample is appended.
  void add_channel(const std::string& name);
  bool has(const std::string& name) const { return channels_.count(name) != 0; }
  const std::vector<double>& channel(const std::string& name) const;
  std::vector<std::string> channel_names() const;

  /// Append one sample. `values` must hold one entry per channel, in name order.
  void append(const std::vector<double>& values);
  void append(const std::map<std::string, double>& values);

  bool has_nan() const;

  /// Values rounded to the 6 significant digits used on disk.
  TimeSeries quantized() const;

  void write_csv(std::ostream& os) const;
  static TimeSeries read_csv(std::istream& is, std::string scenario_id = {});

 private:
  double dt_ = 1.0;
  std::string scenario_id_;
  std::size_t samples_ = 0;
  std::map<std::string, std::vector<double>> channels_;
};

/// Round to 6 significant decimal digits, exactly as the CSV writer does.
double quantize6(double v);

}  // namespace gridform::simcore
