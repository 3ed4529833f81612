#include "gridform/simcore/time_series.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "gridform/simcore/errors.hpp"

namespace gridform::simcore {

namespace {
std::string format6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
}  // namespace

double quantize6(double v) { return std::strtod(format6(v).c_str(), nullptr); }

TimeSeries::TimeSeries(double dt, std::string scenario_id)
    : dt_(dt), scenario_id_(std::move(scenario_id)) {
  if (!(dt > 0.0)) throw Error("time series dt must be positive");
}

void TimeSeries::add_channel(const std::string& name) {
  if (samples_ != 0) throw Error("cannot add channel '" + name + "' after sampling began");
  channels_.emplace(name, std::vector<double>{});
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
  auto it = channels_.find(name);
  if (it == channels_.end()) throw Error("missing channel: " + name);
  return it->second;
}

std::vector<std::string> TimeSeries::channel_names() const {
  std::vector<std::string> names;
  names.reserve(channels_.size());
  for (const auto& [name, _] : channels_) names.push_back(name);
  return names;
}

void TimeSeries::append(const std::vector<double>& values) {
  if (values.size() != channels_.size()) throw Error("sample width does not match channels");
  std::size_t i = 0;
  for (auto& [_, data] : channels_) data.push_back(values[i++]);
  ++samples_;
}

void TimeSeries::append(const std::map<std::string, double>& values) {
  if (values.size() != channels_.size()) throw Error("sample width does not match channels");
  for (auto& [name, data] : channels_) {
    auto it = values.find(name);
    if (it == values.end()) throw Error("sample lacks channel: " + name);
    data.push_back(it->second);
  }
  ++samples_;
}

bool TimeSeries::has_nan() const {
  for (const auto& [_, data] : channels_)
    for (double v : data)
      if (std::isnan(v)) return true;
  return false;
}

TimeSeries TimeSeries::quantized() const {
  TimeSeries out = *this;
  out.dt_ = quantize6(dt_);
  for (auto& [_, data] : out.channels_)
    for (double& v : data) v = quantize6(v);
  return out;
}

void TimeSeries::write_csv(std::ostream& os) const {
  os << "time";
  for (const auto& [name, _] : channels_) os << ',' << name;
  os << '\n';
  const double dtq = quantize6(dt_);
  for (std::size_t k = 0; k < samples_; ++k) {
    os << format6(static_cast<double>(k) * dtq);
    for (const auto& [_, data] : channels_) os << ',' << format6(data[k]);
    os << '\n';
  }
}

TimeSeries TimeSeries::read_csv(std::istream& is, std::string scenario_id) {
  std::string line;
  if (!std::getline(is, line)) throw Error("empty time-series CSV");
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  if (names.empty() || names.front() != "time") throw Error("CSV header must start with 'time'");
  names.erase(names.begin());

  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != names.size() + 1) throw Error("CSV row width mismatch");
    times.push_back(row.front());
    row.erase(row.begin());
    rows.push_back(std::move(row));
  }
  const double dt = times.size() >= 2 ? quantize6(times[1] - times[0]) : 1.0;
  TimeSeries ts(dt, std::move(scenario_id));
  for (const auto& n : names) ts.add_channel(n);
  for (const auto& row : rows) {
    std::map<std::string, double> sample;
    for (std::size_t i = 0; i < names.size(); ++i) sample[names[i]] = row[i];
    ts.append(sample);
  }
  return ts;
}

}  // namespace gridform::simcore
