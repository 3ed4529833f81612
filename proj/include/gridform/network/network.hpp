#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridform/simcore/dq.hpp"
#include "gridform/simcore/events.hpp"

namespace gridform::network {

using simcore::Phasor;

struct Bus {
  std::string id;
  double v_nominal = 1.0;
  std::optional<Phasor> fault;  // shunt fault impedance, when applied
  bool operator==(const Bus&) const = default;
};

/// Series r + jx branch with optional total line charging b, behind a breaker.
struct Line {
  std::string id;
  std::string from;
  std::string to;
  double r = 0.0;
  double x = 0.0;
  double b = 0.0;
  bool closed = true;
  bool operator==(const Line&) const = default;
};

/// Buses connected through closed branches.
struct Island {
  std::vector<std::size_t> buses;
  bool has_forming = false;
  bool energized = false;
};

class Network {
 public:
  std::size_t add_bus(Bus bus);
  void add_line(Line line);

  std::size_t bus_count() const { return buses_.size(); }
  std::size_t bus_index(const std::string& id) const;
  const Bus& bus(std::size_t i) const { return buses_[i]; }
  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Line>& lines() const { return lines_; }
  const Line& line(const std::string& id) const;

  void open_breaker(const std::string& line);
  void close_breaker(const std::string& line);
  void apply_fault(const std::string& bus, Phasor z);
  void clear_fault(const std::string& bus);

  /// Apply a topology event. Returns false for actions that are not topological.
  bool apply(const simcore::EventAction& action);

  /// Incremented on every topology change.
  unsigned version() const { return version_; }

  /// Node admittance of lines and faults only.
  Eigen::MatrixXcd admittance() const;
  std::string admittance_json() const;

  /// Connected components over closed branches. `forming` and `sources`
  /// mark buses hosting voltage-forming devices and any active device.
  std::vector<Island> detect_islands(const std::vector<bool>& forming,
                                     const std::vector<bool>& sources) const;

 private:
  Line& mutable_line(const std::string& id);

  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  std::unordered_map<std::string, std::size_t> bus_index_;
  unsigned version_ = 0;
};

/// Constant admittance to ground contributed by a device. A `virtual_` shunt
/// is only a preconditioner: it enters the matrix and is compensated on the
/// right-hand side, so it draws no net current.
struct Shunt {
  std::size_t bus = 0;
  Phasor y;
  bool virtual_ = false;
  bool operator==(const Shunt&) const = default;
};

/// Voltage-forming source: emf behind impedance z.
struct Norton {
  std::size_t bus = 0;
  Phasor z;
  bool operator==(const Norton&) const = default;
};

/// Device-side structure of the network equations, stable between events.
struct Structure {
  std::vector<Shunt> shunts;
  std::vector<Norton> nortons;
  std::vector<std::size_t> ideal_sources;  // stiff voltage buses
  std::vector<std::size_t> source_buses;   // non-forming active devices
  bool operator==(const Structure&) const = default;
};

/// Constant-power element; s is injected power (negative real part consumes).
/// Below v_threshold it degrades to constant impedance; |i| is capped at i_max
/// when i_max > 0.
struct PowerElement {
  std::size_t bus = 0;
  Phasor s;
  double v_threshold = 0.3;
  double i_max = 0.0;
};

struct StageInputs {
  std::vector<Phasor> norton_emf;  // one per Structure::nortons
  std::vector<Phasor> ideal_v;     // one per Structure::ideal_sources
  std::vector<std::pair<std::size_t, Phasor>> currents;  // fixed injections
  std::vector<PowerElement> powers;
};

struct Solution {
  std::vector<Phasor> v;               // per bus
  std::vector<Phasor> norton_current;  // injected into the bus
  std::vector<Phasor> ideal_current;   // injected into the bus
  std::vector<Phasor> power_current;   // injected into the bus
  std::vector<Phasor> fixed_current;   // per StageInputs::currents, zero when de-energized
  int iterations = 0;
  double kcl_residual = 0.0;
};

/// Current drawn into the network by a power element at voltage v.
Phasor power_element_current(const PowerElement& e, Phasor v);

/// Algebraic network solver with a cached factorization per topology and
/// device structure.
class Solver {
 public:
  Solution solve(const Network& net, const Structure& structure, const StageInputs& in,
                 const std::vector<Phasor>* warm_start = nullptr);

  double tolerance = 1e-12;
  int max_iterations = 200;  // fixed-point sweeps before switching to Newton
  int newton_iterations = 50;

 private:
  void refactor(const Network& net, const Structure& structure);
  /// Newton on the reduced system, real 2n form. Returns false if it fails.
  bool newton(std::vector<Phasor>& v, const std::vector<Phasor>& fixed,
              const Eigen::VectorXcd& coupling, const StageInputs& in, int& iterations) const;

  bool valid_ = false;
  unsigned net_version_ = 0;
  Structure structure_;
  std::vector<int> unknown_index_;  // bus -> row in reduced system, -1 if known/dead
  std::vector<bool> energized_;
  std::vector<bool> ideal_bus_;
  Eigen::MatrixXcd y_full_;
  Eigen::MatrixXcd y_uk_;
  Eigen::MatrixXcd y_uu_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  std::vector<std::size_t> unknown_buses_;
  std::vector<std::size_t> known_buses_;
};

}  // namespace gridform::network
