#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridform/network/network.hpp"
#include "gridform/simcore/device.hpp"
#include "gridform/simcore/events.hpp"
#include "gridform/simcore/time_series.hpp"

namespace gridform::simcore {

struct EngineConfig {
  double dt = 1e-4;
  double f_base = 50.0;
  double divergence_threshold = 1e6;
};

/// Fixed-step RK4 over all device states with the network solved
/// algebraically at every stage.
class Simulator {
 public:
  Simulator(network::Network net, std::vector<std::unique_ptr<Device>> devices,
            EngineConfig config = {});

  /// Initialization pre-run of `duration` seconds ending at t = 0. Events are
  /// not processed; devices see `settling` in their stage context.
  void settle(double duration);

  void schedule(std::vector<SimEvent> events);

  /// Fire events due at the current boundary, then advance one step.
  /// Throws NumericalDivergence when a state leaves the threshold.
  void step();

  double time() const { return static_cast<double>(step_) * config_.dt; }
  const EngineConfig& config() const { return config_; }
  const network::Network& network() const { return net_; }
  const std::vector<double>& state() const { return x_; }

  std::size_t device_count() const { return devices_.size(); }
  const Device& device(std::size_t i) const { return *devices_[i]; }
  const Device& device(const std::string& id) const;
  std::span<const double> device_state(const std::string& id) const;

  /// Network solution and per-device port at the current state.
  const network::Solution& solution();
  PortSolution port(std::size_t device);

  /// "<device>.<channel>" and "<bus>.V" names, sorted.
  std::vector<std::string> channel_names() const;
  Channels sample();

  /// Active power injected by all devices, and dissipated in lines and faults.
  struct Balance {
    double injected = 0.0;
    double losses = 0.0;
  };
  Balance power_balance();

  /// Deterministic state derivative at the current time (for tests).
  std::vector<double> derivative();

 private:
  struct Layout {
    std::size_t offset = 0, size = 0;
    std::size_t norton = 0, n_norton = 0;
    std::size_t ideal = 0, n_ideal = 0;
    std::size_t power = 0, n_power = 0;
    std::size_t current = 0, n_current = 0;
  };

  StageContext context(double t) const;
  /// Solve the network for state x at time t and record the port layout.
  network::Solution solve_at(const std::vector<double>& x, double t);
  void derivatives_at(const std::vector<double>& x, double t, const network::Solution& sol,
                      std::vector<double>& dx) const;
  PortSolution port_of(std::size_t device, const network::Solution& sol) const;
  void advance();
  void check_divergence(const std::vector<double>& x, double t) const;
  std::size_t index_of(const std::string& id) const;

  network::Network net_;
  std::vector<std::unique_ptr<Device>> devices_;
  EngineConfig config_;
  std::vector<Layout> layout_;
  std::vector<double> x_;
  long long step_ = 0;
  bool settling_ = false;
  network::Solver solver_;
  std::optional<network::Solution> cached_;
  std::vector<network::Phasor> warm_;
  std::optional<EventQueue> queue_;
};

struct ChannelLimit {
  std::string channel;
  double lo = -1e300;
  double hi = 1e300;
  double hold = 0.0;  // s outside the band before it counts
  double after = 0.0; // monitoring starts at this time

  bool operator==(const ChannelLimit&) const = default;
};

struct RunPlan {
  std::string scenario_id;
  double duration = 0.0;
  double settle = 0.0;
  double sample_interval = 1e-3;
  std::vector<SimEvent> events;
  std::vector<ChannelLimit> limits;
  std::vector<std::string> channels;  // recorded channels; empty records all
};

struct RunVerdict {
  enum class Kind { stable, unstable, limit_violation };
  Kind kind = Kind::stable;
  double t_diverge = 0.0;
  std::string detail;
};

std::string to_string(RunVerdict::Kind kind);

struct RunResult {
  TimeSeries series;
  RunVerdict verdict;
};

/// Execute a plan on a freshly built simulator. Divergence, islands without a
/// forming source and network collapse become an unstable verdict.
RunResult run(Simulator& sim, const RunPlan& plan);

}  // namespace gridform::simcore
