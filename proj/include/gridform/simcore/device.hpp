#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gridform/network/network.hpp"
#include "gridform/simcore/dq.hpp"
#include "gridform/simcore/events.hpp"

namespace gridform::simcore {

struct StageContext {
  double t = 0.0;
  double omega_base = 314.159;  // rad/s
  double f_base = 50.0;         // Hz
  bool settling = false;        // initialization pre-run
};

/// Network results seen by one device at one integration stage.
struct PortSolution {
  Phasor v_bus;
  std::span<const Phasor> norton_current;  // injected into the bus
  std::span<const Phasor> ideal_current;
  std::span<const Phasor> power_current;
  std::span<const Phasor> fixed_current;
};

using Channels = std::map<std::string, double>;

/// A dynamic device attached to one bus.
///
/// Continuous state lives in the engine's state vector; a device only keeps
/// discrete state (modes, reference ramps, monitor timers), which changes at
/// step boundaries through handle() and after_step().
class Device {
 public:
  Device(std::string id, std::size_t bus) : id_(std::move(id)), bus_(bus) {}
  virtual ~Device() = default;

  const std::string& id() const { return id_; }
  std::size_t bus() const { return bus_; }

  virtual std::string kind() const = 0;
  virtual std::size_t state_size() const = 0;
  virtual void initialize(std::span<double> x) const = 0;

  /// Append the device's structural network contribution.
  virtual void structure(network::Structure& st) const = 0;
  /// Append the device's per-stage network inputs, matching structure().
  virtual void stage_inputs(std::span<const double> x, const StageContext& ctx,
                            network::StageInputs& in) const = 0;
  virtual void derivatives(std::span<const double> x, const StageContext& ctx,
                           const PortSolution& port, std::span<double> dx) const = 0;

  /// Channel names this device reports, without the device prefix.
  virtual std::vector<std::string> channels() const = 0;
  virtual void outputs(std::span<const double> x, const StageContext& ctx,
                       const PortSolution& port, Channels& out) const = 0;

  /// Set-reference and switch-mode events. Throws on unknown names.
  virtual void handle(const EventAction& action, std::span<double> x, const StageContext& ctx,
                      const PortSolution& port);

  /// Discrete bookkeeping once a step has been accepted.
  virtual void after_step(std::span<double> /*x*/, const StageContext& /*ctx*/, double /*dt*/,
                          const PortSolution& /*port*/) {}

  /// Called when the initialization pre-run ends.
  virtual void end_settle(std::span<double> /*x*/, const StageContext& /*ctx*/,
                          const PortSolution& /*port*/) {}

  /// Active power injected into the network at the device bus [pu].
  double injected_power(const PortSolution& port) const;

 private:
  std::string id_;
  std::size_t bus_;
};

/// Piecewise-linear reference: holds a value and ramps to new targets.
class Ramp {
 public:
  explicit Ramp(double value = 0.0) : from_(value), to_(value) {}

  double at(double t) const;
  double target() const { return to_; }
  /// Start a ramp from the value at `t_now` to `target` over `duration` s.
  void retarget(double t_now, double target, double duration);

 private:
  double from_;
  double to_;
  double t0_ = 0.0;
  double t1_ = 0.0;
};

}  // namespace gridform::simcore
