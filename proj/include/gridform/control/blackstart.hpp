#pragma once

#include <string>
#include <vector>

#include "gridform/simcore/events.hpp"

namespace gridform::control {

enum class BlackstartPhase {
  voltage_ramp,  // power loops disconnected, voltage references ramping
  forming,       // both units forming at nominal voltage, power loops still open
  power_loops,   // droops engaged, setpoints ramping
  handover,      // renewable switched to grid-following, load keeps forming
};

const char* to_string(BlackstartPhase phase);

/// Timeline of a load-assisted black start with a paired forming renewable.
struct BlackstartPlan {
  std::string load_device;
  std::string renewable_device;
  double t_start = 0.0;
  double voltage_ramp = 5.0;   // s to reach nominal voltage
  double t_engage = 7.0;       // power loops engaged
  double setpoint_ramp = 3.0;  // s to reach the load setpoint
  double load_setpoint = 0.5;  // pu consumed by the load after engagement
  double t_handover = 12.0;    // renewable switches to grid-following
  double v_nominal = 1.0;

  bool operator==(const BlackstartPlan&) const = default;
};

struct BlackstartCommand {
  BlackstartPhase phase = BlackstartPhase::voltage_ramp;
  double v_ref = 0.0;
  bool power_loops = false;
  double load_p_ref = 0.0;
  bool renewable_forming = true;
};

class BlackstartSequence {
 public:
  /// Throws SequenceViolation if the plan engages the power loops before the
  /// voltage ramp has reached nominal, or hands over before engagement.
  explicit BlackstartSequence(BlackstartPlan plan);

  const BlackstartPlan& plan() const { return plan_; }

  /// Mode and references at time t.
  BlackstartCommand at(double t) const;

  /// The plan as scenario events.
  std::vector<simcore::SimEvent> events() const;

  /// Runtime guard used when a converter is asked to engage its power loops.
  static void check_engage(double v_measured, double v_nominal, double tolerance = 0.05);

 private:
  BlackstartPlan plan_;
};

}  // namespace gridform::control
