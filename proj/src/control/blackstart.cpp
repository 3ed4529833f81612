#include "gridform/control/blackstart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridform/simcore/errors.hpp"

namespace gridform::control {

const char* to_string(BlackstartPhase phase) {
  switch (phase) {
    case BlackstartPhase::voltage_ramp: return "voltage_ramp";
    case BlackstartPhase::forming: return "forming";
    case BlackstartPhase::power_loops: return "power_loops";
    case BlackstartPhase::handover: return "handover";
  }
  return "unknown";
}

BlackstartSequence::BlackstartSequence(BlackstartPlan plan) : plan_(std::move(plan)) {
  if (plan_.voltage_ramp < 0.0 || plan_.setpoint_ramp < 0.0)
    throw Error("black-start ramp durations must be non-negative");
  if (plan_.t_engage < plan_.t_start + plan_.voltage_ramp)
    throw SequenceViolation("power loops engaged before the voltage ramp reaches nominal");
  if (plan_.t_handover < plan_.t_engage)
    throw SequenceViolation("renewable handover scheduled before the power loops engage");
}

BlackstartCommand BlackstartSequence::at(double t) const {
  const auto& p = plan_;
  BlackstartCommand c;
  if (p.voltage_ramp <= 0.0) {
    c.v_ref = t >= p.t_start ? p.v_nominal : 0.0;
  } else {
    c.v_ref = p.v_nominal * std::clamp((t - p.t_start) / p.voltage_ramp, 0.0, 1.0);
  }
  const double t_nominal = p.t_start + p.voltage_ramp;
  if (t < t_nominal) {
    c.phase = BlackstartPhase::voltage_ramp;
  } else if (t < p.t_engage) {
    c.phase = BlackstartPhase::forming;
  } else if (t < p.t_handover) {
    c.phase = BlackstartPhase::power_loops;
  } else {
    c.phase = BlackstartPhase::handover;
  }
  c.power_loops = t >= p.t_engage;
  if (c.power_loops) {
    const double frac =
        p.setpoint_ramp <= 0.0 ? 1.0 : std::clamp((t - p.t_engage) / p.setpoint_ramp, 0.0, 1.0);
    c.load_p_ref = frac * p.load_setpoint;
  }
  c.renewable_forming = t < p.t_handover;
  return c;
}

std::vector<simcore::SimEvent> BlackstartSequence::events() const {
  using namespace simcore;
  const auto& p = plan_;
  std::vector<SimEvent> ev;
  ev.push_back({p.t_start, SetReference{p.load_device, "v_ref", p.v_nominal, p.voltage_ramp}});
  ev.push_back({p.t_start, SetReference{p.renewable_device, "v_ref", p.v_nominal, p.voltage_ramp}});
  ev.push_back({p.t_engage, SwitchMode{p.load_device, "droop"}});
  ev.push_back({p.t_engage, SwitchMode{p.renewable_device, "droop"}});
  ev.push_back({p.t_engage, SetReference{p.load_device, "p_ref", p.load_setpoint, p.setpoint_ramp}});
  ev.push_back(
      {p.t_engage, SetReference{p.renewable_device, "p_ref", p.load_setpoint, p.setpoint_ramp}});
  ev.push_back({p.t_handover, SwitchMode{p.renewable_device, "mppt"}});
  return ev;
}

void BlackstartSequence::check_engage(double v_measured, double v_nominal, double tolerance) {
  if (std::abs(v_measured - v_nominal) > tolerance * v_nominal) {
    std::ostringstream os;
    os << "power loops engaged at voltage " << v_measured << " pu, nominal " << v_nominal;
    throw SequenceViolation(os.str());
  }
}

}  // namespace gridform::control
