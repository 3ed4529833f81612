#include "gridform/simcore/device.hpp"

#include <algorithm>

#include "gridform/simcore/errors.hpp"

namespace gridform::simcore {

void Device::handle(const EventAction& action, std::span<double>, const StageContext&,
                    const PortSolution&) {
  throw Error("device " + id_ + " (" + kind() + ") does not accept " + describe(action));
}

double Device::injected_power(const PortSolution& port) const {
  double p = 0.0;
  for (auto i : port.norton_current) p += std::real(port.v_bus * std::conj(i));
  for (auto i : port.ideal_current) p += std::real(port.v_bus * std::conj(i));
  for (auto i : port.power_current) p += std::real(port.v_bus * std::conj(i));
  for (auto i : port.fixed_current) p += std::real(port.v_bus * std::conj(i));
  return p;
}

double Ramp::at(double t) const {
  if (t >= t1_ || t1_ <= t0_) return t >= t0_ ? to_ : from_;
  if (t <= t0_) return from_;
  return from_ + (to_ - from_) * (t - t0_) / (t1_ - t0_);
}

void Ramp::retarget(double t_now, double target, double duration) {
  if (duration < 0.0) throw Error("ramp duration must be non-negative");
  from_ = at(t_now);
  to_ = target;
  t0_ = t_now;
  t1_ = t_now + duration;
}

}  // namespace gridform::simcore
