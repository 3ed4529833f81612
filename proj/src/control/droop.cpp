#include "gridform/control/droop.hpp"

#include <algorithm>
#include <cmath>

#include "gridform/simcore/errors.hpp"

namespace gridform::control {

DroopParams DroopParams::auto_tuned(double s_n, double tau_p, double tau_q, double omega_n,
                                    double v_n) {
  if (!(s_n > 0.0) || !(tau_p > 0.0) || !(tau_q > 0.0))
    throw Error("droop rating and filter time constants must be positive");
  DroopParams p;
  p.s_n = s_n;
  p.omega_n = omega_n;
  p.v_n = v_n;
  p.tau_p = tau_p;
  p.tau_q = tau_q;
  p.k_p = 0.02 * omega_n / s_n;
  p.k_q = 0.1 * v_n / s_n;
  return p;
}

void LowPass::advance(double input, double tau, double dt) {
  state = input + (state - input) * std::exp(-dt / tau);
}

double active_droop(double p_filtered, double p_star, const DroopParams& params) {
  return params.k_p * (p_star - p_filtered) + params.omega_n;
}

double reactive_droop(double q_filtered, double q_star, const DroopParams& params) {
  return params.k_q * (q_star - q_filtered) + params.v_n;
}

RateLimiter::RateLimiter(double rocof_max, double f_base) : limit_(rocof_max / f_base) {
  if (!(rocof_max > 0.0) || !(f_base > 0.0)) throw Error("ROCOF limit must be positive");
}

double RateLimiter::derivative(double target, double current, double tau) const {
  return std::clamp((target - current) / tau, -limit_, limit_);
}

double RateLimiter::step(double target, double current, double dt) const {
  const double max_move = limit_ * dt;
  return current + std::clamp(target - current, -max_move, max_move);
}

}  // namespace gridform::control
