#include "gridform/control/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridform/simcore/errors.hpp"

namespace gridform::control {

CascadeGains CascadeGains::tuned(double l_f, double r_f, double c_f, double tau_s, double d_v) {
  return tuned_with_bandwidth(l_f, r_f, c_f, tau_s, d_v, 10.0 * 2.0 * std::numbers::pi / tau_s);
}

CascadeGains CascadeGains::tuned_with_bandwidth(double l_f, double r_f, double c_f, double tau_s,
                                                double d_v, double omega_v) {
  if (!(l_f > 0.0) || !(r_f >= 0.0) || !(c_f > 0.0) || !(tau_s > 0.0) || !(d_v > 0.0) ||
      !(omega_v > 0.0))
    throw Error("cascade tuning needs positive filter values, tau_s, damping and bandwidth");
  CascadeGains g;
  g.l_f = l_f;
  g.r_f = r_f;
  g.c_f = c_f;
  g.tau_s = tau_s;
  g.d_v = d_v;
  g.omega_v = omega_v;
  g.k_pc = l_f / tau_s;
  g.k_ic = r_f / tau_s;
  g.k_pv = 2.0 * c_f * d_v * omega_v;
  g.k_iv = omega_v * omega_v * c_f;
  return g;
}

DqPair voltage_loop(DqPair v_ref, DqPair v_meas, double omega, const CascadeGains& gains,
                    DqPair integral) {
  const DqPair e = v_ref - v_meas;
  return gains.k_pv * e + integral + rotate_quarter(v_meas, omega * gains.c_f);
}

DqPair voltage_loop_integrand(DqPair v_ref, DqPair v_meas, const CascadeGains& gains) {
  return gains.k_iv * (v_ref - v_meas);
}

DqPair saturate_current(DqPair i_ref, double i_n) {
  if (!(i_n > 0.0)) throw Error("rated current must be positive");
  if (i_ref.q == 0.0 && i_ref.d == 0.0) return i_ref;
  const double phi = std::atan2(i_ref.q, i_ref.d);
  const double lim_q = i_n * std::abs(std::sin(phi));
  const double lim_d = i_n * std::abs(std::cos(phi));
  return {std::clamp(i_ref.q, -lim_q, lim_q), std::clamp(i_ref.d, -lim_d, lim_d)};
}

DqPair current_loop(DqPair i_ref, DqPair i_meas, DqPair v_cap, double omega,
                    const CascadeGains& gains, DqPair integral) {
  const DqPair e = i_ref - i_meas;
  return gains.k_pc * e + integral + v_cap + rotate_quarter(i_meas, omega * gains.l_f);
}

DqPair current_loop_integrand(DqPair i_ref, DqPair i_meas, const CascadeGains& gains) {
  return gains.k_ic * (i_ref - i_meas);
}

}  // namespace gridform::control
