#pragma once

#include "gridform/simcore/dq.hpp"

namespace gridform::control {

using simcore::DqPair;

/// Gains of the cascaded AC-voltage and current PI loops.
///
/// `l_f` and `c_f` are the coefficients of the filter equations in seconds
/// (L di/dt, C dv/dt with per-unit quantities), i.e. the per-unit reactance
/// or susceptance divided by the base angular frequency. `r_f` is per unit.
struct CascadeGains {
  double k_pc = 0.0;
  double k_ic = 0.0;
  double k_pv = 0.0;
  double k_iv = 0.0;
  double l_f = 0.0;
  double r_f = 0.0;
  double c_f = 0.0;
  double tau_s = 0.002;
  double d_v = 0.707;
  double omega_v = 0.0;  // rad/s

  /// Filter-impedance tuning with the voltage bandwidth 10*2*pi/tau_s.
  static CascadeGains tuned(double l_f, double r_f, double c_f, double tau_s, double d_v = 0.707);

  /// Same tuning with an explicit voltage-loop bandwidth [rad/s].
  static CascadeGains tuned_with_bandwidth(double l_f, double r_f, double c_f, double tau_s,
                                           double d_v, double omega_v);
};

/// Voltage PI with capacitor decoupling. `omega` is the frame speed in
/// rad/s; the result is the unsaturated current reference.
DqPair voltage_loop(DqPair v_ref, DqPair v_meas, double omega, const CascadeGains& gains,
                    DqPair integral);

/// d/dt of the voltage-loop integrator.
DqPair voltage_loop_integrand(DqPair v_ref, DqPair v_meas, const CascadeGains& gains);

/// Limit a current reference to rated magnitude while keeping its angle.
///
/// phi = atan2(i_q, i_d); the q and d components are clamped to
/// +/- i_n|sin phi| and +/- i_n|cos phi|. A zero input is returned as is.
DqPair saturate_current(DqPair i_ref, double i_n);

/// Current PI with inductor decoupling and capacitor-voltage feed-forward.
/// Returns the modulation voltage.
DqPair current_loop(DqPair i_ref, DqPair i_meas, DqPair v_cap, double omega,
                    const CascadeGains& gains, DqPair integral);

/// d/dt of the current-loop integrator.
DqPair current_loop_integrand(DqPair i_ref, DqPair i_meas, const CascadeGains& gains);

/// j*omega*x in the q - j d phasor convention.
inline DqPair rotate_quarter(DqPair x, double scale) { return {scale * x.d, -scale * x.q}; }

}  // namespace gridform::control
