#pragma once

namespace gridform::control {

/// Power droop settings, per unit on the study base.
///
/// Powers follow the source (injection) convention: a load that consumes
/// 0.6 pu has P = -0.6. With that convention the same law serves loads and
/// generators, and a load consumes less when frequency falls.
struct DroopParams {
  double k_p = 0.02;    // pu frequency per pu power
  double k_q = 0.1;     // pu voltage per pu reactive power
  double tau_p = 0.01;  // s, H_p(s) = 1/(tau_p s + 1)
  double tau_q = 0.01;  // s
  double omega_n = 1.0;
  double v_n = 1.0;
  double s_n = 1.0;  // device rating on the study base

  /// Gains from the permitted 2 % frequency and 10 % voltage deviation at
  /// full rated power error.
  static DroopParams auto_tuned(double s_n, double tau_p, double tau_q, double omega_n = 1.0,
                                double v_n = 1.0);
};

/// State of a first-order low-pass filter 1/(tau s + 1).
struct LowPass {
  double state = 0.0;

  double derivative(double input, double tau) const { return (input - state) / tau; }
  /// Exact zero-order-hold update over dt.
  void advance(double input, double tau, double dt);
};

/// omega* = k_p (P* - H_p P) + omega_n, with `p_filtered` the H_p output.
double active_droop(double p_filtered, double p_star, const DroopParams& params);

/// v_q* = k_q (Q* - H_q Q) + V_n. The d-axis reference is always zero.
double reactive_droop(double q_filtered, double q_star, const DroopParams& params);

/// Rate-of-change limit on a per-unit frequency signal.
class RateLimiter {
 public:
  /// `rocof_max` in Hz/s, `f_base` in Hz.
  RateLimiter(double rocof_max, double f_base);

  /// Limit in pu/s.
  double limit() const { return limit_; }

  /// Continuous form: track `target` with time constant `tau`, slope clamped.
  double derivative(double target, double current, double tau) const;

  /// Discrete form: move `current` toward `target` by at most limit*dt.
  double step(double target, double current, double dt) const;

 private:
  double limit_;
};

}  // namespace gridform::control
