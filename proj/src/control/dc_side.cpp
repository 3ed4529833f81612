#include "gridform/control/dc_side.hpp"

#include <algorithm>
#include <cmath>

namespace gridform::control {

DcSideOutputs dc_side_outputs(const DcSideState& s, const DcSideParams& p) {
  const double raw = s.integral + p.k_p * (s.v_t - p.v_t_nominal);
  DcSideOutputs o;
  o.v_h = std::clamp(raw, p.v_h_min, p.v_h_max);
  o.clamped = raw < p.v_h_min || raw > p.v_h_max;
  o.p_h = o.v_h * o.v_h / p.r_h;
  return o;
}

DcSideState dc_side_derivative(const DcSideState& s, const DcSideParams& p, double p_grid_side) {
  const auto o = dc_side_outputs(s, p);
  const double err = s.v_t - p.v_t_nominal;
  DcSideState d;
  // c v dv/dt = p_in - p_load; the link voltage stays well away from zero
  d.v_t = (p_grid_side - o.p_h) / (p.c_dc * std::max(s.v_t, 0.05));
  const bool winding_up = (o.v_h >= p.v_h_max && err > 0.0) || (o.v_h <= p.v_h_min && err < 0.0);
  d.integral = (o.clamped && winding_up) ? 0.0 : p.k_i * err;
  return d;
}

DcSideState dc_side_step(const DcSideState& s, const DcSideParams& p, double p_grid_side, double dt) {
  auto add = [](DcSideState a, DcSideState b, double h) {
    return DcSideState{a.v_t + h * b.v_t, a.integral + h * b.integral};
  };
  const auto k1 = dc_side_derivative(s, p, p_grid_side);
  const auto k2 = dc_side_derivative(add(s, k1, dt / 2), p, p_grid_side);
  const auto k3 = dc_side_derivative(add(s, k2, dt / 2), p, p_grid_side);
  const auto k4 = dc_side_derivative(add(s, k3, dt), p, p_grid_side);
  return {s.v_t + dt / 6 * (k1.v_t + 2 * k2.v_t + 2 * k3.v_t + k4.v_t),
          s.integral + dt / 6 * (k1.integral + 2 * k2.integral + 2 * k3.integral + k4.integral)};
}

double dc_side_bias_for(double power, const DcSideParams& p) {
  return std::sqrt(std::max(power, 0.0) * p.r_h);
}

}  // namespace gridform::control
