#pragma once

namespace gridform::control {

/// DC side of a two-stage flexible load: DC link behind the grid-side
/// converter, then a DC-DC stage feeding a resistive load. The DC-DC stage
/// holds the link voltage at nominal by moving the load-terminal voltage.
struct DcSideParams {
  double c_dc = 0.02;  // s; stored energy is c_dc*v^2/2 in pu*s
  double r_h = 1.0;    // pu load resistance
  double v_h_min = 0.7;
  double v_h_max = 1.1;
  double v_t_nominal = 1.0;
  double k_p = 20.0;
  double k_i = 2000.0;

  bool operator==(const DcSideParams&) const = default;
};

struct DcSideState {
  double v_t = 1.0;       // DC-link voltage
  double integral = 1.0;  // DC-voltage PI integrator (load-terminal voltage bias)
};

struct DcSideOutputs {
  double v_h = 0.0;       // load-terminal voltage after clamping
  double p_h = 0.0;       // load power v_h^2 / R_h
  bool clamped = false;   // load flexibility exhausted at this instant
};

DcSideOutputs dc_side_outputs(const DcSideState& s, const DcSideParams& p);

/// Time derivative of the DC state for power `p_grid_side` delivered into the
/// link by the grid-side converter.
DcSideState dc_side_derivative(const DcSideState& s, const DcSideParams& p, double p_grid_side);

/// Advance by dt with one RK4 step.
DcSideState dc_side_step(const DcSideState& s, const DcSideParams& p, double p_grid_side, double dt);

/// Integrator value that makes the load draw `power` at nominal link voltage.
double dc_side_bias_for(double power, const DcSideParams& p);

}  // namespace gridform::control
