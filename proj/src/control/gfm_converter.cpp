#include "gridform/control/gfm_converter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridform/simcore/errors.hpp"

namespace gridform::control {

using simcore::Phasor;

void OperatingEnvelope::validate() const {
  std::vector<std::string> problems;
  auto pair = [&](const char* name, double lo, double hi) {
    if (!(lo < hi)) problems.push_back(std::string(name) + ": min must be below max");
  };
  pair("p", p_min, p_max);
  pair("q", q_min, q_max);
  pair("omega", omega_min, omega_max);
  pair("v", v_min, v_max);
  if (p_min < 0.0) problems.push_back("p_min must be non-negative");
  if (!(i_n > 0.0)) problems.push_back("i_n must be positive");
  if (!(rocof_max > 0.0)) problems.push_back("rocof_max must be positive");
  if (!problems.empty()) throw ValidationError(problems);
}

namespace {

// Integrator that only winds while `value` is outside [lo, hi] and otherwise
// bleeds back toward zero without pushing the value across the bound.
double envelope_trim(double value, double lo, double hi, double xi, double k) {
  if (value < lo) return k * (lo - value);
  if (value > hi) return k * (hi - value);
  if (xi > 0.0) return -k * std::min(xi, value - lo);
  if (xi < 0.0) return k * std::min(-xi, hi - value);
  return 0.0;
}

DqPair pair_at(std::span<const double> x, std::size_t i) { return {x[i], x[i + 1]}; }

void put(std::span<double> dx, std::size_t i, DqPair v) {
  dx[i] = v.q;
  dx[i + 1] = v.d;
}

}  // namespace

GfmConverter::GfmConverter(std::string id, std::size_t bus, GfmConverterParams params,
                           double omega_base)
    : Device(std::move(id), bus),
      params_(std::move(params)),
      omega_base_(omega_base),
      role_sign_(params_.role == GfmRole::load ? -1.0 : 1.0),
      limiter_(params_.envelope.rocof_max, omega_base / (2.0 * std::numbers::pi)),
      p_ref_(params_.p_ref),
      q_ref_(params_.q_ref),
      v_ref_(params_.v_ref),
      omega_ref_(params_.omega_ref) {
  params_.envelope.validate();
  if (!(params_.s_n > 0.0)) throw Error(this->id() + ": rating must be positive");
  if (!(params_.x_t > 0.0)) throw Error(this->id() + ": coupling reactance must be positive");
  droop_ = DroopParams::auto_tuned(params_.s_n, params_.tau_p, params_.tau_q);
  if (params_.k_p) droop_.k_p = *params_.k_p;
  if (params_.k_q) droop_.k_q = *params_.k_q;
  const double l = params_.l_f / omega_base;
  const double c = params_.c_f / omega_base;
  gains_ = params_.omega_v
               ? CascadeGains::tuned_with_bandwidth(l, params_.r_f, c, params_.tau_s, params_.d_v,
                                                    *params_.omega_v)
               : CascadeGains::tuned(l, params_.r_f, c, params_.tau_s, params_.d_v);
  if (params_.mode == "off") {
    on_ = false;
    mode_ = "droop";
  } else if (params_.mode == "droop" || params_.mode == "voltage_ramp") {
    mode_ = params_.mode;
  } else {
    throw Error(this->id() + ": unknown mode " + params_.mode);
  }
}

Phasor GfmConverter::coupling_impedance() const {
  return Phasor(params_.r_t, params_.x_t) / params_.s_n;
}

void GfmConverter::initialize(std::span<double> x) const {
  std::fill(x.begin(), x.end(), 0.0);
  x[kOmega] = params_.omega_ref;
  x[kVcQ] = params_.v_ref;
  x[kPf] = role_sign_ * params_.p_ref;
  x[kQf] = params_.q_ref;
  x[kVdc] = 1.0;
  if (params_.dc) {
    const auto& dc = *params_.dc;
    x[kVdc] = dc.v_t_nominal;
    const double p_dev = params_.role == GfmRole::load ? params_.p_ref / params_.s_n : 0.0;
    x[kDcInt] = std::clamp(dc_side_bias_for(p_dev, dc), dc.v_h_min, dc.v_h_max);
  }
}

void GfmConverter::structure(network::Structure& st) const {
  if (on_) st.nortons.push_back({bus(), coupling_impedance()});
}

void GfmConverter::stage_inputs(std::span<const double> x, const simcore::StageContext&,
                                network::StageInputs& in) const {
  if (on_) in.norton_emf.push_back(pair_at(x, kVcQ).phasor() * std::polar(1.0, x[kDelta]));
}

GfmConverter::Signals GfmConverter::signals(std::span<const double> x,
                                            const simcore::StageContext& ctx,
                                            const simcore::PortSolution& port) const {
  Signals s;
  const DqPair v_c = pair_at(x, kVcQ);
  const DqPair i_s = pair_at(x, kIsQ);
  if (on_ && !port.norton_current.empty()) {
    const Phasor i_dev = port.norton_current[0] * std::polar(1.0, -x[kDelta]) / params_.s_n;
    s.i_grid = DqPair::from_phasor(i_dev);
  }
  s.p_inj = params_.s_n * active_power(v_c, s.i_grid);
  s.q_inj = params_.s_n * reactive_power(v_c, s.i_grid);

  const auto& env = params_.envelope;
  if (mode_ == "droop") {
    s.p_star_inj = role_sign_ * (p_ref_.at(ctx.t) + x[kXiP]) + x[kZetaF];
    s.q_star_inj = q_ref_.at(ctx.t) + x[kXiQ] + x[kZetaV];
    s.omega_star = std::clamp(droop_.k_p * (s.p_star_inj - x[kPf]) + omega_ref_.at(ctx.t),
                              env.omega_min, env.omega_max);
    s.v_star = std::clamp(droop_.k_q * (s.q_star_inj - x[kQf]) + v_ref_.at(ctx.t), env.v_min,
                          env.v_max);
  } else {
    s.omega_star = omega_ref_.at(ctx.t);
    s.v_star = v_ref_.at(ctx.t);
    s.p_star_inj = x[kPf];
    s.q_star_inj = x[kQf];
  }

  const double w = x[kOmega] * omega_base_;
  s.i_ref = voltage_loop({s.v_star, 0.0}, v_c, w, gains_, pair_at(x, kGvQ));
  s.i_ref_sat = saturate_current(s.i_ref, env.i_n);
  s.saturated = s.i_ref.magnitude() > env.i_n * (1.0 + 1e-12);
  s.v_m = current_loop(s.i_ref_sat, i_s, v_c, w, gains_, pair_at(x, kGcQ));
  s.p_dc = -active_power(s.v_m, i_s);
  return s;
}

void GfmConverter::derivatives(std::span<const double> x, const simcore::StageContext& ctx,
                               const simcore::PortSolution& port, std::span<double> dx) const {
  std::fill(dx.begin(), dx.end(), 0.0);
  if (!on_) return;
  const Signals s = signals(x, ctx, port);
  const DqPair v_c = pair_at(x, kVcQ);
  const DqPair i_s = pair_at(x, kIsQ);
  const double w = x[kOmega];

  dx[kDelta] = omega_base_ * (w - 1.0);
  dx[kOmega] = limiter_.derivative(s.omega_star, w, params_.rate_tau);
  dx[kPf] = (s.p_inj - x[kPf]) / params_.tau_p;
  dx[kQf] = (s.q_inj - x[kQf]) / params_.tau_q;
  if (!s.saturated) put(dx, kGvQ, voltage_loop_integrand({s.v_star, 0.0}, v_c, gains_));
  put(dx, kGcQ, current_loop_integrand(s.i_ref_sat, i_s, gains_));

  const DqPair di = s.v_m - v_c - params_.r_f * i_s - rotate_quarter(i_s, w * params_.l_f);
  put(dx, kIsQ, (1.0 / gains_.l_f) * di);
  const DqPair dv = i_s - s.i_grid - rotate_quarter(v_c, w * params_.c_f);
  put(dx, kVcQ, (1.0 / gains_.c_f) * dv);

  if (mode_ == "droop") {
    const auto& env = params_.envelope;
    dx[kXiP] = envelope_trim(own_power(x[kPf]), env.p_min, env.p_max, x[kXiP], params_.k_envelope);
    dx[kXiQ] = envelope_trim(x[kQf], env.q_min, env.q_max, x[kXiQ], params_.k_envelope);
    if (!s.saturated) {
      dx[kZetaF] = params_.k_secondary_f * (omega_ref_.at(ctx.t) - w);
      dx[kZetaV] = params_.k_secondary_v * (v_ref_.at(ctx.t) - std::abs(port.v_bus));
    }
  }

  if (params_.dc) {
    const auto d = dc_side_derivative({x[kVdc], x[kDcInt]}, *params_.dc, s.p_dc);
    dx[kVdc] = d.v_t;
    dx[kDcInt] = d.integral;
  }
}

std::vector<std::string> GfmConverter::channels() const {
  return {"P", "Q", "omega", "f", "V", "I", "saturated", "mode", "v_dc", "v_h", "p_h",
          "flex_exhausted"};
}

void GfmConverter::outputs(std::span<const double> x, const simcore::StageContext& ctx,
                           const simcore::PortSolution& port, simcore::Channels& out) const {
  const Signals s = signals(x, ctx, port);
  out["P"] = own_power(s.p_inj);
  out["Q"] = s.q_inj;
  out["omega"] = x[kOmega];
  out["f"] = x[kOmega] * omega_base_ / (2.0 * std::numbers::pi);
  out["V"] = pair_at(x, kVcQ).magnitude();
  out["I"] = pair_at(x, kIsQ).magnitude();
  out["saturated"] = s.saturated ? 1.0 : 0.0;
  out["mode"] = !on_ ? -1.0 : (mode_ == "droop" ? 1.0 : 0.0);
  if (params_.dc) {
    const auto o = dc_side_outputs({x[kVdc], x[kDcInt]}, *params_.dc);
    out["v_dc"] = x[kVdc];
    out["v_h"] = o.v_h;
    out["p_h"] = o.p_h * params_.s_n;
  } else {
    out["v_dc"] = 1.0;
    out["v_h"] = 0.0;
    out["p_h"] = 0.0;
  }
  out["flex_exhausted"] = exhausted_ ? 1.0 : 0.0;
}

void GfmConverter::handle(const simcore::EventAction& action, std::span<double> x,
                          const simcore::StageContext& ctx, const simcore::PortSolution& port) {
  if (const auto* sr = std::get_if<simcore::SetReference>(&action)) {
    if (sr->name == "p_ref") {
      p_ref_.retarget(ctx.t, sr->value, sr->ramp);
    } else if (sr->name == "q_ref") {
      q_ref_.retarget(ctx.t, sr->value, sr->ramp);
    } else if (sr->name == "v_ref") {
      v_ref_.retarget(ctx.t, sr->value, sr->ramp);
    } else if (sr->name == "omega_ref") {
      omega_ref_.retarget(ctx.t, sr->value, sr->ramp);
    } else {
      throw Error(id() + ": unknown reference " + sr->name);
    }
    return;
  }
  if (const auto* sm = std::get_if<simcore::SwitchMode>(&action)) {
    if (sm->mode == "off") {
      on_ = false;
    } else if (sm->mode == "on") {
      on_ = true;
    } else if (sm->mode == "droop") {
      if (mode_ != "droop") {
        // start the power loops from the present operating point
        const Signals s = signals(x, ctx, port);
        p_ref_ = simcore::Ramp(own_power(x[kPf]));
        q_ref_ = simcore::Ramp(x[kQf]);
        v_ref_ = simcore::Ramp(s.v_star);
        x[kXiP] = x[kXiQ] = x[kZetaF] = x[kZetaV] = 0.0;
      }
      mode_ = "droop";
    } else if (sm->mode == "voltage_ramp") {
      mode_ = "voltage_ramp";
    } else {
      throw Error(id() + ": unknown mode " + sm->mode);
    }
    return;
  }
  Device::handle(action, x, ctx, port);
}

void GfmConverter::after_step(std::span<double> x, const simcore::StageContext& ctx, double dt,
                              const simcore::PortSolution&) {
  x[kDelta] = std::remainder(x[kDelta], 2.0 * std::numbers::pi);
  if (!params_.dc || !on_) return;
  (void)ctx;
  const auto o = dc_side_outputs({x[kVdc], x[kDcInt]}, *params_.dc);
  clamp_time_ = o.clamped ? clamp_time_ + dt : 0.0;
  exhausted_ = clamp_time_ >= params_.flex_hold;
}

}  // namespace gridform::control
