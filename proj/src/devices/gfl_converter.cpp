#include "gridform/devices/gfl_converter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridform/simcore/errors.hpp"

namespace gridform::devices {

GflConverter::GflConverter(std::string id, std::size_t bus, GflParams params)
    : Device(std::move(id), bus),
      params_(params),
      p_available_(params.p_available),
      p_cmd_(params.p_cmd),
      q_ref_(params.q_ref),
      on_(params.on) {
  if (!(params_.s_n > 0.0) || !(params_.i_n > 0.0) || !(params_.tau_s > 0.0))
    throw Error(this->id() + ": rating, current limit and tau_s must be positive");
  if (params_.lvpl_v1 < params_.lvpl_v0) throw Error(this->id() + ": lvpl_v1 below lvpl_v0");
  if (params_.p_available < 0.0) throw Error(this->id() + ": p_available must be non-negative");
}

double GflConverter::target(double t) const {
  return std::min(p_cmd_.at(t), p_available_.at(t));
}

double GflConverter::ordered_power(double p, double t) const {
  return std::clamp(p, 0.0, std::max(p_available_.at(t), 0.0));
}

void GflConverter::initialize(std::span<double> x) const {
  std::fill(x.begin(), x.end(), 0.0);
  x[kP] = std::max(target(0.0), 0.0);
  x[kQ] = params_.q_ref;
  const auto i = current_reference(x, 0.0, 1.0);
  x[kIRe] = i.real();
  x[kIIm] = i.imag();
}

simcore::Phasor GflConverter::injection(std::span<const double> x) const {
  if (!on_) return 0.0;
  return simcore::Phasor(x[kIRe], x[kIIm]) * std::polar(1.0, x[kTheta]);
}

simcore::Phasor GflConverter::current_reference(std::span<const double> x, double t,
                                                simcore::Phasor v) const {
  const double vm = std::max(std::abs(v), 0.05);
  const double i_max = params_.i_n * params_.s_n;
  double i_p = ordered_power(x[kP], t) / vm;
  if (params_.lvpl_v1 > params_.lvpl_v0) {
    const double scale = std::clamp((vm - params_.lvpl_v0) / (params_.lvpl_v1 - params_.lvpl_v0), 0.0, 1.0);
    i_p = std::min(i_p, scale * i_max);
  }
  simcore::Phasor i(i_p, -x[kQ] / vm);
  if (std::abs(i) > i_max) i *= i_max / std::abs(i);
  return i;
}

void GflConverter::seed(std::span<double> x, simcore::Phasor v, simcore::Phasor s,
                        double omega) const {
  x[kTheta] = std::arg(v);
  x[kPllInt] = omega - 1.0;
  x[kP] = s.real();
  x[kQ] = s.imag();
  const simcore::Phasor i = std::abs(v) > 0.0 ? std::conj(s / v) * std::polar(1.0, -x[kTheta]) : 0.0;
  x[kIRe] = i.real();
  x[kIIm] = i.imag();
}

void GflConverter::structure(network::Structure& st) const {
  if (on_) st.source_buses.push_back(bus());
}

void GflConverter::stage_inputs(std::span<const double> x, const simcore::StageContext&,
                                network::StageInputs& in) const {
  if (!on_) return;
  in.currents.emplace_back(bus(), injection(x));
}

void GflConverter::derivatives(std::span<const double> x, const simcore::StageContext& ctx,
                               const simcore::PortSolution& port, std::span<double> dx) const {
  std::fill(dx.begin(), dx.end(), 0.0);
  if (!on_) return;
  const auto d = pll_derivative({x[kTheta], x[kPllInt]}, params_.pll, port.v_bus, ctx.omega_base);
  dx[kTheta] = d.theta;
  dx[kPllInt] = d.integral;
  dx[kP] = std::clamp((target(ctx.t) - x[kP]) / params_.tau_s, -params_.ramp_rate,
                      params_.ramp_rate);
  dx[kQ] = (q_ref_.at(ctx.t) - x[kQ]) / params_.tau_s;
  const auto i_ref = current_reference(x, ctx.t, port.v_bus * std::polar(1.0, -x[kTheta]));
  dx[kIRe] = (i_ref.real() - x[kIRe]) / params_.tau_s;
  dx[kIIm] = (i_ref.imag() - x[kIIm]) / params_.tau_s;
}

std::vector<std::string> GflConverter::channels() const {
  return {"P", "Q", "I", "omega", "f", "p_available", "lost_sync"};
}

void GflConverter::outputs(std::span<const double> x, const simcore::StageContext& ctx,
                           const simcore::PortSolution& port, simcore::Channels& out) const {
  const simcore::Phasor i = port.fixed_current.empty() ? 0.0 : port.fixed_current[0];
  const simcore::Phasor s = port.v_bus * std::conj(i);
  const double w = pll_frequency({x[kTheta], x[kPllInt]}, params_.pll, port.v_bus);
  out["P"] = s.real();
  out["Q"] = s.imag();
  out["I"] = std::abs(i) / params_.s_n;
  out["omega"] = w;
  out["f"] = w * ctx.omega_base / (2.0 * std::numbers::pi);
  out["p_available"] = p_available_.at(ctx.t);
  out["lost_sync"] = lost_sync_ ? 1.0 : 0.0;
}

void GflConverter::handle(const simcore::EventAction& action, std::span<double> x,
                          const simcore::StageContext& ctx, const simcore::PortSolution& port) {
  if (const auto* sr = std::get_if<simcore::SetReference>(&action)) {
    if (sr->name == "p_available") {
      if (sr->value < 0.0) throw Error(id() + ": p_available must be non-negative");
      p_available_.retarget(ctx.t, sr->value, sr->ramp);
    } else if (sr->name == "p_ref" || sr->name == "p_cmd") {
      p_cmd_.retarget(ctx.t, sr->value, sr->ramp);
    } else if (sr->name == "q_ref") {
      q_ref_.retarget(ctx.t, sr->value, sr->ramp);
    } else {
      throw Error(id() + ": unknown reference " + sr->name);
    }
    return;
  }
  if (const auto* sm = std::get_if<simcore::SwitchMode>(&action)) {
    if (sm->mode == "off") {
      on_ = false;
    } else if (sm->mode == "on" || sm->mode == "mppt") {
      on_ = true;
    } else {
      throw Error(id() + ": unknown mode " + sm->mode);
    }
    return;
  }
  Device::handle(action, x, ctx, port);
}

void GflConverter::after_step(std::span<double> x, const simcore::StageContext&, double dt,
                              const simcore::PortSolution& port) {
  x[kTheta] = std::remainder(x[kTheta], 2.0 * std::numbers::pi);
  if (!on_) return;
  low_v_time_ = std::abs(port.v_bus) < params_.lost_sync_v ? low_v_time_ + dt : 0.0;
  lost_sync_ = low_v_time_ > params_.lost_sync_hold;
}

}  // namespace gridform::devices
