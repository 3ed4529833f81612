#include "gridform/devices/sync_generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridform/simcore/errors.hpp"

namespace gridform::devices {

SyncGenerator::SyncGenerator(std::string id, std::size_t bus, SyncGenParams params)
    : Device(std::move(id), bus), params_(params), p_set_(params.p_ref), on_(params.on) {
  if (!(params_.h > 0.0)) throw Error(this->id() + ": inertia constant must be positive");
  if (!(params_.s_n > 0.0) || !(params_.x_d > 0.0))
    throw Error(this->id() + ": rating and reactance must be positive");
  if (!(params_.t_damper > 0.0)) throw Error(this->id() + ": t_damper must be positive");
}

void SyncGenerator::initialize(std::span<double> x) const {
  x[kDelta] = 0.0;
  x[kDw] = 0.0;
  x[kE] = params_.v_set;
  x[kPm] = params_.p_ref;
  x[kTheta] = 0.0;
}

void SyncGenerator::structure(network::Structure& st) const {
  if (on_) st.nortons.push_back({bus(), simcore::Phasor(params_.r_a, params_.x_d) / params_.s_n});
}

void SyncGenerator::stage_inputs(std::span<const double> x, const simcore::StageContext&,
                                 network::StageInputs& in) const {
  if (on_) in.norton_emf.push_back(std::polar(x[kE], x[kDelta]));
}

double SyncGenerator::electrical_power(std::span<const double> x,
                                       const simcore::PortSolution& port) const {
  if (!on_ || port.norton_current.empty()) return 0.0;
  return std::real(std::polar(x[kE], x[kDelta]) * std::conj(port.norton_current[0]));
}

void SyncGenerator::derivatives(std::span<const double> x, const simcore::StageContext& ctx,
                                const simcore::PortSolution& port, std::span<double> dx) const {
  std::fill(dx.begin(), dx.end(), 0.0);
  if (!on_) return;
  const double pe = electrical_power(x, port);
  const double s = params_.s_n;
  dx[kE] = params_.k_avr * (params_.v_set - std::abs(port.v_bus));
  const double lead = std::abs(port.v_bus) > 0.0
                          ? std::remainder(std::arg(port.v_bus) - x[kTheta], 2.0 * std::numbers::pi)
                          : 0.0;
  dx[kTheta] = lead / params_.t_damper;
  if (ctx.settling) {
    // hold speed and pull the rotor angle toward its dispatch
    dx[kDelta] = ctx.omega_base * 0.05 * (p_set_ - pe) / s;
    dx[kPm] = (pe - x[kPm]) / 0.05;
    return;
  }
  const double w = 1.0 + x[kDw];
  dx[kDelta] = ctx.omega_base * x[kDw];
  const double slip = x[kDw] - dx[kTheta] / ctx.omega_base;
  dx[kDw] = (x[kPm] / w - pe / w - params_.d * s * x[kDw] - params_.d_damper * s * slip) /
            (2.0 * params_.h * s);
  if (params_.r_gov > 0.0)
    dx[kPm] = (p_set_ - s * x[kDw] / params_.r_gov - x[kPm]) / params_.t_gov;
}

std::vector<std::string> SyncGenerator::channels() const {
  return {"P", "Q", "omega", "f", "E", "P_m"};
}

void SyncGenerator::outputs(std::span<const double> x, const simcore::StageContext& ctx,
                            const simcore::PortSolution& port, simcore::Channels& out) const {
  const simcore::Phasor i = port.norton_current.empty() ? 0.0 : port.norton_current[0];
  const simcore::Phasor s = port.v_bus * std::conj(i);
  out["P"] = s.real();
  out["Q"] = s.imag();
  out["omega"] = 1.0 + x[kDw];
  out["f"] = (1.0 + x[kDw]) * ctx.omega_base / (2.0 * std::numbers::pi);
  out["E"] = x[kE];
  out["P_m"] = x[kPm];
}

void SyncGenerator::handle(const simcore::EventAction& action, std::span<double> x,
                           const simcore::StageContext& ctx, const simcore::PortSolution& port) {
  if (const auto* sr = std::get_if<simcore::SetReference>(&action)) {
    if (sr->name == "p_ref") {
      p_set_ = sr->value;
    } else if (sr->name == "v_set") {
      params_.v_set = sr->value;
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
    } else {
      throw Error(id() + ": unknown mode " + sm->mode);
    }
    return;
  }
  Device::handle(action, x, ctx, port);
}

void SyncGenerator::after_step(std::span<double> x, const simcore::StageContext&, double,
                               const simcore::PortSolution&) {
  x[kDelta] = std::remainder(x[kDelta], 2.0 * std::numbers::pi);
  x[kTheta] = std::remainder(x[kTheta], 2.0 * std::numbers::pi);
}

void SyncGenerator::end_settle(std::span<double> x, const simcore::StageContext&,
                               const simcore::PortSolution& port) {
  x[kDw] = 0.0;
  x[kTheta] = std::arg(port.v_bus);
  x[kPm] = electrical_power(x, port);
  p_set_ = x[kPm];
}

}  // namespace gridform::devices
