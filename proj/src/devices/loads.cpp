#include "gridform/devices/loads.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridform/simcore/errors.hpp"

namespace gridform::devices {

namespace {

void consumed_power(const simcore::PortSolution& port, simcore::Channels& out) {
  const simcore::Phasor i = port.power_current.empty() ? 0.0 : port.power_current[0];
  const simcore::Phasor s = port.v_bus * std::conj(i);
  out["P"] = -s.real();
  out["Q"] = -s.imag();
}

bool switch_on_off(const simcore::EventAction& action, bool& on) {
  const auto* sm = std::get_if<simcore::SwitchMode>(&action);
  if (!sm) return false;
  if (sm->mode == "off")
    on = false;
  else if (sm->mode == "on")
    on = true;
  else
    throw Error(sm->device + ": unknown mode " + sm->mode);
  return true;
}

// Preconditioning shunt that approximates the load at nominal voltage.
void add_preconditioner(network::Structure& st, std::size_t bus, double p, double q) {
  if (p != 0.0 || q != 0.0) st.shunts.push_back({bus, {p, -q}, true});
}

}  // namespace

FixedPqLoad::FixedPqLoad(std::string id, std::size_t bus, FixedPqParams params)
    : Device(std::move(id), bus), params_(params), p_(params.p), q_(params.q), on_(params.on) {}

void FixedPqLoad::structure(network::Structure& st) const {
  if (on_) add_preconditioner(st, bus(), params_.p, params_.q);
}

void FixedPqLoad::stage_inputs(std::span<const double>, const simcore::StageContext& ctx,
                               network::StageInputs& in) const {
  if (on_) in.powers.push_back({bus(), {-p_.at(ctx.t), -q_.at(ctx.t)}, params_.v_min, 0.0});
}

void FixedPqLoad::outputs(std::span<const double>, const simcore::StageContext&,
                          const simcore::PortSolution& port, simcore::Channels& out) const {
  consumed_power(port, out);
}

void FixedPqLoad::handle(const simcore::EventAction& action, std::span<double> x,
                         const simcore::StageContext& ctx, const simcore::PortSolution& port) {
  if (switch_on_off(action, on_)) return;
  if (const auto* sr = std::get_if<simcore::SetReference>(&action)) {
    if (sr->name == "p")
      p_.retarget(ctx.t, sr->value, sr->ramp);
    else if (sr->name == "q")
      q_.retarget(ctx.t, sr->value, sr->ramp);
    else
      throw Error(id() + ": unknown reference " + sr->name);
    return;
  }
  Device::handle(action, x, ctx, port);
}

FreqSupportLoad::FreqSupportLoad(std::string id, std::size_t bus, FreqSupportParams params)
    : Device(std::move(id), bus), params_(params), on_(params.on) {
  if (params_.k_fl < 0.0) throw Error(this->id() + ": k_fl must be non-negative");
  if (!(params_.tau_f > 0.0)) throw Error(this->id() + ": tau_f must be positive");
}

double FreqSupportLoad::demand(double f) const {
  return std::max(0.0, params_.p_nominal + params_.k_fl * (f - 1.0));
}

void FreqSupportLoad::initialize(std::span<double> x) const {
  x[kTheta] = 0.0;
  x[kPllInt] = 0.0;
  x[kFreq] = 1.0;
}

void FreqSupportLoad::structure(network::Structure& st) const {
  if (on_) add_preconditioner(st, bus(), params_.p_nominal, params_.q);
}

void FreqSupportLoad::stage_inputs(std::span<const double> x, const simcore::StageContext&,
                                   network::StageInputs& in) const {
  if (on_) in.powers.push_back({bus(), {-demand(x[kFreq]), -params_.q}, params_.v_min, 0.0});
}

void FreqSupportLoad::derivatives(std::span<const double> x, const simcore::StageContext& ctx,
                                  const simcore::PortSolution& port, std::span<double> dx) const {
  std::fill(dx.begin(), dx.end(), 0.0);
  if (!on_) return;
  const PllState s{x[kTheta], x[kPllInt]};
  const auto d = pll_derivative(s, params_.pll, port.v_bus, ctx.omega_base);
  dx[kTheta] = d.theta;
  dx[kPllInt] = d.integral;
  dx[kFreq] = (pll_frequency(s, params_.pll, port.v_bus) - x[kFreq]) / params_.tau_f;
}

void FreqSupportLoad::outputs(std::span<const double> x, const simcore::StageContext& ctx,
                              const simcore::PortSolution& port, simcore::Channels& out) const {
  consumed_power(port, out);
  out["f_meas"] = x[kFreq] * ctx.omega_base / (2.0 * std::numbers::pi);
}

void FreqSupportLoad::handle(const simcore::EventAction& action, std::span<double> x,
                             const simcore::StageContext& ctx, const simcore::PortSolution& port) {
  if (switch_on_off(action, on_)) return;
  Device::handle(action, x, ctx, port);
}

void FreqSupportLoad::after_step(std::span<double> x, const simcore::StageContext&, double,
                                 const simcore::PortSolution&) {
  x[kTheta] = std::remainder(x[kTheta], 2.0 * std::numbers::pi);
}

}  // namespace gridform::devices
