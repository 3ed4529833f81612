#include "gridform/devices/renewable.hpp"

#include <cmath>

#include "gridform/simcore/errors.hpp"

namespace gridform::devices {

using control::GfmConverter;
using simcore::Phasor;

RenewableUnit::RenewableUnit(std::string id, std::size_t bus, control::GfmConverterParams gfm,
                             GflParams gfl, double omega_base, const std::string& start_mode)
    : Device(id, bus) {
  gfm.role = control::GfmRole::source;
  const bool following = start_mode == "mppt";
  if (!following && start_mode != "gfm" && start_mode != "voltage_ramp" && start_mode != "off")
    throw Error(id + ": unknown mode " + start_mode);
  gfm.mode = following || start_mode == "off" ? "off" : (start_mode == "gfm" ? "droop" : start_mode);
  gfl.on = following;
  gfm_ = std::make_unique<GfmConverter>(id, bus, gfm, omega_base);
  gfl_ = std::make_unique<GflConverter>(id, bus, gfl);
  n_gfm_ = gfm_->state_size();
}

std::size_t RenewableUnit::state_size() const { return n_gfm_ + gfl_->state_size(); }

void RenewableUnit::initialize(std::span<double> x) const {
  gfm_->initialize(gfm_part(x));
  gfl_->initialize(gfl_part(x));
}

void RenewableUnit::structure(network::Structure& st) const {
  gfm_->structure(st);
  gfl_->structure(st);
}

void RenewableUnit::stage_inputs(std::span<const double> x, const simcore::StageContext& ctx,
                                 network::StageInputs& in) const {
  gfm_->stage_inputs(gfm_part(x), ctx, in);
  gfl_->stage_inputs(gfl_part(x), ctx, in);
}

void RenewableUnit::derivatives(std::span<const double> x, const simcore::StageContext& ctx,
                                const simcore::PortSolution& port, std::span<double> dx) const {
  gfm_->derivatives(gfm_part(x), ctx, port, gfm_part(dx));
  gfl_->derivatives(gfl_part(x), ctx, port, gfl_part(dx));
}

std::vector<std::string> RenewableUnit::channels() const {
  return {"P", "Q", "I", "omega", "f", "mode", "p_available", "saturated"};
}

void RenewableUnit::outputs(std::span<const double> x, const simcore::StageContext& ctx,
                            const simcore::PortSolution& port, simcore::Channels& out) const {
  simcore::Channels c;
  if (gfl_->in_service()) {
    gfl_->outputs(gfl_part(x), ctx, port, c);
    c["mode"] = 2.0;
    c["saturated"] = 0.0;
  } else {
    gfm_->outputs(gfm_part(x), ctx, port, c);
    c["p_available"] = gfl_->p_available(ctx.t);
  }
  for (const auto& name : channels()) out[name] = c.count(name) ? c[name] : 0.0;
}

void RenewableUnit::to_following(std::span<double> x, const simcore::StageContext& ctx,
                                 const simcore::PortSolution& port) {
  if (gfm_->in_service()) {
    const auto g = gfm_part(x);
    const auto s = gfm_->signals(g, ctx, port);
    auto f = gfl_part(x);
    gfl_->seed(f, port.v_bus, {s.p_inj, s.q_inj}, g[GfmConverter::kOmega]);
    gfm_->handle(simcore::SwitchMode{id(), "off"}, g, ctx, port);
  }
  gfl_->set_in_service(true);
}

void RenewableUnit::to_forming(std::span<double> x, const simcore::StageContext& ctx,
                               const simcore::PortSolution& port, const std::string& mode) {
  auto g = gfm_part(x);
  if (gfl_->in_service()) {
    const auto f = gfl_part(x);
    const Phasor i = port.fixed_current.empty() ? 0.0 : port.fixed_current[0];
    const Phasor s = port.v_bus * std::conj(i);
    const double delta = std::arg(port.v_bus);
    const double s_n = gfm_->params().s_n;
    std::fill(g.begin(), g.end(), 0.0);
    g[GfmConverter::kDelta] = delta;
    g[GfmConverter::kOmega] = pll_frequency({f[GflConverter::kTheta], f[GflConverter::kPllInt]},
                                            gfl_->params().pll, port.v_bus);
    g[GfmConverter::kPf] = s.real();
    g[GfmConverter::kQf] = s.imag();
    g[GfmConverter::kVcQ] = std::abs(port.v_bus);
    const auto i_dev = simcore::DqPair::from_phasor(i * std::polar(1.0, -delta) / s_n);
    g[GfmConverter::kIsQ] = i_dev.q;
    g[GfmConverter::kIsD] = i_dev.d;
    g[GfmConverter::kVdc] = 1.0;
    gfl_->set_in_service(false);
    gfm_->handle(simcore::SetReference{id(), "p_ref", s.real(), 0.0}, g, ctx, port);
    gfm_->handle(simcore::SetReference{id(), "q_ref", s.imag(), 0.0}, g, ctx, port);
  }
  gfm_->handle(simcore::SwitchMode{id(), "on"}, g, ctx, port);
  gfm_->handle(simcore::SwitchMode{id(), mode}, g, ctx, port);
}

void RenewableUnit::handle(const simcore::EventAction& action, std::span<double> x,
                           const simcore::StageContext& ctx, const simcore::PortSolution& port) {
  if (const auto* sm = std::get_if<simcore::SwitchMode>(&action)) {
    if (sm->mode == "mppt") {
      to_following(x, ctx, port);
    } else if (sm->mode == "gfm" || sm->mode == "droop") {
      to_forming(x, ctx, port, "droop");
    } else if (sm->mode == "voltage_ramp") {
      to_forming(x, ctx, port, "voltage_ramp");
    } else if (sm->mode == "off") {
      gfm_->handle(action, gfm_part(x), ctx, port);
      gfl_->set_in_service(false);
    } else {
      throw Error(id() + ": unknown mode " + sm->mode);
    }
    return;
  }
  if (const auto* sr = std::get_if<simcore::SetReference>(&action)) {
    if (sr->name == "p_available" || gfl_->in_service())
      gfl_->handle(action, gfl_part(x), ctx, port);
    else
      gfm_->handle(action, gfm_part(x), ctx, port);
    return;
  }
  Device::handle(action, x, ctx, port);
}

void RenewableUnit::after_step(std::span<double> x, const simcore::StageContext& ctx, double dt,
                               const simcore::PortSolution& port) {
  gfm_->after_step(gfm_part(x), ctx, dt, port);
  gfl_->after_step(gfl_part(x), ctx, dt, port);
}

}  // namespace gridform::devices
