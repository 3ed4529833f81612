#include "gridform/devices/thevenin_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridform/simcore/errors.hpp"

namespace gridform::devices {

TheveninGrid::TheveninGrid(std::string id, std::size_t bus, TheveninParams params)
    : Device(std::move(id), bus), params_(params) {
  if (!(params_.h > 0.0) || !(params_.s_g > 0.0) || !(params_.x_over_r > 0.0))
    throw Error(this->id() + ": inertia, rating and X/R must be positive");
}

simcore::Phasor TheveninGrid::impedance() const {
  const double z = 1.0 / params_.scr;
  const double r = z / std::sqrt(1.0 + params_.x_over_r * params_.x_over_r);
  return {r, r * params_.x_over_r};
}

void TheveninGrid::initialize(std::span<double> x) const {
  x[kTheta] = 0.0;
  x[kDw] = 0.0;
}

void TheveninGrid::structure(network::Structure& st) const {
  if (stiff())
    st.ideal_sources.push_back(bus());
  else
    st.nortons.push_back({bus(), impedance()});
}

void TheveninGrid::stage_inputs(std::span<const double> x, const simcore::StageContext&,
                                network::StageInputs& in) const {
  const auto e = std::polar(params_.e, x[kTheta]);
  if (stiff())
    in.ideal_v.push_back(e);
  else
    in.norton_emf.push_back(e);
}

double TheveninGrid::electrical_power(std::span<const double> x,
                                      const simcore::PortSolution& port) const {
  if (stiff())
    return port.ideal_current.empty() ? 0.0 : std::real(port.v_bus * std::conj(port.ideal_current[0]));
  if (port.norton_current.empty()) return 0.0;
  return std::real(std::polar(params_.e, x[kTheta]) * std::conj(port.norton_current[0]));
}

void TheveninGrid::derivatives(std::span<const double> x, const simcore::StageContext& ctx,
                               const simcore::PortSolution& port, std::span<double> dx) const {
  std::fill(dx.begin(), dx.end(), 0.0);
  if (ctx.settling) return;
  const double pe = electrical_power(x, port);
  dx[kTheta] = ctx.omega_base * x[kDw];
  dx[kDw] = (p_m_ - deficit_.at(ctx.t) - pe - params_.d * x[kDw]) / (2.0 * params_.h * params_.s_g);
}

std::vector<std::string> TheveninGrid::channels() const { return {"P", "Q", "omega", "f"}; }

void TheveninGrid::outputs(std::span<const double> x, const simcore::StageContext& ctx,
                           const simcore::PortSolution& port, simcore::Channels& out) const {
  simcore::Phasor i = 0.0;
  if (stiff() && !port.ideal_current.empty()) i = port.ideal_current[0];
  if (!stiff() && !port.norton_current.empty()) i = port.norton_current[0];
  const simcore::Phasor s = port.v_bus * std::conj(i);
  out["P"] = s.real();
  out["Q"] = s.imag();
  out["omega"] = 1.0 + x[kDw];
  out["f"] = (1.0 + x[kDw]) * ctx.omega_base / (2.0 * std::numbers::pi);
}

void TheveninGrid::handle(const simcore::EventAction& action, std::span<double> x,
                          const simcore::StageContext& ctx, const simcore::PortSolution& port) {
  if (const auto* sr = std::get_if<simcore::SetReference>(&action)) {
    if (sr->name == "dp") {
      deficit_.retarget(ctx.t, sr->value, sr->ramp);
    } else if (sr->name == "e") {
      params_.e = sr->value;
    } else {
      throw Error(id() + ": unknown reference " + sr->name);
    }
    return;
  }
  Device::handle(action, x, ctx, port);
}

void TheveninGrid::after_step(std::span<double> x, const simcore::StageContext&, double,
                              const simcore::PortSolution&) {
  x[kTheta] = std::remainder(x[kTheta], 2.0 * std::numbers::pi);
}

void TheveninGrid::end_settle(std::span<double> x, const simcore::StageContext&,
                              const simcore::PortSolution& port) {
  p_m_ = electrical_power(x, port);
}

}  // namespace gridform::devices
