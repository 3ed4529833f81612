#include "gridform/scenario/builder.hpp"

#include <cmath>

#include "gridform/control/gfm_converter.hpp"
#include "gridform/devices/loads.hpp"
#include "gridform/devices/renewable.hpp"
#include "gridform/devices/sync_generator.hpp"
#include "gridform/devices/thevenin_grid.hpp"
#include "gridform/simcore/errors.hpp"

namespace gridform::scenario {

namespace {

std::unique_ptr<simcore::Device> make_device(const DeviceSpec& d, std::size_t bus, double omega_base) {
  return std::visit(
      [&](const auto& p) -> std::unique_ptr<simcore::Device> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, devices::TheveninParams>) {
          return std::make_unique<devices::TheveninGrid>(d.id, bus, p);
        } else if constexpr (std::is_same_v<T, devices::FixedPqParams>) {
          return std::make_unique<devices::FixedPqLoad>(d.id, bus, p);
        } else if constexpr (std::is_same_v<T, devices::FreqSupportParams>) {
          return std::make_unique<devices::FreqSupportLoad>(d.id, bus, p);
        } else if constexpr (std::is_same_v<T, control::GfmConverterParams>) {
          auto q = p;
          q.role = control::GfmRole::load;
          return std::make_unique<control::GfmConverter>(d.id, bus, q, omega_base);
        } else if constexpr (std::is_same_v<T, RenewableSpec>) {
          return std::make_unique<devices::RenewableUnit>(d.id, bus, p.gfm, p.gfl, omega_base,
                                                          p.start_mode);
        } else {
          return std::make_unique<devices::SyncGenerator>(d.id, bus, p);
        }
      },
      d.params);
}

}  // namespace

BuiltScenario build(const ScenarioSpec& spec, std::optional<double> dt) {
  if (auto problems = validate(spec); !problems.empty()) throw ValidationError(problems);
  network::Network net;
  for (const auto& b : spec.buses) net.add_bus(b);
  for (const auto& l : spec.lines) net.add_line(l);

  simcore::EngineConfig cfg;
  cfg.dt = dt.value_or(spec.dt);
  cfg.f_base = spec.base.f_base();
  if (!(cfg.dt > 0.0)) throw ValidationError({"dt: must be positive"});

  std::vector<std::unique_ptr<simcore::Device>> devs;
  for (const auto& d : spec.devices)
    devs.push_back(make_device(d, net.bus_index(d.bus), spec.base.omega_base()));

  BuiltScenario out;
  out.plan.scenario_id = spec.id;
  out.plan.duration = spec.duration;
  out.plan.settle = spec.settle;
  out.plan.events = spec.all_events();
  out.plan.limits = spec.limits;
  out.plan.channels = spec.outputs.channels;
  const double ratio = spec.outputs.sample_interval / cfg.dt;
  out.plan.sample_interval = std::abs(ratio - std::round(ratio)) < 1e-6 && ratio >= 1.0
                                 ? spec.outputs.sample_interval
                                 : cfg.dt * std::max(1.0, std::round(ratio));
  out.sim = std::make_unique<simcore::Simulator>(std::move(net), std::move(devs), cfg);
  return out;
}

simcore::RunResult execute(const ScenarioSpec& spec, std::optional<double> dt) {
  auto b = build(spec, dt);
  return simcore::run(*b.sim, b.plan);
}

}  // namespace gridform::scenario
