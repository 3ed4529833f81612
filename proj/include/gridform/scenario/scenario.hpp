#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gridform/control/blackstart.hpp"
#include "gridform/control/gfm_converter.hpp"
#include "gridform/devices/gfl_converter.hpp"
#include "gridform/devices/loads.hpp"
#include "gridform/devices/sync_generator.hpp"
#include "gridform/devices/thevenin_grid.hpp"
#include "gridform/network/network.hpp"
#include "gridform/simcore/engine.hpp"
#include "gridform/simcore/per_unit.hpp"

namespace gridform::scenario {

/// Renewable with both control paths; `start_mode` is gfm, voltage_ramp, mppt or off.
struct RenewableSpec {
  control::GfmConverterParams gfm;
  devices::GflParams gfl;
  std::string start_mode = "mppt";
  bool operator==(const RenewableSpec&) const = default;
};

using DeviceParams = std::variant<devices::TheveninParams, devices::FixedPqParams,
                                  devices::FreqSupportParams, control::GfmConverterParams,
                                  RenewableSpec, devices::SyncGenParams>;

/// Device types: thevenin, fixed_pq, freq_support, gfm_load, mppt, gfm, sync_gen.
struct DeviceSpec {
  std::string id;
  std::string type;
  std::string bus;
  DeviceParams params;
  bool operator==(const DeviceSpec&) const = default;
};

struct OutputSpec {
  double sample_interval = 1e-3;
  std::vector<std::string> channels;  // empty: every channel
  std::string frequency_channel;      // empty: first forming device's "f"
  bool operator==(const OutputSpec&) const = default;
};

struct ScenarioSpec {
  std::string id;
  simcore::PerUnitBase base{1e6, 400.0, 50.0};
  double duration = 1.0;
  double dt = 1e-4;
  double settle = 0.0;
  std::vector<network::Bus> buses;
  std::vector<network::Line> lines;
  std::vector<DeviceSpec> devices;
  std::vector<simcore::SimEvent> events;
  std::optional<control::BlackstartPlan> blackstart;
  std::vector<simcore::ChannelLimit> limits;
  OutputSpec outputs;
  bool expect_stable = true;

  bool operator==(const ScenarioSpec&) const;

  /// Scenario events plus the expanded black-start plan, in time order.
  std::vector<simcore::SimEvent> all_events() const;
  const DeviceSpec* device(const std::string& id) const;
};

bool is_forming_type(const DeviceSpec& d);

/// Parse and validate. Throws ValidationError carrying every problem found.
ScenarioSpec parse_scenario(const std::string& text);
/// Check a spec built in code; returns every problem found.
std::vector<std::string> validate(const ScenarioSpec& spec);
std::string serialize(const ScenarioSpec& spec);

}  // namespace gridform::scenario
