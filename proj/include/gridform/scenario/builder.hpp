#pragma once

#include <memory>
#include <optional>

#include "gridform/scenario/scenario.hpp"
#include "gridform/simcore/engine.hpp"

namespace gridform::scenario {

struct BuiltScenario {
  std::unique_ptr<simcore::Simulator> sim;
  simcore::RunPlan plan;
};

/// Instantiate network, devices and run plan. `dt` overrides the spec step;
/// the sample interval is kept when it stays a whole multiple of the step.
BuiltScenario build(const ScenarioSpec& spec, std::optional<double> dt = {});

/// Build and run.
simcore::RunResult execute(const ScenarioSpec& spec, std::optional<double> dt = {});

}  // namespace gridform::scenario
