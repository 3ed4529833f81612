#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridform/scenario/metrics.hpp"
#include "gridform/scenario/scenario.hpp"
#include "gridform/simcore/engine.hpp"

namespace gridform::scenario {

/// Bundled scenario files by name, compiled into the library.
const std::map<std::string, std::string>& embedded_scenarios();

std::vector<std::string> case_names();
ScenarioSpec case_spec(const std::string& name);

struct Check {
  std::string what;
  double measured = 0.0;
  std::string expected;
  bool pass = false;
};

struct CaseReport {
  std::string name;
  ScenarioSpec spec;
  simcore::RunResult result;
  RunMetrics metrics;
  std::vector<Check> checks;
  double runtime = 0.0;  // wall-clock seconds
  bool passed() const;
};

/// Evaluate a finished run against the case's expectation table. `reference`
/// supplies other cases' reports where a check compares across cases.
std::vector<Check> evaluate_case(const std::string& name, const ScenarioSpec& spec,
                                 const simcore::RunResult& result,
                                 const std::map<std::string, CaseReport>& reference = {});

CaseReport run_case(const std::string& name, std::optional<double> dt = {});

/// Frequency channel of a spec: the explicit one or the first forming device's.
std::string frequency_channel(const ScenarioSpec& spec);

std::string diff_report(const CaseReport& report);

}  // namespace gridform::scenario
