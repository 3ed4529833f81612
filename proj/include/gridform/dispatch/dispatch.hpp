#pragma once

#include <string>
#include <vector>

#include "gridform/dispatch/problem.hpp"
#include "gridform/dispatch/simplex.hpp"

namespace gridform::dispatch {

struct DispatchSolution {
  std::vector<double> p_ren, p_gencon, p_load_dis;  // MW
  double objective = 0.0;                           // MWh of conventional generation
  Certificate certificate;
  long iterations = 0;

  /// Derived: flexible plus non-dispatchable load per hour.
  std::vector<double> p_load_tot(const DispatchProblem& p) const;
};

/// Build, solve and certify. Throws Infeasible on an infeasible instance.
DispatchSolution solve(const DispatchProblem& p, const SimplexOptions& opt = {});

/// Worst violation of the balancing constraints, checked from scratch.
double constraint_violation(const DispatchProblem& p, const DispatchSolution& s);

struct EnergyReport {
  double renewable_gwh = 0.0;
  double conventional_gwh = 0.0;
  double curtailment_gwh = 0.0;
  double flexible_gwh = 0.0;
  double nd_load_gwh = 0.0;
};

EnergyReport report(const DispatchProblem& p, const DispatchSolution& s);
/// Two-decimal summary line, e.g. "C: renewable 58.25 GWh, conventional 0.11 GWh, ...".
std::string format(Option o, const EnergyReport& r);

}  // namespace gridform::dispatch
