#pragma once

#include <vector>

#include "gridform/dispatch/problem.hpp"

namespace gridform::dispatch {

struct SimplexOptions {
  double tolerance = 1e-9;
  long max_iterations = 200000;
  /// Degenerate pivots in a row before switching from Dantzig to Bland pricing.
  int stall_limit = 50;
};

struct LpResult {
  std::vector<double> x;
  std::vector<double> row_dual;  // one per row
  double objective = 0.0;
  long iterations = 0;
  bool used_bland = false;
};

/// Bounded-variable primal simplex on a dense tableau. Every bound must be
/// finite. Throws Infeasible, Unbounded or ValidationError.
LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& opt = {});

struct Certificate {
  double primal_residual = 0.0;  // worst bound or row violation
  double dual_objective = 0.0;
  double gap = 0.0;              // relative duality gap
};

/// Recompute feasibility and the Lagrangian dual bound from the original data.
Certificate certify(const LinearProgram& lp, const std::vector<double>& x,
                    const std::vector<double>& row_dual);

}  // namespace gridform::dispatch
