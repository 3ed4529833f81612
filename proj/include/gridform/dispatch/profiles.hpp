#pragma once

#include <cstdint>

#include "gridform/dispatch/problem.hpp"

namespace gridform::dispatch {

struct ProfileShape {
  std::size_t hours = 150;
  double solar_peak = 200.0;  // MW
  double wind_mean = 400.0;
  double wind_cap = 650.0;
  double wind_persistence = 0.9;   // AR(1) coefficient per hour
  double wind_sigma = 0.08;        // innovation, fraction of wind_mean
  double nd_mean = 250.0;
  double flex_mean = 140.0;   // MW, sets e_disp_total
};

/// Seeded solar + wind availability and non-dispatchable load.
DispatchProblem synthetic_problem(std::uint64_t seed, const ProfileShape& shape = {});

}  // namespace gridform::dispatch
