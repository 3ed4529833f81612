#include "gridform/dispatch/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace gridform::dispatch {

DispatchProblem synthetic_problem(std::uint64_t seed, const ProfileShape& shape) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> cloud(0.55, 1.0);
  const double pi = std::numbers::pi;

  DispatchProblem p;
  p.p_ren_avail.resize(shape.hours);
  p.p_load_nd.resize(shape.hours);
  double wind = shape.wind_mean;
  double sky = cloud(rng);
  for (std::size_t i = 0; i < shape.hours; ++i) {
    double hour = static_cast<double>(i % 24);
    if (i % 24 == 0) sky = cloud(rng);
    double sun = std::max(0.0, std::sin(pi * (hour - 6.0) / 12.0));
    wind = shape.wind_mean + shape.wind_persistence * (wind - shape.wind_mean) +
           shape.wind_sigma * shape.wind_mean * noise(rng);
    wind = std::clamp(wind, 0.0, shape.wind_cap);
    p.p_ren_avail[i] = shape.solar_peak * sky * sun + wind;
    double daily = 1.0 + 0.15 * std::sin(2.0 * pi * (hour - 9.0) / 24.0);
    p.p_load_nd[i] = std::max(0.0, shape.nd_mean * daily * (1.0 + 0.03 * noise(rng)));
  }
  p.e_disp_total = shape.flex_mean * static_cast<double>(shape.hours);
  return p;
}

}  // namespace gridform::dispatch
