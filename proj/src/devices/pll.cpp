#include "gridform/devices/pll.hpp"

#include <cmath>

#include "gridform/simcore/errors.hpp"

namespace gridform::devices {

PllParams PllParams::tuned(double settling, double zeta, double omega_base) {
  if (!(settling > 0.0) || !(zeta > 0.0) || !(omega_base > 0.0))
    throw Error("PLL tuning needs positive settling time, damping and base frequency");
  const double omega_n = 4.0 / (zeta * settling);
  return {2.0 * zeta * omega_n / omega_base, omega_n * omega_n / omega_base};
}

double pll_error(simcore::Phasor v, double theta) {
  const double mag = std::abs(v);
  if (mag < 1e-6) return 0.0;
  return std::imag(v * std::polar(1.0, -theta)) / mag;
}

double pll_frequency(const PllState& s, const PllParams& p, simcore::Phasor v) {
  return 1.0 + p.k_p * pll_error(v, s.theta) + s.integral;
}

PllState pll_derivative(const PllState& s, const PllParams& p, simcore::Phasor v,
                        double omega_base) {
  const double e = pll_error(v, s.theta);
  return {omega_base * (p.k_p * e + s.integral), p.k_i * e};
}

}  // namespace gridform::devices
