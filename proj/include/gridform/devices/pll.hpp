#pragma once

#include "gridform/simcore/dq.hpp"

namespace gridform::devices {

/// Synchronous-reference-frame PLL gains. The angle is measured against the
/// nominal rotating frame, so a locked PLL at nominal frequency holds still.
struct PllParams {
  double k_p = 1.2732;
  double k_i = 254.72;

  /// Gains for a second-order error response settling (2 %) in `settling`
  /// seconds with damping `zeta`.
  static PllParams tuned(double settling, double zeta, double omega_base);

  bool operator==(const PllParams&) const = default;
};

struct PllState {
  double theta = 0.0;
  double integral = 0.0;
};

/// Normalized phase error sin(angle(v) - theta); zero at zero voltage.
double pll_error(simcore::Phasor v, double theta);

/// Measured frequency [pu].
double pll_frequency(const PllState& s, const PllParams& p, simcore::Phasor v);

/// d/dt of (theta, integral).
PllState pll_derivative(const PllState& s, const PllParams& p, simcore::Phasor v,
                        double omega_base);

}  // namespace gridform::devices
