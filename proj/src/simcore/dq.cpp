#include "gridform/simcore/dq.hpp"

#include <numbers>

namespace gridform::simcore {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kShift = kTwoPi / 3.0;
}  // namespace

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2*pi
  if (w >= kTwoPi) w = 0.0;
  return w;
}

DqPair abc_to_dq(const Abc& abc, const FrameAngle& frame) {
  const double t = frame.theta();
  const double q = (2.0 / 3.0) * (abc[0] * std::cos(t) + abc[1] * std::cos(t - kShift) +
                                  abc[2] * std::cos(t + kShift));
  const double d = (2.0 / 3.0) * (abc[0] * std::sin(t) + abc[1] * std::sin(t - kShift) +
                                  abc[2] * std::sin(t + kShift));
  return {q, d};
}

Abc dq_to_abc(DqPair dq, const FrameAngle& frame) {
  const double t = frame.theta();
  return {dq.q * std::cos(t) + dq.d * std::sin(t),
          dq.q * std::cos(t - kShift) + dq.d * std::sin(t - kShift),
          dq.q * std::cos(t + kShift) + dq.d * std::sin(t + kShift)};
}

Abc balanced_set(double peak, double theta, double phase) {
  return {peak * std::cos(theta + phase), peak * std::cos(theta + phase - kShift),
          peak * std::cos(theta + phase + kShift)};
}

}  // namespace gridform::simcore
