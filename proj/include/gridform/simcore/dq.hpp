#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace gridform::simcore {

using Phasor = std::complex<double>;

/// Two-axis quantity in a rotating frame, q-axis aligned.
///
/// The frame convention is the amplitude-invariant qd0 transform with the
/// d-axis lagging q by 90 degrees, so the equivalent phasor is q - j*d.
/// Power is P = vq*iq + vd*id and Q = vq*id - vd*iq.
struct DqPair {
  double q = 0.0;
  double d = 0.0;

  double magnitude() const { return std::hypot(q, d); }
  Phasor phasor() const { return {q, -d}; }
  static DqPair from_phasor(Phasor p) { return {p.real(), -p.imag()}; }

  bool operator==(const DqPair&) const = default;
};

inline DqPair operator+(DqPair a, DqPair b) { return {a.q + b.q, a.d + b.d}; }
inline DqPair operator-(DqPair a, DqPair b) { return {a.q - b.q, a.d - b.d}; }
inline DqPair operator*(double k, DqPair a) { return {k * a.q, k * a.d}; }

inline double active_power(DqPair v, DqPair i) { return v.q * i.q + v.d * i.d; }
inline double reactive_power(DqPair v, DqPair i) { return v.q * i.d - v.d * i.q; }

/// Wrap an angle into [0, 2*pi).
double wrap_angle(double theta);

/// Rotating-frame angle and its per-unit speed.
class FrameAngle {
 public:
  FrameAngle() = default;
  FrameAngle(double theta, double omega) : theta_(wrap_angle(theta)), omega_(omega) {}

  double theta() const { return theta_; }
  double omega() const { return omega_; }

  /// Advance by dt seconds at base angular speed omega_base [rad/s].
  FrameAngle advanced(double dt, double omega_base) const {
    return {theta_ + omega_ * omega_base * dt, omega_};
  }

 private:
  double theta_ = 0.0;
  double omega_ = 1.0;
};

using Abc = std::array<double, 3>;

DqPair abc_to_dq(const Abc& abc, const FrameAngle& frame);
Abc dq_to_abc(DqPair dq, const FrameAngle& frame);

/// Instantaneous three-phase power sum of v*i over the phases.
inline double instantaneous_power(const Abc& v, const Abc& i) {
  return v[0] * i[0] + v[1] * i[1] + v[2] * i[2];
}

/// Balanced set of peak amplitude `peak` and phase `phase` [rad] at angle theta.
Abc balanced_set(double peak, double theta, double phase = 0.0);

}  // namespace gridform::simcore
