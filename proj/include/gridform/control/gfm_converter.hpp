#pragma once

#include <optional>
#include <string>

#include "gridform/control/cascade.hpp"
#include "gridform/control/dc_side.hpp"
#include "gridform/control/droop.hpp"
#include "gridform/simcore/device.hpp"

namespace gridform::control {

/// Allowed operating region. Powers are on the study base; P is in the
/// device's own convention (consumed for a load, generated for a source) and
/// Q is always injected. i_n is on the device rating.
struct OperatingEnvelope {
  double p_min = 0.0;
  double p_max = 1.0;
  double q_min = -0.5;
  double q_max = 0.5;
  double omega_min = 0.95;
  double omega_max = 1.05;
  double v_min = 0.0;
  double v_max = 1.2;
  double i_n = 1.0;
  double rocof_max = 4.0;  // Hz/s

  /// Throws ValidationError listing every bad pair.
  void validate() const;

  bool operator==(const OperatingEnvelope&) const = default;
};

enum class GfmRole { load, source };

struct GfmConverterParams {
  GfmRole role = GfmRole::load;
  double s_n = 1.0;  // rating on the study base

  // Filter and coupling impedance, per unit on the device rating.
  double l_f = 0.15;
  double r_f = 0.005;
  double c_f = 0.1;
  double r_t = 0.003;
  double x_t = 0.15;

  double tau_s = 0.002;
  double d_v = 0.707;
  std::optional<double> omega_v;  // rad/s; the default is 10*2*pi/tau_s

  double tau_p = 0.01;
  double tau_q = 0.01;
  std::optional<double> k_p;  // override auto-tuned droop gains
  std::optional<double> k_q;

  OperatingEnvelope envelope;
  double k_envelope = 20.0;   // 1/s, trim on P* and Q* outside the envelope
  double k_secondary_f = 0.0; // pu power per pu frequency error per second
  double k_secondary_v = 0.0;
  double rate_tau = 0.001;    // s, frequency tracking inside the ROCOF limit

  std::optional<DcSideParams> dc;  // two-stage load; absent means a stiff DC side
  double flex_hold = 0.1;          // s of clamping before the exhausted flag

  // Initial references: p_ref in the own convention, q_ref injected.
  double p_ref = 0.0;
  double q_ref = 0.0;
  double v_ref = 1.0;
  double omega_ref = 1.0;
  std::string mode = "droop";  // droop | voltage_ramp | off

  bool operator==(const GfmConverterParams&) const = default;
};

/// Grid-forming converter: droop power loops, ROCOF-limited frame, cascaded
/// voltage/current control with current saturation, LC filter behind a
/// coupling impedance, and an optional DC-side flexible load.
class GfmConverter : public simcore::Device {
 public:
  enum Index : std::size_t {
    kDelta, kOmega, kPf, kQf, kGvQ, kGvD, kGcQ, kGcD, kIsQ, kIsD, kVcQ, kVcD,
    kXiP, kXiQ, kZetaF, kZetaV, kVdc, kDcInt, kSize
  };

  GfmConverter(std::string id, std::size_t bus, GfmConverterParams params, double omega_base);

  std::string kind() const override { return role_sign_ < 0 ? "gfm_load" : "gfm"; }
  std::size_t state_size() const override { return kSize; }
  void initialize(std::span<double> x) const override;
  void structure(network::Structure& st) const override;
  void stage_inputs(std::span<const double> x, const simcore::StageContext& ctx,
                    network::StageInputs& in) const override;
  void derivatives(std::span<const double> x, const simcore::StageContext& ctx,
                   const simcore::PortSolution& port, std::span<double> dx) const override;
  std::vector<std::string> channels() const override;
  void outputs(std::span<const double> x, const simcore::StageContext& ctx,
               const simcore::PortSolution& port, simcore::Channels& out) const override;
  void handle(const simcore::EventAction& action, std::span<double> x,
              const simcore::StageContext& ctx, const simcore::PortSolution& port) override;
  void after_step(std::span<double> x, const simcore::StageContext& ctx, double dt,
                  const simcore::PortSolution& port) override;

  const GfmConverterParams& params() const { return params_; }
  const DroopParams& droop() const { return droop_; }
  const CascadeGains& gains() const { return gains_; }
  const std::string& mode() const { return mode_; }
  bool in_service() const { return on_; }
  bool flexibility_exhausted() const { return exhausted_; }

  /// Everything derived from the state at one stage.
  struct Signals {
    double omega_star = 1.0;
    double v_star = 1.0;
    double p_star_inj = 0.0;
    double q_star_inj = 0.0;
    DqPair i_grid;     // device base, device frame
    DqPair i_ref;      // before saturation
    DqPair i_ref_sat;
    DqPair v_m;
    bool saturated = false;
    double p_inj = 0.0;  // study base, measured at the filter capacitor
    double q_inj = 0.0;
    double p_dc = 0.0;   // device base, into the DC link
  };
  Signals signals(std::span<const double> x, const simcore::StageContext& ctx,
                  const simcore::PortSolution& port) const;

  /// Own-convention power (consumed for a load).
  double own_power(double p_inj) const { return role_sign_ * p_inj; }

 private:
  simcore::Phasor coupling_impedance() const;  // study base

  GfmConverterParams params_;
  double omega_base_;
  double role_sign_;  // +1 source, -1 load
  DroopParams droop_;
  CascadeGains gains_;
  RateLimiter limiter_;
  std::string mode_;
  bool on_ = true;
  simcore::Ramp p_ref_;
  simcore::Ramp q_ref_;
  simcore::Ramp v_ref_;
  simcore::Ramp omega_ref_;
  double clamp_time_ = 0.0;
  bool exhausted_ = false;
};

}  // namespace gridform::control
