#pragma once

#include "gridform/devices/pll.hpp"
#include "gridform/simcore/device.hpp"

namespace gridform::devices {

struct GflParams {
  double s_n = 1.0;          // rating, study base
  double p_available = 0.0;  // MPPT power [study pu]
  double p_cmd = 1e9;        // curtailment order; injection is min(p_cmd, p_available)
  double q_ref = 0.0;
  double i_n = 1.0;          // device base
  double tau_s = 0.002;
  double ramp_rate = 1e9;    // pu/s limit on the power order
  // Low-voltage active current limit: zero below lvpl_v0, full above lvpl_v1.
  double lvpl_v0 = 0.4;
  double lvpl_v1 = 0.9;
  PllParams pll;
  double lost_sync_v = 0.1;
  double lost_sync_hold = 0.1;  // s
  bool on = true;

  bool operator==(const GflParams&) const = default;
};

/// Grid-following converter running as a current source at maximum power.
/// Current references in the PLL frame are (P - jQ)/|V| at the measured
/// terminal voltage, capped at i_n, and tracked with time constant tau_s.
/// Under low voltage the active current is scaled down linearly.
class GflConverter : public simcore::Device {
 public:
  enum Index : std::size_t { kTheta, kPllInt, kP, kQ, kIRe, kIIm, kSize };

  GflConverter(std::string id, std::size_t bus, GflParams params);

  std::string kind() const override { return "mppt"; }
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

  bool in_service() const { return on_; }
  void set_in_service(bool on) { on_ = on; }
  bool lost_sync() const { return lost_sync_; }
  double p_available(double t) const { return p_available_.at(t); }
  /// Power actually ordered at time t for power-order state p.
  double ordered_power(double p, double t) const;
  const GflParams& params() const { return params_; }
  /// Injected current in the network frame, study base.
  simcore::Phasor injection(std::span<const double> x) const;
  /// Current reference in the PLL frame, study base.
  simcore::Phasor current_reference(std::span<const double> x, double t, simcore::Phasor v) const;
  /// Place the converter at a running point delivering s at voltage v.
  void seed(std::span<double> x, simcore::Phasor v, simcore::Phasor s, double omega) const;

 private:
  double target(double t) const;

  GflParams params_;
  simcore::Ramp p_available_;
  simcore::Ramp p_cmd_;
  simcore::Ramp q_ref_;
  bool on_;
  bool lost_sync_ = false;
  double low_v_time_ = 0.0;
};

}  // namespace gridform::devices
