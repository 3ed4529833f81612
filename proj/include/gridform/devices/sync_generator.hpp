#pragma once

#include "gridform/simcore/device.hpp"

namespace gridform::devices {

struct SyncGenParams {
  double s_n = 1.0;      // rating, study base
  double h = 5.0;        // s
  double d = 0.0;        // pu power per pu speed, device base
  double d_damper = 0.0; // pu power per pu slip against the terminal frequency, device base
  double t_damper = 0.02;  // s, terminal angle tracking
  double x_d = 0.3;      // transient reactance, device base
  double r_a = 0.003;
  double p_ref = 0.0;    // study pu
  double v_set = 1.0;
  double r_gov = 0.05;   // device base; <= 0 disables the governor
  double t_gov = 0.5;    // s
  double k_avr = 5.0;    // 1/s integral AVR
  bool on = true;

  bool operator==(const SyncGenParams&) const = default;
};

/// Classical machine: swing equation, first-order governor and integral AVR,
/// transient emf behind x_d'. The damper term acts on slip against the
/// terminal frequency, estimated by a first-order angle tracker.
class SyncGenerator : public simcore::Device {
 public:
  enum Index : std::size_t { kDelta, kDw, kE, kPm, kTheta, kSize };

  SyncGenerator(std::string id, std::size_t bus, SyncGenParams params);

  std::string kind() const override { return "sync_gen"; }
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
  void end_settle(std::span<double> x, const simcore::StageContext& ctx,
                  const simcore::PortSolution& port) override;

  /// Air-gap power [study pu].
  double electrical_power(std::span<const double> x, const simcore::PortSolution& port) const;
  const SyncGenParams& params() const { return params_; }

 private:
  SyncGenParams params_;
  double p_set_;  // governor load reference
  bool on_;
};

}  // namespace gridform::devices
