#pragma once

#include "gridform/devices/pll.hpp"
#include "gridform/simcore/device.hpp"

namespace gridform::devices {

struct FixedPqParams {
  double p = 0.0;  // consumed, study pu
  double q = 0.0;
  double v_min = 0.7;  // constant impedance below this voltage
  bool on = true;

  bool operator==(const FixedPqParams&) const = default;
};

/// Constant-power load; constant impedance below v_min.
class FixedPqLoad : public simcore::Device {
 public:
  FixedPqLoad(std::string id, std::size_t bus, FixedPqParams params);

  std::string kind() const override { return "fixed_pq"; }
  std::size_t state_size() const override { return 0; }
  void initialize(std::span<double>) const override {}
  void structure(network::Structure& st) const override;
  void stage_inputs(std::span<const double> x, const simcore::StageContext& ctx,
                    network::StageInputs& in) const override;
  void derivatives(std::span<const double>, const simcore::StageContext&,
                   const simcore::PortSolution&, std::span<double>) const override {}
  std::vector<std::string> channels() const override { return {"P", "Q"}; }
  void outputs(std::span<const double> x, const simcore::StageContext& ctx,
               const simcore::PortSolution& port, simcore::Channels& out) const override;
  void handle(const simcore::EventAction& action, std::span<double> x,
              const simcore::StageContext& ctx, const simcore::PortSolution& port) override;

 private:
  FixedPqParams params_;
  simcore::Ramp p_;
  simcore::Ramp q_;
  bool on_;
};

struct FreqSupportParams {
  double p_nominal = 0.0;  // consumed at nominal frequency, study pu
  double q = 0.0;
  double k_fl = 0.0;       // pu power per pu frequency
  double tau_f = 0.01;     // s, measurement filter after the PLL
  double v_min = 0.7;      // constant impedance below this voltage
  PllParams pll;
  bool on = true;

  bool operator==(const FreqSupportParams&) const = default;
};

/// Load whose consumption follows a power-frequency droop on PLL-measured
/// frequency: P = max(0, p_nominal + k_fl (f - 1)).
class FreqSupportLoad : public simcore::Device {
 public:
  enum Index : std::size_t { kTheta, kPllInt, kFreq, kSize };

  FreqSupportLoad(std::string id, std::size_t bus, FreqSupportParams params);

  std::string kind() const override { return "freq_support"; }
  std::size_t state_size() const override { return kSize; }
  void initialize(std::span<double> x) const override;
  void structure(network::Structure& st) const override;
  void stage_inputs(std::span<const double> x, const simcore::StageContext& ctx,
                    network::StageInputs& in) const override;
  void derivatives(std::span<const double> x, const simcore::StageContext& ctx,
                   const simcore::PortSolution& port, std::span<double> dx) const override;
  std::vector<std::string> channels() const override { return {"P", "Q", "f_meas"}; }
  void outputs(std::span<const double> x, const simcore::StageContext& ctx,
               const simcore::PortSolution& port, simcore::Channels& out) const override;
  void handle(const simcore::EventAction& action, std::span<double> x,
              const simcore::StageContext& ctx, const simcore::PortSolution& port) override;
  void after_step(std::span<double> x, const simcore::StageContext& ctx, double dt,
                  const simcore::PortSolution& port) override;

  /// Power demand at measured frequency f [pu].
  double demand(double f) const;

 private:
  FreqSupportParams params_;
  bool on_;
};

}  // namespace gridform::devices
