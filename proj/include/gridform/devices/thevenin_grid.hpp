#pragma once

#include "gridform/simcore/device.hpp"

namespace gridform::devices {

struct TheveninParams {
  double scr = 2.0;       // source impedance 1/scr on the study base; <= 0 means stiff
  double x_over_r = 10.0;
  double h = 2.0;         // equivalent inertia [s] on s_g
  double s_g = 10.0;      // equivalent system rating, study base
  double d = 100.0;       // load damping and primary response [study pu per pu speed]
  double e = 1.0;         // emf magnitude

  bool operator==(const TheveninParams&) const = default;
};

/// Equivalent external grid: emf behind 1/scr with a single-mass frequency.
/// A frequency event is a step or ramp in the power deficit "dp".
class TheveninGrid : public simcore::Device {
 public:
  enum Index : std::size_t { kTheta, kDw, kSize };

  TheveninGrid(std::string id, std::size_t bus, TheveninParams params);

  std::string kind() const override { return "thevenin"; }
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

  bool stiff() const { return params_.scr <= 0.0; }
  simcore::Phasor impedance() const;
  double electrical_power(std::span<const double> x, const simcore::PortSolution& port) const;

 private:
  TheveninParams params_;
  double p_m_ = 0.0;
  simcore::Ramp deficit_;
};

}  // namespace gridform::devices
