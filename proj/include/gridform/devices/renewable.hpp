#pragma once

#include <memory>

#include "gridform/control/gfm_converter.hpp"
#include "gridform/devices/gfl_converter.hpp"

namespace gridform::devices {

/// Renewable converter that can run grid-forming (curtailed, droop) or
/// grid-following at maximum power, switching bumplessly between the two.
class RenewableUnit : public simcore::Device {
 public:
  /// `gfm.role` is forced to source. `start_mode` is gfm, voltage_ramp or mppt.
  RenewableUnit(std::string id, std::size_t bus, control::GfmConverterParams gfm, GflParams gfl,
                double omega_base, const std::string& start_mode);

  std::string kind() const override { return "renewable"; }
  std::size_t state_size() const override;
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

  bool forming() const { return gfm_->in_service(); }
  bool following() const { return gfl_->in_service(); }
  const control::GfmConverter& gfm() const { return *gfm_; }
  const GflConverter& gfl() const { return *gfl_; }

 private:
  std::span<const double> gfm_part(std::span<const double> x) const { return x.first(n_gfm_); }
  std::span<const double> gfl_part(std::span<const double> x) const { return x.subspan(n_gfm_); }
  std::span<double> gfm_part(std::span<double> x) const { return x.first(n_gfm_); }
  std::span<double> gfl_part(std::span<double> x) const { return x.subspan(n_gfm_); }
  void to_following(std::span<double> x, const simcore::StageContext& ctx,
                    const simcore::PortSolution& port);
  void to_forming(std::span<double> x, const simcore::StageContext& ctx,
                  const simcore::PortSolution& port, const std::string& mode);

  std::unique_ptr<control::GfmConverter> gfm_;
  std::unique_ptr<GflConverter> gfl_;
  std::size_t n_gfm_;
};

}  // namespace gridform::devices
