#pragma once

namespace gridform::simcore {

/// System base. Power in VA, line-to-line RMS voltage in V, frequency in Hz.
class PerUnitBase {
 public:
  PerUnitBase(double s_base, double v_base, double f_base);

  double s_base() const { return s_base_; }
  double v_base() const { return v_base_; }
  double f_base() const { return f_base_; }
  double z_base() const { return v_base_ * v_base_ / s_base_; }
  double i_base() const;
  double omega_base() const;

  bool operator==(const PerUnitBase&) const = default;

 private:
  double s_base_;
  double v_base_;
  double f_base_;
};

}  // namespace gridform::simcore
