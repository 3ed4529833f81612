#include "gridform/simcore/per_unit.hpp"

#include <cmath>
#include <numbers>

#include "gridform/simcore/errors.hpp"

namespace gridform::simcore {

PerUnitBase::PerUnitBase(double s_base, double v_base, double f_base)
    : s_base_(s_base), v_base_(v_base), f_base_(f_base) {
  if (!(s_base > 0.0) || !(v_base > 0.0) || !(f_base > 0.0)) {
    throw Error("per-unit base values must be strictly positive");
  }
}

double PerUnitBase::i_base() const { return s_base_ / (std::sqrt(3.0) * v_base_); }

double PerUnitBase::omega_base() const { return 2.0 * std::numbers::pi * f_base_; }

}  // namespace gridform::simcore
