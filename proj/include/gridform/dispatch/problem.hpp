#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gridform/simcore/errors.hpp"

namespace gridform::dispatch {

class Infeasible : public Error {
 public:
  using Error::Error;
};

class Unbounded : public Error {
 public:
  using Error::Error;
};

/// A: constant flexible load, renewables with reserve alpha.
/// B: variable flexible load, renewables with reserve alpha.
/// C: variable flexible load, renewables at maximum power (alpha = 1).
enum class Option { A, B, C };

const char* to_string(Option o);
Option parse_option(const std::string& s);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Energy-balancing problem over h hours. Powers in MW, energy in MWh.
struct DispatchProblem {
  std::vector<double> p_ren_avail;
  std::vector<double> p_load_nd;
  double e_disp_total = 0.0;
  double alpha = 0.9;
  Option option = Option::C;

  std::optional<Range> flex;      // per-hour flexible load; default [0, 2 E / h]
  std::optional<double> gen_max;  // default max(p_load_nd) + flex.hi
  /// Hour-to-hour change of each variable, as a fraction of its largest upper
  /// bound. Infinity disables the ramp rows.
  double ramp_fraction = 0.2;

  std::size_t hours() const { return p_load_nd.size(); }
  double reserve() const { return option == Option::C ? 1.0 : alpha; }
  Range flex_range() const;
  double gen_limit() const;

  /// Every violated invariant; empty when the problem is well formed.
  std::vector<std::string> problems() const;
};

/// min c'x subject to row_lo <= A x <= row_hi and col_lo <= x <= col_hi,
/// with A stored dense row-major.
struct LinearProgram {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;
  std::vector<double> c;
  std::vector<double> col_lo, col_hi;
  std::vector<double> row_lo, row_hi;
  std::vector<std::string> col_names, row_names;

  double& at(std::size_t r, std::size_t j) { return a[r * cols + j]; }
  double at(std::size_t r, std::size_t j) const { return a[r * cols + j]; }
  std::size_t add_column(std::string name, double cost, double lo, double hi);
  std::size_t add_row(std::string name, double lo, double hi);
};

/// Column layout of a built dispatch LP.
struct Layout {
  std::size_t h = 0;
  std::size_t ren(std::size_t i) const { return i; }
  std::size_t gen(std::size_t i) const { return h + i; }
  std::size_t dis(std::size_t i) const { return 2 * h + i; }
};

/// Throws ValidationError when the problem is malformed and Infeasible when
/// the bounds alone already rule out a solution.
LinearProgram build(const DispatchProblem& p);

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace gridform::dispatch
