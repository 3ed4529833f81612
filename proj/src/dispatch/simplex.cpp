#include "gridform/dispatch/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace gridform::dispatch {

namespace {

enum class Status { Basic, AtLo, AtHi };

// Dense tableau over structural and logical columns, A x - s + sigma a = 0.
// Artificials are kept implicit: they start basic and never re-enter.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& opt)
      : lp_(lp), opt_(opt), m_(lp.rows), n_(lp.cols), w_(lp.cols + lp.rows) {
    lo_.resize(w_ + m_);
    hi_.resize(w_ + m_);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = lp.col_lo[j];
      hi_[j] = lp.col_hi[j];
    }
    for (std::size_t r = 0; r < m_; ++r) {
      lo_[n_ + r] = lp.row_lo[r];
      hi_[n_ + r] = lp.row_hi[r];
      lo_[w_ + r] = 0.0;
      hi_[w_ + r] = kInf;
    }
    status_.assign(w_, Status::AtLo);
    value_.assign(w_ + m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) value_[j] = lo_[j];

    t_.assign(m_ * w_, 0.0);
    basis_.resize(m_);
    beta_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      double v = 0.0;
      for (std::size_t j = 0; j < n_; ++j) v += lp.at(r, j) * value_[j];
      double s = std::clamp(v, lo_[n_ + r], hi_[n_ + r]);
      double diag;
      if (s == v) {
        basis_[r] = n_ + r;
        status_[n_ + r] = Status::Basic;
        beta_[r] = v;
        diag = -1.0;
      } else {
        value_[n_ + r] = s;
        status_[n_ + r] = s == lo_[n_ + r] ? Status::AtLo : Status::AtHi;
        double sigma = s > v ? 1.0 : -1.0;
        basis_[r] = w_ + r;
        beta_[r] = (s - v) / sigma;
        diag = sigma;
      }
      for (std::size_t j = 0; j < n_; ++j) t(r, j) = lp.at(r, j) / diag;
      t(r, n_ + r) = -1.0 / diag;
    }
    d_.assign(w_, 0.0);
  }

  LpResult run() {
    LpResult res;
    // Phase 1: minimise the sum of artificials.
    std::vector<double> c1(w_ + m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) c1[w_ + r] = 1.0;
    price(c1);
    iterate(res);
    double infeas = 0.0, scale = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= w_) infeas += beta_[r];
      scale = std::max({scale, std::abs(lp_.row_lo[r]), std::abs(lp_.row_hi[r])});
    }
    if (infeas > 1e-9 * scale) throw Infeasible("linear program is infeasible (residual " + std::to_string(infeas) + ")");
    for (std::size_t r = 0; r < m_; ++r) hi_[w_ + r] = 0.0;

    std::vector<double> c2(w_ + m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) c2[j] = lp_.c[j];
    price(c2);
    iterate(res);

    res.x.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) res.x[j] = value_[j];
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_) res.x[basis_[r]] = beta_[r];
    res.row_dual.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) res.row_dual[r] = d_[n_ + r];
    res.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) res.objective += lp_.c[j] * res.x[j];
    res.used_bland = bland_;
    return res;
  }

 private:
  double& t(std::size_t r, std::size_t j) { return t_[r * w_ + j]; }

  void price(const std::vector<double>& c) {
    for (std::size_t j = 0; j < w_; ++j) {
      double z = 0.0;
      for (std::size_t r = 0; r < m_; ++r) z += c[basis_[r]] * t(r, j);
      d_[j] = status_[j] == Status::Basic ? 0.0 : c[j] - z;
    }
  }

  bool eligible(std::size_t j, int& dir) const {
    if (status_[j] == Status::Basic || lo_[j] == hi_[j]) return false;
    double tol = opt_.tolerance;
    if (status_[j] == Status::AtLo && d_[j] < -tol) {
      dir = 1;
      return true;
    }
    if (status_[j] == Status::AtHi && d_[j] > tol) {
      dir = -1;
      return true;
    }
    return false;
  }

  void iterate(LpResult& res) {
    const double tol = opt_.tolerance;
    std::vector<std::size_t> nz;
    for (;;) {
      if (res.iterations >= opt_.max_iterations)
        throw Error("simplex iteration limit reached (" + std::to_string(opt_.max_iterations) + ")");
      std::size_t q = w_;
      int dir = 0;
      double best = 0.0;
      for (std::size_t j = 0; j < w_; ++j) {
        int dj;
        if (!eligible(j, dj)) continue;
        if (bland_) {
          q = j;
          dir = dj;
          break;
        }
        if (std::abs(d_[j]) > best) {
          best = std::abs(d_[j]);
          q = j;
          dir = dj;
        }
      }
      if (q == w_) return;

      double step = hi_[q] - lo_[q];
      std::size_t leave = m_;
      bool leave_hi = false;
      double pivot_mag = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        double a = dir * t(r, q);
        if (std::abs(a) <= tol) continue;
        std::size_t b = basis_[r];
        double lim;
        bool to_hi;
        if (a > 0) {
          lim = (beta_[r] - lo_[b]) / a;
          to_hi = false;
        } else {
          if (!std::isfinite(hi_[b])) continue;
          lim = (hi_[b] - beta_[r]) / -a;
          to_hi = true;
        }
        lim = std::max(lim, 0.0);
        bool take = false;
        double eps = 1e-12 * (1.0 + std::abs(lim));
        if (lim < step - eps)
          take = true;
        else if (lim <= step + eps)
          take = leave == m_ || (bland_ ? basis_[r] < basis_[leave] : std::abs(a) > pivot_mag);
        if (take) {
          step = lim;
          leave = r;
          leave_hi = to_hi;
          pivot_mag = std::abs(a);
        }
      }
      if (!std::isfinite(step)) throw Unbounded("linear program is unbounded; a variable lacks a finite bound");
      ++res.iterations;

      for (std::size_t r = 0; r < m_; ++r) beta_[r] -= dir * step * t(r, q);
      if (step <= tol) {
        if (++stall_ > opt_.stall_limit) bland_ = true;
      } else {
        stall_ = 0;
      }

      if (leave == m_) {
        // bound flip
        status_[q] = dir > 0 ? Status::AtHi : Status::AtLo;
        value_[q] = dir > 0 ? hi_[q] : lo_[q];
        continue;
      }

      std::size_t out = basis_[leave];
      double entering = (dir > 0 ? lo_[q] : hi_[q]) + dir * step;
      if (out < w_) {
        status_[out] = leave_hi ? Status::AtHi : Status::AtLo;
        value_[out] = leave_hi ? hi_[out] : lo_[out];
      }
      basis_[leave] = q;
      beta_[leave] = entering;
      status_[q] = Status::Basic;

      double* prow = &t(leave, 0);
      double piv = prow[q];
      nz.clear();
      for (std::size_t j = 0; j < w_; ++j) {
        if (prow[j] == 0.0) continue;
        prow[j] /= piv;
        nz.push_back(j);
      }
      prow[q] = 1.0;
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == leave) continue;
        double f = t(r, q);
        if (f == 0.0) continue;
        double* row = &t(r, 0);
        for (std::size_t j : nz) row[j] -= f * prow[j];
        row[q] = 0.0;
      }
      double f = d_[q];
      for (std::size_t j : nz) d_[j] -= f * prow[j];
      d_[q] = 0.0;
    }
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::size_t m_, n_, w_;
  std::vector<double> lo_, hi_, value_, t_, beta_, d_;
  std::vector<Status> status_;
  std::vector<std::size_t> basis_;
  bool bland_ = false;
  int stall_ = 0;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& opt) {
  std::vector<std::string> errs;
  if (lp.a.size() != lp.rows * lp.cols || lp.c.size() != lp.cols || lp.col_lo.size() != lp.cols ||
      lp.col_hi.size() != lp.cols || lp.row_lo.size() != lp.rows || lp.row_hi.size() != lp.rows)
    errs.push_back("linear program dimensions are inconsistent");
  else {
    for (std::size_t j = 0; j < lp.cols; ++j)
      if (!std::isfinite(lp.col_lo[j]) || !std::isfinite(lp.col_hi[j]) || lp.col_lo[j] > lp.col_hi[j])
        errs.push_back("column " + std::to_string(j) + " needs finite bounds lo <= hi");
    for (std::size_t r = 0; r < lp.rows; ++r)
      if (!std::isfinite(lp.row_lo[r]) || !std::isfinite(lp.row_hi[r]) || lp.row_lo[r] > lp.row_hi[r])
        errs.push_back("row " + std::to_string(r) + " needs finite bounds lo <= hi");
  }
  if (!errs.empty()) throw ValidationError(errs);
  return Tableau(lp, opt).run();
}

Certificate certify(const LinearProgram& lp, const std::vector<double>& x, const std::vector<double>& y) {
  Certificate c;
  double primal = 0.0;
  for (std::size_t j = 0; j < lp.cols; ++j) {
    c.primal_residual = std::max({c.primal_residual, lp.col_lo[j] - x[j], x[j] - lp.col_hi[j]});
    primal += lp.c[j] * x[j];
  }
  for (std::size_t r = 0; r < lp.rows; ++r) {
    double v = 0.0;
    for (std::size_t j = 0; j < lp.cols; ++j) v += lp.at(r, j) * x[j];
    c.primal_residual = std::max({c.primal_residual, lp.row_lo[r] - v, v - lp.row_hi[r]});
  }
  // Lagrangian bound: min over the box of c'x - y'(Ax - s).
  double dual = 0.0;
  for (std::size_t j = 0; j < lp.cols; ++j) {
    double d = lp.c[j];
    for (std::size_t r = 0; r < lp.rows; ++r) d -= y[r] * lp.at(r, j);
    dual += d > 0 ? d * lp.col_lo[j] : d * lp.col_hi[j];
  }
  for (std::size_t r = 0; r < lp.rows; ++r) dual += y[r] > 0 ? y[r] * lp.row_lo[r] : y[r] * lp.row_hi[r];
  c.dual_objective = dual;
  c.gap = (primal - dual) / std::max(1.0, std::abs(primal));
  return c;
}

}  // namespace gridform::dispatch
