#include "gridform/dispatch/problem.hpp"

#include <algorithm>
#include <cmath>

namespace gridform::dispatch {

const char* to_string(Option o) {
  switch (o) {
    case Option::A: return "A";
    case Option::B: return "B";
    case Option::C: return "C";
  }
  return "?";
}

Option parse_option(const std::string& s) {
  if (s == "A" || s == "a") return Option::A;
  if (s == "B" || s == "b") return Option::B;
  if (s == "C" || s == "c") return Option::C;
  throw ValidationError({"option must be A, B or C, got '" + s + "'"});
}

Range DispatchProblem::flex_range() const {
  if (flex) return *flex;
  double h = static_cast<double>(hours());
  return {0.0, h > 0 ? 2.0 * e_disp_total / h : 0.0};
}

double DispatchProblem::gen_limit() const {
  if (gen_max) return *gen_max;
  double nd = p_load_nd.empty() ? 0.0 : *std::max_element(p_load_nd.begin(), p_load_nd.end());
  return nd + flex_range().hi;
}

std::vector<std::string> DispatchProblem::problems() const {
  std::vector<std::string> out;
  std::size_t h = hours();
  if (h == 0) out.push_back("horizon is empty");
  if (p_ren_avail.size() != h)
    out.push_back("p_ren_avail has " + std::to_string(p_ren_avail.size()) + " hours, p_load_nd has " +
                  std::to_string(h));
  auto series = [&](const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!std::isfinite(v[i]) || v[i] < 0) {
        out.push_back(std::string(name) + "[" + std::to_string(i) + "] must be finite and >= 0");
        return;
      }
  };
  series(p_ren_avail, "p_ren_avail");
  series(p_load_nd, "p_load_nd");
  if (!(alpha > 0 && alpha <= 1)) out.push_back("alpha must be in (0, 1]");
  if (!std::isfinite(e_disp_total) || e_disp_total < 0) out.push_back("e_disp_total must be finite and >= 0");
  if (!(ramp_fraction > 0)) out.push_back("ramp_fraction must be > 0");
  if (gen_max && !(std::isfinite(*gen_max) && *gen_max >= 0)) out.push_back("gen_max must be finite and >= 0");
  Range f = flex_range();
  if (!(std::isfinite(f.lo) && std::isfinite(f.hi) && f.lo >= 0 && f.lo <= f.hi))
    out.push_back("flexible load bounds must satisfy 0 <= min <= max");
  else if (h > 0) {
    double hd = static_cast<double>(h);
    double tol = 1e-9 * std::max(1.0, e_disp_total);
    if (e_disp_total < hd * f.lo - tol || e_disp_total > hd * f.hi + tol)
      out.push_back("e_disp_total must lie in [h*flex_min, h*flex_max]");
  }
  return out;
}

std::size_t LinearProgram::add_column(std::string name, double cost, double lo, double hi) {
  for (std::size_t r = rows; r-- > 0;) a.insert(a.begin() + static_cast<long>(r * cols + cols), 0.0);
  ++cols;
  c.push_back(cost);
  col_lo.push_back(lo);
  col_hi.push_back(hi);
  col_names.push_back(std::move(name));
  return cols - 1;
}

std::size_t LinearProgram::add_row(std::string name, double lo, double hi) {
  a.resize(a.size() + cols, 0.0);
  row_lo.push_back(lo);
  row_hi.push_back(hi);
  row_names.push_back(std::move(name));
  return rows++;
}

LinearProgram build(const DispatchProblem& p) {
  if (auto errs = p.problems(); !errs.empty()) throw ValidationError(errs);

  const std::size_t h = p.hours();
  const Range f = p.flex_range();
  const double g = p.gen_limit();
  const double rho = p.reserve();
  const bool constant_flex = p.option == Option::A;
  const double e_hour = p.e_disp_total / static_cast<double>(h);

  std::vector<std::string> gaps;
  for (std::size_t i = 0; i < h; ++i) {
    double dlo = constant_flex ? e_hour : f.lo;
    if (p.p_load_nd[i] + dlo > rho * p.p_ren_avail[i] + g + 1e-9)
      gaps.push_back("hour " + std::to_string(i) + ": minimum demand exceeds renewable and generation limits");
  }
  if (!gaps.empty()) {
    std::string msg = "structurally infeasible: " + gaps.front();
    if (gaps.size() > 1) msg += " (and " + std::to_string(gaps.size() - 1) + " more)";
    throw Infeasible(msg);
  }

  LinearProgram lp;
  lp.cols = 3 * h;
  lp.c.assign(lp.cols, 0.0);
  lp.col_lo.assign(lp.cols, 0.0);
  lp.col_hi.assign(lp.cols, 0.0);
  lp.col_names.resize(lp.cols);
  Layout L{h};
  double ren_top = 0.0;
  for (std::size_t i = 0; i < h; ++i) {
    std::string k = std::to_string(i);
    lp.col_hi[L.ren(i)] = rho * p.p_ren_avail[i];
    ren_top = std::max(ren_top, lp.col_hi[L.ren(i)]);
    lp.col_names[L.ren(i)] = "p_ren[" + k + "]";
    lp.c[L.gen(i)] = 1.0;
    lp.col_hi[L.gen(i)] = g;
    lp.col_names[L.gen(i)] = "p_gencon[" + k + "]";
    lp.col_lo[L.dis(i)] = constant_flex ? e_hour : f.lo;
    lp.col_hi[L.dis(i)] = constant_flex ? e_hour : f.hi;
    lp.col_names[L.dis(i)] = "p_load_dis[" + k + "]";
  }

  for (std::size_t i = 0; i < h; ++i) {
    std::size_t r = lp.add_row("balance[" + std::to_string(i) + "]", p.p_load_nd[i], p.p_load_nd[i]);
    lp.at(r, L.ren(i)) = 1.0;
    lp.at(r, L.gen(i)) = 1.0;
    lp.at(r, L.dis(i)) = -1.0;
  }
  std::size_t re = lp.add_row("energy", p.e_disp_total, p.e_disp_total);
  for (std::size_t i = 0; i < h; ++i) lp.at(re, L.dis(i)) = 1.0;

  if (std::isfinite(p.ramp_fraction)) {
    struct Group {
      const char* name;
      std::size_t (Layout::*col)(std::size_t) const;
      double limit;
    };
    std::vector<Group> groups{{"ramp_ren", &Layout::ren, p.ramp_fraction * ren_top},
                              {"ramp_gen", &Layout::gen, p.ramp_fraction * g}};
    if (!constant_flex) groups.push_back({"ramp_dis", &Layout::dis, p.ramp_fraction * f.hi});
    for (const auto& grp : groups)
      for (std::size_t i = 1; i < h; ++i) {
        std::size_t r = lp.add_row(std::string(grp.name) + "[" + std::to_string(i) + "]", -grp.limit, grp.limit);
        lp.at(r, (L.*grp.col)(i)) = 1.0;
        lp.at(r, (L.*grp.col)(i - 1)) = -1.0;
      }
  }
  return lp;
}

}  // namespace gridform::dispatch
