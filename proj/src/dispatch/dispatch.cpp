#include "gridform/dispatch/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gridform::dispatch {

std::vector<double> DispatchSolution::p_load_tot(const DispatchProblem& p) const {
  std::vector<double> out(p_load_dis.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p_load_dis[i] + p.p_load_nd[i];
  return out;
}

DispatchSolution solve(const DispatchProblem& p, const SimplexOptions& opt) {
  LinearProgram lp = build(p);
  LpResult r = solve_lp(lp, opt);
  Layout L{p.hours()};
  DispatchSolution s;
  for (std::size_t i = 0; i < p.hours(); ++i) {
    s.p_ren.push_back(r.x[L.ren(i)]);
    s.p_gencon.push_back(r.x[L.gen(i)]);
    s.p_load_dis.push_back(r.x[L.dis(i)]);
  }
  s.objective = r.objective;
  s.iterations = r.iterations;
  s.certificate = certify(lp, r.x, r.row_dual);
  return s;
}

double constraint_violation(const DispatchProblem& p, const DispatchSolution& s) {
  const std::size_t h = p.hours();
  if (s.p_ren.size() != h || s.p_gencon.size() != h || s.p_load_dis.size() != h) return kInf;
  double worst = 0.0;
  auto over = [&](double v) { worst = std::max(worst, v); };
  double e = 0.0;
  for (std::size_t i = 0; i < h; ++i) {
    over(std::abs(s.p_ren[i] + s.p_gencon[i] - s.p_load_dis[i] - p.p_load_nd[i]));
    over(s.p_ren[i] - p.reserve() * p.p_ren_avail[i]);
    over(-s.p_ren[i]);
    over(-s.p_gencon[i]);
    e += s.p_load_dis[i];
  }
  over(std::abs(e - p.e_disp_total));
  if (p.option == Option::A) {
    double level = p.e_disp_total / static_cast<double>(h);
    for (double d : s.p_load_dis) over(std::abs(d - level));
  }
  return worst;
}

EnergyReport report(const DispatchProblem& p, const DispatchSolution& s) {
  EnergyReport r;
  for (std::size_t i = 0; i < p.hours(); ++i) {
    r.renewable_gwh += s.p_ren[i];
    r.conventional_gwh += s.p_gencon[i];
    r.curtailment_gwh += p.p_ren_avail[i] - s.p_ren[i];
    r.flexible_gwh += s.p_load_dis[i];
    r.nd_load_gwh += p.p_load_nd[i];
  }
  for (double* v : {&r.renewable_gwh, &r.conventional_gwh, &r.curtailment_gwh, &r.flexible_gwh, &r.nd_load_gwh})
    *v /= 1000.0;
  return r;
}

std::string format(Option o, const EnergyReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s: renewable %.2f GWh, conventional %.2f GWh, curtailment %.2f GWh, flexible load %.2f GWh",
                to_string(o), r.renewable_gwh, r.conventional_gwh, r.curtailment_gwh, r.flexible_gwh);
  return buf;
}

}  // namespace gridform::dispatch
