#include "gridform/dispatch/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gridform::dispatch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

DispatchProblem read_problem(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) throw ValidationError({"cannot open " + csv.string()});
  DispatchProblem p;
  std::vector<std::string> errs;
  std::string line;
  int col_ren = -1, col_nd = -1;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    auto cells = split(line);
    if (col_ren < 0) {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        if (cells[k] == "p_ren_avail") col_ren = static_cast<int>(k);
        if (cells[k] == "p_load_nd") col_nd = static_cast<int>(k);
      }
      if (col_ren < 0 || col_nd < 0) throw ValidationError({csv.string() + ": header needs p_ren_avail and p_load_nd"});
      continue;
    }
    auto get = [&](int k, std::vector<double>& dst) {
      try {
        std::size_t used = 0;
        const std::string& s = cells.at(static_cast<std::size_t>(k));
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        dst.push_back(v);
      } catch (const std::exception&) {
        errs.push_back(csv.string() + ":" + std::to_string(lineno) + ": bad number");
        dst.push_back(0.0);
      }
    };
    get(col_ren, p.p_ren_avail);
    get(col_nd, p.p_load_nd);
  }
  if (col_ren < 0) errs.push_back(csv.string() + ": empty file");

  fs::path side = fs::path(csv).replace_extension(".json");
  if (fs::exists(side)) {
    std::ifstream js(side);
    json j;
    try {
      j = json::parse(js);
      if (j.contains("alpha")) p.alpha = j.at("alpha").get<double>();
      if (j.contains("e_disp_total")) p.e_disp_total = j.at("e_disp_total").get<double>();
      if (j.contains("option")) p.option = parse_option(j.at("option").get<std::string>());
      if (j.contains("flex_min") || j.contains("flex_max")) {
        Range d = p.flex_range();
        p.flex = Range{j.value("flex_min", d.lo), j.value("flex_max", d.hi)};
      }
      if (j.contains("gen_max")) p.gen_max = j.at("gen_max").get<double>();
      if (j.contains("ramp_fraction"))
        p.ramp_fraction = j.at("ramp_fraction").is_null() ? kInf : j.at("ramp_fraction").get<double>();
    } catch (const ValidationError& e) {
      for (const auto& x : e.problems()) errs.push_back(side.string() + ": " + x);
    } catch (const json::exception& e) {
      errs.push_back(side.string() + ": " + e.what());
    }
  } else {
    errs.push_back("missing header file " + side.string() + " (needs at least e_disp_total)");
  }
  if (errs.empty())
    for (const auto& e : p.problems()) errs.push_back(csv.string() + ": " + e);
  if (!errs.empty()) throw ValidationError(errs);
  return p;
}

void write_problem(const fs::path& csv, const DispatchProblem& p) {
  if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
  std::ofstream out(csv);
  out << "hour,p_ren_avail,p_load_nd\n";
  for (std::size_t i = 0; i < p.hours(); ++i)
    out << i + 1 << ',' << num(p.p_ren_avail[i]) << ',' << num(p.p_load_nd[i]) << '\n';
  json j{{"alpha", p.alpha}, {"e_disp_total", p.e_disp_total}, {"option", to_string(p.option)}};
  if (p.flex) {
    j["flex_min"] = p.flex->lo;
    j["flex_max"] = p.flex->hi;
  }
  if (p.gen_max) j["gen_max"] = *p.gen_max;
  if (std::isfinite(p.ramp_fraction))
    j["ramp_fraction"] = p.ramp_fraction;
  else
    j["ramp_fraction"] = nullptr;
  std::ofstream(fs::path(csv).replace_extension(".json")) << j.dump(2) << '\n';
}

SolutionPaths write_solution(const fs::path& dir, const std::string& stem, const DispatchProblem& p,
                             const DispatchSolution& s) {
  fs::create_directories(dir);
  SolutionPaths paths{dir / (stem + ".csv"), dir / (stem + ".json")};
  std::ofstream out(paths.csv);
  out << "hour,p_ren_avail,p_ren,p_gencon,p_load_dis,p_load_nd,p_load_tot,curtailment\n";
  auto tot = s.p_load_tot(p);
  for (std::size_t i = 0; i < p.hours(); ++i)
    out << i + 1 << ',' << num(p.p_ren_avail[i]) << ',' << num(s.p_ren[i]) << ',' << num(s.p_gencon[i]) << ','
        << num(s.p_load_dis[i]) << ',' << num(p.p_load_nd[i]) << ',' << num(tot[i]) << ','
        << num(p.p_ren_avail[i] - s.p_ren[i]) << '\n';
  EnergyReport r = report(p, s);
  json j{{"option", to_string(p.option)},
         {"alpha", p.reserve()},
         {"hours", p.hours()},
         {"status", "optimal"},
         {"objective_mwh", s.objective},
         {"renewable_gwh", r.renewable_gwh},
         {"conventional_gwh", r.conventional_gwh},
         {"curtailment_gwh", r.curtailment_gwh},
         {"flexible_gwh", r.flexible_gwh},
         {"nd_load_gwh", r.nd_load_gwh},
         {"primal_residual", s.certificate.primal_residual},
         {"duality_gap", s.certificate.gap},
         {"iterations", s.iterations}};
  std::ofstream(paths.summary) << j.dump(2) << '\n';
  return paths;
}

}  // namespace gridform::dispatch
