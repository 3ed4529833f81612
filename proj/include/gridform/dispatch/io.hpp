#pragma once

#include <filesystem>
#include <string>

#include "gridform/dispatch/dispatch.hpp"

namespace gridform::dispatch {

/// Reads hour,p_ren_avail,p_load_nd rows from `csv` and the header fields
/// (alpha, e_disp_total, option, flex_min, flex_max, gen_max, ramp_fraction)
/// from the sidecar with the same stem and a .json extension, when present.
DispatchProblem read_problem(const std::filesystem::path& csv);
void write_problem(const std::filesystem::path& csv, const DispatchProblem& p);

struct SolutionPaths {
  std::filesystem::path csv;
  std::filesystem::path summary;
};

SolutionPaths write_solution(const std::filesystem::path& dir, const std::string& stem,
                             const DispatchProblem& p, const DispatchSolution& s);

}  // namespace gridform::dispatch
