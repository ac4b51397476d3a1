#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pgdiscrim/post_info.hpp"

namespace pgdiscrim {

// JSON document layout:
//   {
//     "dim": 2,
//     "labels": ["+a", "-a", ...],                  // strings or string arrays
//     "operators": {"+a": [[[re,im], ...], ...]},   // row-major matrices
//     "partition": [["+a","-a"], ["+b","-b"]]
//   }
// A shortcut form replaces "operators" with "states" plus "probabilities",
// expanding E(x) = p(x) rho_x.
PostInfoProblem load_problem(const std::string& path);
PostInfoProblem problem_from_json_string(const std::string& text,
                                         const std::string& origin = "<string>");
std::string problem_to_json_string(const PostInfoProblem& prob, int indent = 2);
void save_problem(const PostInfoProblem& prob, const std::string& path);

std::string measurement_to_json_string(const Measurement& m, int indent = 2);
Measurement measurement_from_json_string(const std::string& text,
                                         const std::string& origin = "<string>");

// Exact rational parsing of CLI weight flags such as "1/3" or "0.25".
double parse_fraction(const std::string& text);
std::vector<double> parse_weight_list(const std::string& text);

// One row of the lower-bound comparison sweep over the two-bases family.
struct SweepRow {
  double theta = 0.0;
  double p_post_closed = 0.0;
  double p_post_numeric = 0.0;
  double jmd_lower_bound = 0.0;
};

std::vector<SweepRow> sweep_figure4(double theta_min, double theta_max, int steps,
                                    const SolveOptions& opts = {});
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void sweep_figure4_csv(double theta_min, double theta_max, int steps,
                       const std::string& out_path, const SolveOptions& opts = {});

}  // namespace pgdiscrim
