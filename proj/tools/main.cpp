// Command line front end: gallery cases, problems from JSON files, the
// lower-bound sweep, joint measurability degrees, and bounds reports.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pgdiscrim/gallery.hpp"
#include "pgdiscrim/problem_io.hpp"

namespace {

using namespace pgdiscrim;
using nlohmann::json;

struct CaseFlags {
  std::string target;  // case name or file path
  std::string q = "";
  std::string q_phi = "";
  double theta = std::numbers::pi / 2;
  int d = 2;
  int n = 1;
};

struct OutputFlags {
  std::string format = "text";
  std::string out;
  bool emit_povm = false;
};

void add_case_flags(CLI::App* cmd, CaseFlags& flags) {
  cmd->add_option("target", flags.target,
                  "gallery case (two-bases, dihedral, three-axes, mub, appendix-a) "
                  "or a problem JSON file")
      ->required();
  cmd->add_option("--theta", flags.theta, "two-bases angle in (0, pi)");
  cmd->add_option("--q", flags.q, "weights; fractions allowed, e.g. 1/3,1/3,1/3");
  cmd->add_option("--q-phi", flags.q_phi, "mub first-basis weight");
  cmd->add_option("--d", flags.d, "mub dimension");
  cmd->add_option("--n", flags.n, "dihedral ring parameter");
}

bool looks_like_file(const std::string& target) {
  return target.find('.') != std::string::npos || target.find('/') != std::string::npos;
}

struct LoadedCase {
  std::optional<gallery::GalleryCase> gallery_case;
  std::optional<PostInfoProblem> problem;

  const PostInfoProblem& prob() const {
    return gallery_case ? gallery_case->problem : *problem;
  }
  std::string describe() const {
    return gallery_case ? gallery_case->name : std::string("file");
  }
};

LoadedCase load_case(const CaseFlags& flags) {
  LoadedCase loaded;
  if (flags.target == "two-bases") {
    const double q = flags.q.empty() ? 0.5 : parse_fraction(flags.q);
    loaded.gallery_case = gallery::two_bases(flags.theta, q);
  } else if (flags.target == "dihedral") {
    const double q1 = flags.q.empty() ? 0.5 : parse_fraction(flags.q);
    loaded.gallery_case = gallery::dihedral(flags.n, q1);
  } else if (flags.target == "three-axes") {
    std::vector<double> q = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    if (!flags.q.empty()) q = parse_weight_list(flags.q);
    if (q.size() != 3) throw BadArgs("three-axes needs exactly three weights");
    loaded.gallery_case = gallery::three_axes(q[0], q[1], q[2]);
  } else if (flags.target == "mub") {
    const double qp = flags.q_phi.empty() ? 0.5 : parse_fraction(flags.q_phi);
    loaded.gallery_case = gallery::fourier_mub(flags.d, qp);
  } else if (flags.target == "appendix-a") {
    loaded.gallery_case = gallery::appendix_a_case();
  } else if (looks_like_file(flags.target)) {
    loaded.problem = load_problem(flags.target);
  } else {
    throw UnknownCase("unknown case '" + flags.target + "'");
  }
  return loaded;
}

void write_output(const OutputFlags& flags, const std::string& text) {
  if (flags.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(flags.out);
  if (!out) throw IoError("cannot write '" + flags.out + "'");
  out << text;
}

std::string format_report(const json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format == "csv") {
    std::string header;
    std::string row;
    for (const auto& [key, value] : report.items()) {
      if (value.is_object() || value.is_array()) continue;
      if (!header.empty()) {
        header += ",";
        row += ",";
      }
      header += key;
      if (value.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.9f", value.get<double>());
        row += buf;
      } else {
        row += value.is_string() ? value.get<std::string>() : value.dump();
      }
    }
    return header + "\n" + row + "\n";
  }
  std::string text;
  for (const auto& [key, value] : report.items()) {
    if (value.is_object() || value.is_array()) continue;
    char buf[96];
    if (value.is_number()) {
      std::snprintf(buf, sizeof(buf), "%-18s %.9f\n", (key + ":").c_str(),
                    value.get<double>());
    } else {
      std::snprintf(buf, sizeof(buf), "%-18s %s\n", (key + ":").c_str(),
                    value.is_string() ? value.get<std::string>().c_str()
                                      : value.dump().c_str());
    }
    text += buf;
  }
  return text;
}

int run_command(const CaseFlags& flags, const OutputFlags& output, bool with_bounds,
                const SolveOptions& opts) {
  const LoadedCase loaded = load_case(flags);
  const PostInfoProblem& prob = loaded.prob();

  json report;
  report["case"] = loaded.describe();
  const SolveResult post = p_post(prob, opts);
  const double prior = p_prior(prob, opts);
  const auto p_guess = compose_partition_value(prob.ensemble(), prob.partition());
  report["p_guess"] =
      p_guess ? *p_guess : solve(prob.ensemble(), opts).value;
  report["p_prior"] = prior;
  report["p_post"] = post.value;
  report["gap"] = prior - post.value;
  if (prior - post.value <= 1e-7) {
    report["verdict"] = "compatible_optima_exist";
  } else if (prior - post.value > 1e-6) {
    report["verdict"] = "incompatible_optima";
  } else {
    report["verdict"] = "inconclusive";
  }
  report["method"] = to_string(post.method);
  report["unique"] = to_string(post.unique);
  report["certificate_gap"] = post.certificate_gap;

  if (with_bounds) {
    try {
      report["cloning_bound"] = cloning_bound(prob, opts);
    } catch (const NonUniformPrior&) {
      report["cloning_bound_note"] = "skipped: prior is not uniform";
    }
    if (loaded.gallery_case) {
      const auto it = loaded.gallery_case->reference.find("jmd");
      if (it != loaded.gallery_case->reference.end()) {
        report["jmd"] = it->second;
        report["jmd_lower_bound"] = post_lower_bound_jmd(prob, it->second, opts);
      }
    }
  }

  std::string text = format_report(report, output.format);
  if (output.emit_povm) {
    if (output.format == "json") {
      json with_povm = report;
      with_povm["povm"] = json::parse(measurement_to_json_string(post.measurement));
      text = with_povm.dump(2) + "\n";
    } else {
      text += measurement_to_json_string(post.measurement) + "\n";
    }
  }
  write_output(output, text);
  return 0;
}

int jmd_command(const CaseFlags& flags, const OutputFlags& output,
                const std::string& noise, double bisect_tol, const SolveOptions& opts) {
  const LoadedCase loaded = load_case(flags);
  const PostInfoProblem& prob = loaded.prob();

  std::vector<Measurement> optima;
  for (std::size_t l = 0; l < prob.block_count(); ++l) {
    optima.push_back(solve(prob.block_ensemble(l).ensemble, opts).measurement);
  }
  JmdOptions jopts;
  jopts.bisect_tol = bisect_tol;
  const NoiseKind kind =
      noise == "distribution" ? NoiseKind::distribution : NoiseKind::uniform;
  const JmdEstimate est = jmd(optima, kind, jopts);

  json report;
  report["case"] = loaded.describe();
  report["noise"] = to_string(est.noise_kind);
  report["jmd_lower"] = est.lower;
  report["jmd_upper"] = est.upper;
  report["jmd"] = est.mid();
  write_output(output, format_report(report, output.format));
  return 0;
}

int bounds_command(const CaseFlags& flags, const OutputFlags& output,
                   const SolveOptions& opts) {
  return run_command(flags, output, /*with_bounds=*/true, opts);
}

int validate_command(const std::string& path) {
  const PostInfoProblem prob = load_problem(path);
  std::cout << "OK: dim=" << prob.ensemble().dim() << " labels=" << prob.ensemble().size()
            << " blocks=" << prob.block_count() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal guessing probabilities for state discrimination with "
               "post-measurement information"};
  app.require_subcommand(1);
  app.fallthrough();

  SolveOptions opts;
  double tol = kDegeneracyTol;
  app.add_option("--tol", tol, "spectral / condition tolerance")->capture_default_str();
  app.add_option("--gap-tol", opts.gap_tol, "numeric solver duality gap target")
      ->capture_default_str();
  app.add_option("--seed", opts.seed, "numeric solver restart seed")
      ->capture_default_str();

  CaseFlags run_flags;
  OutputFlags run_output;
  bool run_bounds = false;
  auto* run = app.add_subcommand("run", "solve a gallery case or problem file");
  add_case_flags(run, run_flags);
  run->add_flag("--emit-povm", run_output.emit_povm, "include the optimal POVM");
  run->add_flag("--bounds", run_bounds, "include cloning/jmd lower bounds");
  run->add_option("--format", run_output.format, "text|json|csv")->capture_default_str();
  run->add_option("--out", run_output.out, "write the report to a file");

  double theta_min = 0.2;
  double theta_max = std::numbers::pi - 0.2;
  int steps = 25;
  std::string sweep_out = "fig4.csv";
  auto* sweep = app.add_subcommand("sweep-fig4",
                                   "two-bases sweep: optimal value vs jmd lower bound");
  sweep->add_option("--theta-min", theta_min)->capture_default_str();
  sweep->add_option("--theta-max", theta_max)->capture_default_str();
  sweep->add_option("--steps", steps)->capture_default_str();
  sweep->add_option("--out", sweep_out, "output CSV path")->capture_default_str();

  CaseFlags jmd_flags;
  OutputFlags jmd_output;
  std::string noise = "uniform";
  double bisect_tol = 1e-4;
  auto* jmd_cmd = app.add_subcommand("jmd",
                                     "joint measurability degree of the optimal "
                                     "subensemble measurements");
  add_case_flags(jmd_cmd, jmd_flags);
  jmd_cmd->add_option("--noise", noise, "uniform|distribution")->capture_default_str();
  jmd_cmd->add_option("--bisect-tol", bisect_tol)->capture_default_str();
  jmd_cmd->add_option("--format", jmd_output.format, "text|json|csv")->capture_default_str();
  jmd_cmd->add_option("--out", jmd_output.out, "write the report to a file");

  CaseFlags bounds_flags;
  OutputFlags bounds_output;
  auto* bounds = app.add_subcommand("bounds", "lower bounds next to the optimal value");
  add_case_flags(bounds, bounds_flags);
  bounds->add_option("--format", bounds_output.format, "text|json|csv")
      ->capture_default_str();
  bounds->add_option("--out", bounds_output.out, "write the report to a file");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a problem JSON file");
  validate->add_option("file", validate_path, "problem JSON file")->required();

  CLI11_PARSE(app, argc, argv);
  opts.spectral_tol = tol;

  try {
    if (run->parsed()) return run_command(run_flags, run_output, run_bounds, opts);
    if (sweep->parsed()) {
      sweep_figure4_csv(theta_min, theta_max, steps, sweep_out, opts);
      std::cout << "wrote " << sweep_out << "\n";
      return 0;
    }
    if (jmd_cmd->parsed()) {
      return jmd_command(jmd_flags, jmd_output, noise, bisect_tol, opts);
    }
    if (bounds->parsed()) return bounds_command(bounds_flags, bounds_output, opts);
    if (validate->parsed()) return validate_command(validate_path);
  } catch (const pgdiscrim::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
