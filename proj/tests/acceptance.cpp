// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Expected values are the closed forms evaluated in place plus the
// independent oracles from test_support.hpp.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pgdiscrim/gallery.hpp"
#include "pgdiscrim/problem_io.hpp"
#include "test_support.hpp"

using namespace pgdiscrim;
using namespace testsupport;
namespace ga = pgdiscrim::gallery;

namespace {

constexpr double kPi = std::numbers::pi;

class Checker {
 public:
  void require(bool ok, const std::string& detail) {
    if (!ok) failures_.push_back(detail);
  }
  void require_close(double got, double expected, double tol, const std::string& what) {
    if (!(std::abs(got - expected) <= tol)) {
      std::ostringstream os;
      os << what << ": got " << got << ", expected " << expected << " (tol " << tol << ")";
      failures_.push_back(os.str());
    }
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

int g_failed = 0;

void criterion(int id, const std::string& name, const std::function<void(Checker&)>& body) {
  Checker c;
  try {
    body(c);
  } catch (const std::exception& err) {
    c.require(false, std::string("exception: ") + err.what());
  }
  if (c.failures().empty()) {
    std::printf("[PASS] criterion %2d: %s\n", id, name.c_str());
  } else {
    ++g_failed;
    std::printf("[FAIL] criterion %2d: %s\n", id, name.c_str());
    for (const auto& detail : c.failures()) {
      std::printf("       - %s\n", detail.c_str());
    }
  }
  std::fflush(stdout);
}

double two_bases_closed_form(double theta) {
  return 0.5 * (1.0 + std::sqrt((1.0 + std::abs(std::cos(theta))) / 2.0));
}

const std::vector<double> kThetas = {0.2, 0.5, kPi / 4, kPi / 2, 2.0, 2.9};

void criterion_two_bases_values(Checker& c) {
  for (double theta : kThetas) {
    const auto gc = ga::two_bases(theta);
    const double expected = two_bases_closed_form(theta);

    const SolveResult closed = p_post(gc.problem);
    c.require(closed.method == Method::closed_form,
              "closed-form path not taken at theta=" + std::to_string(theta));
    c.require_close(closed.value, expected, 1e-7,
                    "closed p_post at theta=" + std::to_string(theta));

    const auto aux = auxiliary_ensemble(gc.problem);
    const SolveResult numeric = solve_numeric(aux.ensemble);
    c.require_close(aux.delta * numeric.value, expected, 1e-6,
                    "numeric p_post at theta=" + std::to_string(theta));

    const auto guess = compose_partition_value(gc.problem.ensemble(), gc.problem.partition());
    c.require(guess.has_value(), "composed value unavailable");
    c.require_close(*guess, 0.5, 1e-9, "p_guess at theta=" + std::to_string(theta));
    c.require_close(p_prior(gc.problem), 1.0, 1e-9,
                    "p_prior at theta=" + std::to_string(theta));
  }
}

void criterion_figure4(Checker& c) {
  const std::string path = "acceptance_fig4.csv";
  sweep_figure4_csv(kPi / 2 - 0.9, kPi / 2 + 0.9, 7, path);
  std::ifstream in(path);
  c.require(bool(in), "sweep CSV missing");
  std::string line;
  std::getline(in, line);
  c.require(line == "theta,p_post_closed,p_post_numeric,jmd_lower_bound",
            "unexpected CSV header: " + line);
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    SweepRow row;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &row.theta, &row.p_post_closed,
                    &row.p_post_numeric, &row.jmd_lower_bound) == 4) {
      rows.push_back(row);
    }
  }
  std::remove(path.c_str());
  c.require(rows.size() == 7, "expected 7 sweep rows");
  for (const auto& row : rows) {
    c.require(row.p_post_closed >= row.jmd_lower_bound - 1e-7,
              "bound exceeds p_post at theta=" + std::to_string(row.theta));
    c.require(row.p_post_numeric >= row.jmd_lower_bound - 1e-6,
              "bound exceeds numeric p_post at theta=" + std::to_string(row.theta));
    const double gap = row.p_post_closed - row.jmd_lower_bound;
    const bool at_center = std::abs(row.theta - kPi / 2) < 1e-9;
    if (at_center) {
      c.require(gap <= 1e-7, "no equality at theta=pi/2");
    } else {
      c.require(gap > 1e-7, "spurious equality at theta=" + std::to_string(row.theta));
    }
    if (std::abs(std::abs(row.theta - kPi / 2) - 0.3) < 1e-9) {
      c.require(gap > 1e-4, "gap too small at theta=pi/2 +/- 0.3");
    }
  }
}

void criterion_regimes(Checker& c) {
  for (double theta : kThetas) {
    const auto gc = ga::two_bases(theta);
    const SolveResult r = p_post(gc.problem);
    const auto aux = auxiliary_ensemble(gc.problem);
    if (std::abs(theta - kPi / 2) < 1e-12) {
      c.require(is_optimal_measurement(aux.ensemble, r.measurement),
                "optimum fails the optimality test at pi/2");
      c.require(gc.family_residual(r.measurement) <= 1e-7,
                "optimum leaves the C+/C- convex family at pi/2");
    } else {
      const char* key = theta < kPi / 2 ? "C+" : "C-";
      const double dev =
          max_effect_difference(r.measurement, gc.reference_measurements.at(key));
      c.require(dev <= 1e-7, std::string("solver optimum differs from ") + key +
                                 " at theta=" + std::to_string(theta));
    }
  }
}

void criterion_dihedral(Checker& c) {
  const std::vector<std::pair<int, double>> params = {
      {1, 0.5}, {2, 1.0 / 3.0}, {3, 0.4}, {5, 0.9}};
  for (const auto& [n, q1] : params) {
    const auto gc = ga::dihedral(n, q1);
    const double q2 = 1.0 - q1;
    const double expected =
        (n * q1 + q2 + std::sqrt(double(n) * n * q1 * q1 + q2 * q2)) / (2.0 * n);
    const SolveResult r = p_post(gc.problem);
    const std::string tag = " (n=" + std::to_string(n) + ")";
    c.require_close(r.value, expected, 1e-7, "p_post" + tag);
    const auto guess = compose_partition_value(gc.problem.ensemble(), gc.problem.partition());
    c.require(guess.has_value(), "composed value unavailable" + tag);
    c.require_close(*guess, std::max(q1, q2 / n), 1e-9, "p_guess" + tag);
    c.require(r.unique == Uniqueness::no, "uniqueness should be 'no'" + tag);
  }
}

void criterion_three_axes(Checker& c) {
  const std::vector<std::array<double, 3>> weights = {{1.0 / 3, 1.0 / 3, 1.0 / 3},
                                                      {0.5, 0.3, 0.2},
                                                      {0.98, 0.01, 0.01},
                                                      {0.2, 0.3, 0.5},
                                                      {0.25, 0.25, 0.5}};
  for (const auto& [q1, q2, q3] : weights) {
    const auto gc = ga::three_axes(q1, q2, q3);
    const double expected = 0.5 * (1.0 + std::sqrt(q1 * q1 + q2 * q2 + q3 * q3));
    c.require_close(p_post(gc.problem).value, expected, 1e-7,
                    "p_post at q1=" + std::to_string(q1));
  }
  const auto equal = ga::three_axes(1.0 / 3, 1.0 / 3, 1.0 / 3);
  const double bound = post_lower_bound_jmd(equal.problem, 1.0 / std::sqrt(3.0));
  c.require_close(p_post(equal.problem).value, bound, 1e-6,
                  "equality with the jmd bound at equal weights");
}

void criterion_mub(Checker& c) {
  for (int d = 2; d <= 7; ++d) {
    for (double q_phi : {0.5, 0.7}) {
      const std::string tag = " (d=" + std::to_string(d) + ", q=" + std::to_string(q_phi) + ")";
      const auto gc = ga::fourier_mub(d, q_phi);
      const double q_psi = 1.0 - q_phi;
      const double expected =
          0.5 * (1.0 + std::sqrt((q_phi - q_psi) * (q_phi - q_psi) +
                                 4.0 / d * q_phi * q_psi));
      const SolveResult r = p_post(gc.problem);
      c.require_close(r.value, expected, 1e-7, "p_post" + tag);

      const auto [alpha, beta] = ga::solve_alpha_beta(d, q_phi, q_psi);
      c.require(alpha > 0 && beta > 0, "alpha/beta not positive" + tag);
      c.require(std::abs(alpha * alpha + beta * beta +
                         2.0 * alpha * beta / std::sqrt(double(d)) - 1.0) <= 1e-10,
                "ellipse equation residual" + tag);
      const double root = std::sqrt((q_phi - q_psi) * (q_phi - q_psi) +
                                    4.0 / d * q_phi * q_psi);
      const double expected_ratio =
          std::sqrt(double(d)) / (2.0 * q_psi) * (q_phi - q_psi + root);
      c.require(std::abs(alpha / beta - expected_ratio) <= 1e-10,
                "eigenvector ratio residual" + tag);

      const auto aux = auxiliary_ensemble(gc.problem);
      c.require(is_optimal_measurement(aux.ensemble, gc.reference_measurements.at("C0")),
                "C0 fails the optimality test" + tag);

      const double t_phi = gc.reference.at("t_phi");
      const double t_psi = gc.reference.at("t_psi");
      c.require(std::abs(ga::mub_ellipse_residual(d, t_phi, t_psi)) <= 1e-9,
                "marginal weights miss the compatibility boundary" + tag);

      const Uniqueness expected_unique = d % 2 == 1 ? Uniqueness::yes : Uniqueness::no;
      c.require(r.unique == expected_unique, "uniqueness flag" + tag);
    }
  }
}

void criterion_jmd(Checker& c) {
  auto sharp = [](int axis) {
    Eigen::Vector3d dir = Eigen::Vector3d::Zero();
    dir(axis - 1) = 1.0;
    return Measurement::make(2, {"+", "-"},
                             {ga::bloch_state(dir.x(), dir.y(), dir.z()),
                              ga::bloch_state(-dir.x(), -dir.y(), -dir.z())});
  };
  const auto pair = jmd({sharp(1), sharp(2)}, NoiseKind::uniform);
  c.require_close(pair.mid(), 1.0 / std::sqrt(2.0), 2e-4, "jmd of the sharp pair");
  const auto triple = jmd({sharp(1), sharp(2), sharp(3)}, NoiseKind::uniform);
  c.require_close(triple.mid(), 1.0 / std::sqrt(3.0), 2e-4, "jmd of the sharp triple");

  const double t = 0.45;
  const std::vector<double> biased = {0.65, 0.35};
  std::vector<Measurement> noisy;
  for (int axis : {1, 2, 3}) noisy.push_back(noisy_version(sharp(axis), t, biased));
  const auto witness = jointly_measurable(noisy);
  c.require(witness.status == JointStatus::feasible, "biased witness not found");
  if (witness.status == JointStatus::feasible) {
    const Measurement sym = qubit_symmetrize(*witness.witness);
    for (std::size_t l = 0; l < 3; ++l) {
      const Measurement target = uniform_noisy_version(sharp(int(l) + 1), t);
      c.require(max_effect_difference(marginal(sym, l), target) <= 1e-7,
                "symmetrized witness misses the uniform marginal " + std::to_string(l));
    }
  }
}

void criterion_gap_diagnostic(Checker& c) {
  const auto compatible = compatibility_gap(commuting_diagonal_problem());
  c.require(compatible.verdict == GapVerdict::compatible_optima_exist,
            "commuting problem not reported compatible");
  const auto incompatible = compatibility_gap(ga::two_bases(kPi / 2).problem);
  c.require(incompatible.verdict == GapVerdict::incompatible_optima,
            "pi/2 two-bases problem not reported incompatible");

  SolveOptions opts;
  opts.gap_tol = 1e-9;
  opts.max_iter = 30000;
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + int(rng() % 2);
    const StateEnsemble e = random_ensemble(d, 4, rng);
    const Partition p =
        Partition::make(e, {{e.label(0), e.label(1)}, {e.label(2), e.label(3)}});
    const PostInfoProblem prob(e, p);
    const auto r = compatibility_gap(prob, opts);
    c.require(r.gap >= -1e-8,
              "negative gap " + std::to_string(r.gap) + " on trial " + std::to_string(trial));
  }
}

void criterion_oracles(Checker& c) {
  std::mt19937_64 rng(4242);
  int eq24_cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    StateEnsemble e = [&]() -> StateEnsemble {
      if (trial % 3 == 1) {
        // Uniformly weighted random orthonormal basis: the closed-form
        // condition holds with mu = 1.
        const int d = 2 + int(rng() % 3);
        const Matrix q = Eigen::HouseholderQR<Matrix>(random_matrix(d, rng))
                             .householderQ();
        std::vector<Matrix> elements;
        for (int i = 0; i < d; ++i) {
          elements.push_back(q.col(i) * q.col(i).adjoint() / double(d));
        }
        return StateEnsemble::make(d, numbered_labels(std::size_t(d)), elements);
      }
      if (trial % 3 == 2) {
        std::uniform_real_distribution<double> angle(0.1, kPi - 0.1);
        return auxiliary_ensemble(ga::two_bases(angle(rng)).problem).ensemble;
      }
      const int d = 2 + int(rng() % 3);
      const std::size_t n = 2 + rng() % 5;
      return random_ensemble(d, n, rng);
    }();

    try {
      const SolveResult numeric = solve_numeric(e);
      c.require(numeric.certificate_gap <= 1e-7,
                "certificate gap " + std::to_string(numeric.certificate_gap) +
                    " on trial " + std::to_string(trial));
      if (const auto closed = solve_closed_form(e)) {
        ++eq24_cases;
        c.require(std::abs(closed->value - numeric.value) <= 1e-6,
                  "closed/numeric disagreement on trial " + std::to_string(trial));
      }
    } catch (const NoConvergence& err) {
      c.require(false, "no convergence on trial " + std::to_string(trial) + " (gap " +
                           std::to_string(err.gap) + ")");
    }
  }
  c.require(eq24_cases >= 30, "too few closed-form cases generated");

  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix a = random_psd(3, rng);
    const Matrix b = random_effect(3, rng);
    const EigenPair top = largest_eigenpair(a);
    const double lhs = trace_inner(a, b);
    const double rhs = top.value * real_trace(b);
    c.require(lhs <= rhs + 1e-10, "trace bound violated on trial " + std::to_string(trial));
    if (std::abs(lhs - rhs) <= 1e-8) {
      c.require(max_eigenvalue(b - top.projector) <= 1e-8,
                "equality case without domination on trial " + std::to_string(trial));
    }
  }
}

void criterion_appendix_a(Checker& c) {
  const auto gc = ga::appendix_a_case();
  const StateEnsemble& e = gc.problem.ensemble();
  for (const char* key : {"M0", "M1"}) {
    const Measurement& m = gc.reference_measurements.at(key);
    Matrix sum = Matrix::Zero(3, 3);
    for (std::size_t i = 0; i < m.size(); ++i) {
      sum += m.effect(i);
      c.require(min_eigenvalue(m.effect(i)) >= -1e-10,
                std::string(key) + " effect not PSD");
    }
    c.require(max_abs(sum - identity(3)) <= 1e-9, std::string(key) + " does not sum to I");
    c.require_close(guess_prob(e, m), 0.5, 1e-10, std::string(key) + " value");
  }
  const auto solved = solve_closed_form(e);
  c.require(solved.has_value(), "closed form unavailable");
  if (solved) {
    c.require(solved->unique == Uniqueness::unknown, "uniqueness should be 'unknown'");
  }
}

void criterion_sandwich(Checker& c) {
  std::vector<ga::GalleryCase> cases;
  for (double theta : {0.5, kPi / 4, kPi / 2, 2.0}) cases.push_back(ga::two_bases(theta));
  cases.push_back(ga::dihedral(1, 0.5));
  cases.push_back(ga::dihedral(2, 1.0 / 3.0));
  cases.push_back(ga::dihedral(3, 0.4));
  cases.push_back(ga::three_axes(1.0 / 3, 1.0 / 3, 1.0 / 3));
  cases.push_back(ga::three_axes(0.5, 0.3, 0.2));
  for (int d : {2, 3, 4, 5}) cases.push_back(ga::fourier_mub(d, d == 4 ? 0.7 : 0.5));
  cases.push_back(ga::appendix_a_case());

  for (const auto& gc : cases) {
    const std::string tag = " (" + gc.name + ")";
    const double post = p_post(gc.problem).value;
    const double prior = p_prior(gc.problem);
    const auto composed =
        compose_partition_value(gc.problem.ensemble(), gc.problem.partition());
    const double guess = composed ? *composed : solve(gc.problem.ensemble()).value;
    c.require(guess <= post + 1e-7, "p_guess exceeds p_post" + tag);
    c.require(post <= prior + 1e-7, "p_post exceeds p_prior" + tag);
    try {
      c.require(cloning_bound(gc.problem) <= post + 1e-7,
                "cloning bound exceeds p_post" + tag);
    } catch (const NonUniformPrior&) {
      // The cloning bound only covers uniform priors.
    }
    const auto it = gc.reference.find("jmd");
    if (it != gc.reference.end()) {
      c.require(post_lower_bound_jmd(gc.problem, it->second) <= post + 1e-7,
                "jmd bound exceeds p_post" + tag);
    }
  }
}

}  // namespace

int main() {
  criterion(1, "two-bases family: closed form, numeric, p_guess, p_prior",
            criterion_two_bases_values);
  criterion(2, "figure sweep: bound comparison with equality only at pi/2",
            criterion_figure4);
  criterion(3, "two-bases optimal-measurement regimes", criterion_regimes);
  criterion(4, "dihedral family values and non-uniqueness", criterion_dihedral);
  criterion(5, "three-axes family values and tight bound", criterion_three_axes);
  criterion(6, "mub family: values, eigenvector system, boundary, uniqueness",
            criterion_mub);
  criterion(7, "joint measurability degrees and antiunitary symmetrization",
            criterion_jmd);
  criterion(8, "compatibility gap diagnostic", criterion_gap_diagnostic);
  criterion(9, "oracle equivalence on random ensembles", criterion_oracles);
  criterion(10, "rank-2 counterexample", criterion_appendix_a);
  criterion(11, "sandwich inequalities and lower bounds on the gallery",
            criterion_sandwich);

  if (g_failed == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failed);
  return 1;
}
