#pragma once

#include "pgdiscrim/post_info.hpp"

namespace pgdiscrim {

enum class NoiseKind { uniform, distribution };
const char* to_string(NoiseKind k);

// Mixing weights and noise distributions for a family of measurements:
// N~(x) = t N(x) + (1-t) nu(x) I.
struct NoiseModel {
  NoiseKind kind = NoiseKind::uniform;
  std::vector<double> t;                      // one weight per measurement
  std::vector<std::vector<double>> nu;        // per-measurement distributions
};

Measurement noisy_version(const Measurement& n, double t, const std::vector<double>& nu);
Measurement uniform_noisy_version(const Measurement& n, double t);
std::vector<Measurement> noisy_versions(const std::vector<Measurement>& ns,
                                        const NoiseModel& model);

enum class JointStatus { feasible, infeasible, undecided };
const char* to_string(JointStatus s);

struct JointOptions {
  double tol = 1e-10;        // PSD violation accepted as feasible
  int max_iter = 50000;
  int stall_window = 500;
  double stall_eps = 1e-12;  // minimum residual progress per window
  std::size_t cap = max_product_outcomes();
};

struct JointResult {
  JointStatus status = JointStatus::undecided;
  std::optional<Measurement> witness;  // present when feasible
  double residual = 0.0;               // PSD violation at exact-marginal iterate
  int iterations = 0;
};

// Searches for a product-outcome measurement with the given marginals by
// alternating projections between the PSD cone and the affine set of
// marginal constraints. A stalled residual above 10*tol reports infeasible
// (the residual is the separation estimate); in between it stays undecided.
JointResult jointly_measurable(const std::vector<Measurement>& ns,
                               const JointOptions& opts = {});

struct JmdEstimate {
  double lower = 0.0;
  double upper = 0.0;
  NoiseKind noise_kind = NoiseKind::uniform;
  double mid() const { return 0.5 * (lower + upper); }
};

struct JmdOptions {
  double bisect_tol = 1e-4;
  double grid_step = 0.05;   // simplex grid for distribution-kind noise
  JointOptions joint;
};

// Joint measurability degree: the largest common t making the noisy versions
// compatible, bracketed by bisection. The distribution kind optimizes the
// noise distributions by coordinate search over a simplex grid, refined once
// around the best point.
JmdEstimate jmd(const std::vector<Measurement>& ns, NoiseKind kind,
                const JmdOptions& opts = {});

// Lower bound on the post-info value from a joint measurability degree.
// When every block is perfectly discriminable and all blocks have equal size
// n this is 1/n + (n-1)/n * jmd; otherwise jmd * p_prior.
double post_lower_bound_jmd(const PostInfoProblem& prob, double jmd_value,
                            const SolveOptions& opts = {});

// Shrink factor (m+d)/(m(1+d)) of the optimal m-fold approximate cloner.
double cloning_factor(int m, int d);

// Cloning-strategy lower bound c * p_prior + (1-c) * m/N for uniform priors.
double cloning_bound(const PostInfoProblem& prob, const SolveOptions& opts = {});

// Heisenberg picture of the cloner: N~(x) = c N(x) + (1-c) tr(N(x)) I/d.
Measurement cloning_observable(const Measurement& n, int m, int d);

// Antiunitary symmetrization for qubit sign-tuple measurements:
// C'(k) = (C(k) + A C(-k) A*)/2 with A = sigma_2 followed by conjugation.
// Turns any joint measurement of biased-noise versions of the sigma
// measurements into one for the uniform-noise versions at the same t.
Measurement qubit_symmetrize(const Measurement& c);

}  // namespace pgdiscrim
