#pragma once

#include "pgdiscrim/discrimination.hpp"

namespace pgdiscrim {

// Cap on materialized product outcome sets. The PGDISCRIM_MAX_TUPLES
// environment variable overrides the built-in default of 10^6.
std::size_t max_product_outcomes();

// A state ensemble together with a partition of its labels; the pair that
// defines a discrimination task with post-measurement information.
class PostInfoProblem {
 public:
  PostInfoProblem(StateEnsemble ensemble, Partition partition);

  const StateEnsemble& ensemble() const { return ensemble_; }
  const Partition& partition() const { return partition_; }
  std::size_t block_count() const { return partition_.block_count(); }
  double block_weight(std::size_t l) const;       // q(l)
  Subensemble block_ensemble(std::size_t l) const;

 private:
  StateEnsemble ensemble_;
  Partition partition_;
};

// Auxiliary ensemble on the product label set X_1 x ... x X_m:
//   F(x_1,...,x_m) = (1/Delta) sum_l E(x_l),
//   Delta = n_1...n_m sum_l q(l)/n_l.
// Its standard discrimination optimum, scaled by Delta, is the post-info value.
struct AuxiliaryEnsemble {
  double delta = 0.0;
  StateEnsemble ensemble;
};

AuxiliaryEnsemble auxiliary_ensemble(const PostInfoProblem& prob,
                                     std::size_t cap = max_product_outcomes());

// Benchmark value when the block index is revealed before the measurement:
// sum_l q(l) P_guess(E_l).
double p_prior(const PostInfoProblem& prob, const SolveOptions& opts = {});

// Optimal post-measurement-information value, obtained by solving the
// auxiliary ensemble (closed form preferred, numeric fallback). The returned
// measurement has product outcomes and optimizes the post-info task.
SolveResult p_post(const PostInfoProblem& prob, const SolveOptions& opts = {});

// Post-info value of a specific product-outcome strategy:
// sum_l q(l) P_guess(E_l; marginal_l(c)).
double p_post_with(const PostInfoProblem& prob, const Measurement& c);

// Lifts a measurement on the full label set to a product-outcome strategy:
// a correct outcome is kept when Alice's block confirms it, otherwise the
// block's default label is guessed. Never worse than m alone.
Measurement baseline_from_standard(const PostInfoProblem& prob, const Measurement& m,
                                   const std::vector<Label>& defaults);

// The diagonal strategy over a shared outcome alphabet: all components answer
// with the same outcome of m, so the announced block is ignored.
Measurement diagonal_from_standard(const Measurement& m, std::size_t copies);

enum class GapVerdict { compatible_optima_exist, incompatible_optima, inconclusive };
const char* to_string(GapVerdict v);

// p_prior - p_post with a three-way verdict. Zero gap is equivalent to the
// existence of compatible optimal measurements for all subensembles; the
// inconclusive band keeps solver noise from forcing a false claim.
struct CompatibilityGap {
  double gap = 0.0;
  GapVerdict verdict = GapVerdict::inconclusive;
  double prior = 0.0;
  double post = 0.0;
};

CompatibilityGap compatibility_gap(const PostInfoProblem& prob,
                                   const SolveOptions& opts = {});

}  // namespace pgdiscrim
