#include "pgdiscrim/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace pgdiscrim {

const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::numeric: return "numeric";
  }
  return "?";
}

const char* to_string(Uniqueness u) {
  switch (u) {
    case Uniqueness::yes: return "yes";
    case Uniqueness::no: return "no";
    case Uniqueness::unknown: return "unknown";
  }
  return "?";
}

double guess_prob(const StateEnsemble& e, const Measurement& m) {
  if (e.dim() != m.dim()) {
    throw DimensionMismatch("ensemble and measurement dimensions differ");
  }
  if (e.size() != m.size()) {
    throw LabelMismatch("measurement outcome set does not match ensemble labels");
  }
  double p = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    p += trace_inner(e.element(i), m.effect(e.label(i)));
  }
  return std::clamp(p, 0.0, 1.0);
}

SpectralProfile spectral_profile(const StateEnsemble& e, double tol) {
  SpectralProfile sp;
  sp.pairs.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    sp.pairs.push_back(largest_eigenpair(e.element(i), tol));
  }
  sp.lambda_max = sp.pairs.front().value;
  for (const auto& pair : sp.pairs) sp.lambda_max = std::max(sp.lambda_max, pair.value);

  const int d = e.dim();
  Matrix sum = Matrix::Zero(d, d);
  int rank_sum = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (sp.pairs[i].value >= sp.lambda_max - tol) {
      sp.top_labels.push_back(e.label(i));
      sp.top_indices.push_back(i);
      sum += sp.pairs[i].projector;
      rank_sum += sp.pairs[i].rank;
    }
  }
  const double mu = static_cast<double>(rank_sum) / d;
  if (max_abs(sum - mu * identity(d)) <= tol) sp.mu = mu;
  return sp;
}

namespace {

// Linear independence of rank-1 projectors via their Gram matrix.
bool projectors_independent(const std::vector<const Matrix*>& projectors) {
  const std::size_t k = projectors.size();
  Eigen::MatrixXd gram(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = trace_inner(*projectors[i], *projectors[j]);
      gram(i, j) = g;
      gram(j, i) = g;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw EigenFailure("gram eigendecomposition failed");
  return solver.eigenvalues().minCoeff() > 1e-8;
}

}  // namespace

std::optional<SolveResult> solve_closed_form(const StateEnsemble& e, double tol) {
  const SpectralProfile sp = spectral_profile(e, tol);
  if (!sp.mu) return std::nullopt;
  const int d = e.dim();
  const double mu = *sp.mu;

  std::vector<Matrix> effects(e.size(), Matrix::Zero(d, d));
  bool all_rank1 = true;
  std::vector<const Matrix*> top_projectors;
  for (std::size_t idx : sp.top_indices) {
    effects[idx] = sp.pairs[idx].projector / mu;
    all_rank1 = all_rank1 && (sp.pairs[idx].rank == 1);
    top_projectors.push_back(&sp.pairs[idx].projector);
  }
  // The effect sum deviates from the identity by at most the condition
  // residual, so the POVM check inherits the caller's tolerance.
  Measurement m0 = Measurement::make(d, e.labels(), std::move(effects), kPsdTol,
                                     std::max(kNormalizationTol, 4.0 * tol));

  Uniqueness unique = Uniqueness::unknown;
  if (all_rank1) {
    unique = projectors_independent(top_projectors) ? Uniqueness::yes : Uniqueness::no;
  }

  const double value = std::clamp(d * sp.lambda_max, 0.0, 1.0);
  const double gap = optimality_certificate(e, m0);
  return SolveResult{value, std::move(m0), Method::closed_form, unique, gap};
}

bool is_optimal_measurement(const StateEnsemble& e, const Measurement& m, double tol) {
  const SpectralProfile sp = spectral_profile(e);
  if (!sp.mu) {
    throw ConditionUnavailable(
        "top projectors do not sum to a multiple of the identity");
  }
  if (e.size() != m.size()) {
    throw LabelMismatch("measurement outcome set does not match ensemble labels");
  }
  std::vector<bool> is_top(e.size(), false);
  for (std::size_t idx : sp.top_indices) is_top[idx] = true;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Matrix& effect = m.effect(e.label(i));
    if (is_top[i]) {
      if (max_eigenvalue(effect - sp.pairs[i].projector) > tol) return false;
    } else {
      if (max_eigenvalue(effect) > tol) return false;
    }
  }
  return true;
}

double optimality_certificate(const StateEnsemble& e, const Measurement& m) {
  if (e.dim() != m.dim()) {
    throw DimensionMismatch("ensemble and measurement dimensions differ");
  }
  const int d = e.dim();
  Matrix y = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < e.size(); ++i) {
    y += e.element(i) * m.effect(e.label(i));
  }
  y = symmetrized(y);
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < e.size(); ++i) {
    shift = std::max(shift, max_eigenvalue(e.element(i) - y));
  }
  return real_trace(y) + shift * d - guess_prob(e, m);
}

std::optional<double> compose_partition_value(const StateEnsemble& e, const Partition& p,
                                              double tol) {
  double best = 0.0;
  for (std::size_t l = 0; l < p.block_count(); ++l) {
    const Subensemble sub = subensemble(e, p, l);
    const SpectralProfile sp = spectral_profile(sub.ensemble, tol);
    if (!sp.mu) return std::nullopt;
    const double value = std::clamp(sub.ensemble.dim() * sp.lambda_max, 0.0, 1.0);
    best = std::max(best, sub.weight * value);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Numeric solver: multiplicative fixed-point ascent
//
//   G = sum_x E(x) M(x) E(x),   M(x) <- G^{-1/2} E(x) M(x) E(x) G^{-1/2}
//
// which maps POVMs to POVMs on the support of G; mass outside the support
// is redistributed uniformly so the family stays normalized. Fixed points
// satisfy the optimality conditions, and the duality-gap certificate is
// evaluated each sweep as the stopping rule.

namespace {

struct SqrtPinv {
  Matrix inv_sqrt;
  Matrix support;  // projector onto the range
};

SqrtPinv psd_sqrt_pinv(const Matrix& g) {
  const auto es = eigh(g);
  const Eigen::Index d = es.values.size();
  const double top = std::max(es.values.maxCoeff(), 0.0);
  const double cut = top * 1e-14;
  Matrix inv_sqrt = Matrix::Zero(d, d);
  Matrix support = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (es.values(k) > cut && es.values(k) > 0.0) {
      const Matrix vv = es.vectors.col(k) * es.vectors.col(k).adjoint();
      inv_sqrt += vv / std::sqrt(es.values(k));
      support += vv;
    }
  }
  return {std::move(inv_sqrt), std::move(support)};
}

void ascent_sweep(const StateEnsemble& e, std::vector<Matrix>& effects) {
  const int d = e.dim();
  const std::size_t n = e.size();
  Matrix g = Matrix::Zero(d, d);
  std::vector<Matrix> eme(n);
  for (std::size_t i = 0; i < n; ++i) {
    eme[i] = e.element(i) * effects[i] * e.element(i);
    g += eme[i];
  }
  const SqrtPinv s = psd_sqrt_pinv(symmetrized(g));
  const Matrix rest = identity(d) - s.support;
  const double rest_norm = max_abs(rest);
  for (std::size_t i = 0; i < n; ++i) {
    effects[i] = symmetrized(s.inv_sqrt * eme[i] * s.inv_sqrt);
    if (rest_norm > 1e-14) effects[i] += rest / static_cast<double>(n);
  }
}

double certificate_of_effects(const StateEnsemble& e, const std::vector<Matrix>& effects,
                              double* value_out) {
  const int d = e.dim();
  Matrix y = Matrix::Zero(d, d);
  double value = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    y += e.element(i) * effects[i];
    value += trace_inner(e.element(i), effects[i]);
  }
  y = symmetrized(y);
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < e.size(); ++i) {
    shift = std::max(shift, max_eigenvalue(e.element(i) - y));
  }
  if (value_out) *value_out = value;
  return real_trace(y) + shift * d - value;
}

std::vector<Matrix> random_povm(int d, std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> seeds(n);
  Matrix total = Matrix::Zero(d, d);
  for (auto& seed : seeds) {
    Matrix a(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) a(r, c) = Complex(gauss(rng), gauss(rng));
    }
    seed = a * a.adjoint();
    total += seed;
  }
  const SqrtPinv s = psd_sqrt_pinv(symmetrized(total));
  const Matrix rest = identity(d) - s.support;
  for (auto& seed : seeds) {
    seed = symmetrized(s.inv_sqrt * seed * s.inv_sqrt);
    if (max_abs(rest) > 1e-14) seed += rest / static_cast<double>(n);
  }
  return seeds;
}

std::vector<Matrix> clip_to_effects(std::vector<Matrix> effects) {
  for (auto& effect : effects) {
    auto es = eigh(effect);
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
      es.values(k) = std::clamp(es.values(k), 0.0, 1.0);
    }
    effect = symmetrized(es.vectors * es.values.asDiagonal() * es.vectors.adjoint());
  }
  return effects;
}

}  // namespace

SolveResult solve_numeric(const StateEnsemble& e, const SolveOptions& opts) {
  const int d = e.dim();
  const std::size_t n = e.size();
  std::mt19937_64 rng(opts.seed);

  std::vector<Matrix> effects(n, identity(d) / static_cast<double>(n));
  std::vector<Matrix> best_effects = effects;
  double best_gap = std::numeric_limits<double>::infinity();
  double best_value = 0.0;

  int attempt = 0;
  double stall_gap = std::numeric_limits<double>::infinity();
  int stall_counter = 0;
  constexpr int kStallWindow = 200;
  // Stop slightly below the target so that the final eigenvalue cleanup
  // cannot push the certified gap back over it.
  const double target = 0.999 * opts.gap_tol;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    ascent_sweep(e, effects);
    double value = 0.0;
    const double gap = certificate_of_effects(e, effects, &value);
    if (gap < best_gap) {
      best_gap = gap;
      best_value = value;
      best_effects = effects;
    }
    if (best_gap <= target) break;

    if (++stall_counter >= kStallWindow) {
      if (stall_gap - best_gap < 1e-13) {
        if (attempt >= opts.restarts) break;
        ++attempt;
        effects = random_povm(d, n, rng);
      }
      stall_gap = best_gap;
      stall_counter = 0;
    }
  }

  if (best_gap > opts.gap_tol) {
    std::ostringstream os;
    os << "numeric solver stopped at certificate gap " << best_gap << " (requested "
       << opts.gap_tol << ")";
    throw NoConvergence(os.str(), best_value, best_gap);
  }

  Measurement m = Measurement::make(d, e.labels(), clip_to_effects(std::move(best_effects)));
  const double value = guess_prob(e, m);
  const double gap = optimality_certificate(e, m);
  if (gap > opts.gap_tol) {
    std::ostringstream os;
    os << "numeric solver certificate degraded to " << gap << " after cleanup";
    throw NoConvergence(os.str(), value, gap);
  }
  return SolveResult{value, std::move(m), Method::numeric, Uniqueness::unknown, gap};
}

SolveResult solve(const StateEnsemble& e, const SolveOptions& opts) {
  if (auto closed = solve_closed_form(e, opts.spectral_tol)) return *std::move(closed);
  return solve_numeric(e, opts);
}

}  // namespace pgdiscrim
