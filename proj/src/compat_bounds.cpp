#include "pgdiscrim/compat_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pgdiscrim {

const char* to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::uniform: return "uniform";
    case NoiseKind::distribution: return "distribution";
  }
  return "?";
}

const char* to_string(JointStatus s) {
  switch (s) {
    case JointStatus::feasible: return "feasible";
    case JointStatus::infeasible: return "infeasible";
    case JointStatus::undecided: return "undecided";
  }
  return "?";
}

Measurement noisy_version(const Measurement& n, double t, const std::vector<double>& nu) {
  if (t < 0.0 || t > 1.0) throw BadArgs("mixing weight t must lie in [0,1]");
  if (nu.size() != n.size()) {
    throw BadDistribution("noise distribution size does not match the outcome set");
  }
  double total = 0.0;
  for (double w : nu) {
    if (w < 0.0) throw BadDistribution("noise distribution has a negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw BadDistribution("noise distribution sums to " + std::to_string(total));
  }
  std::vector<Matrix> effects;
  effects.reserve(n.size());
  const Matrix id = identity(n.dim());
  for (std::size_t i = 0; i < n.size(); ++i) {
    effects.push_back(t * n.effect(i) + (1.0 - t) * nu[i] * id);
  }
  return Measurement::make(n.dim(), n.outcomes(), std::move(effects));
}

Measurement uniform_noisy_version(const Measurement& n, double t) {
  return noisy_version(n, t, std::vector<double>(n.size(), 1.0 / n.size()));
}

std::vector<Measurement> noisy_versions(const std::vector<Measurement>& ns,
                                        const NoiseModel& model) {
  if (model.t.size() != ns.size()) {
    throw BadArgs("noise model needs one mixing weight per measurement");
  }
  std::vector<Measurement> out;
  out.reserve(ns.size());
  for (std::size_t l = 0; l < ns.size(); ++l) {
    if (model.kind == NoiseKind::uniform) {
      out.push_back(uniform_noisy_version(ns[l], model.t[l]));
    } else {
      if (model.nu.size() != ns.size()) {
        throw BadDistribution("noise model needs one distribution per measurement");
      }
      out.push_back(noisy_version(ns[l], model.t[l], model.nu[l]));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Joint measurability by alternating projections

namespace {

struct ProductIndex {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> strides;  // row-major, last component fastest
  std::size_t total = 1;

  explicit ProductIndex(std::vector<std::size_t> sizes_, std::size_t cap)
      : sizes(std::move(sizes_)) {
    for (std::size_t n : sizes) {
      if (n == 0 || total > cap / n) {
        throw SizeOverflow("product outcome set exceeds the cap of " +
                           std::to_string(cap) + " tuples");
      }
      total *= n;
    }
    strides.assign(sizes.size(), 1);
    for (std::size_t l = sizes.size() - 1; l-- > 0;) {
      strides[l] = strides[l + 1] * sizes[l + 1];
    }
  }

  std::size_t digit(std::size_t flat, std::size_t l) const {
    return (flat / strides[l]) % sizes[l];
  }
};

// Orthogonal projection onto {C : all marginals match the targets}. With
// T tuples and residuals R_l(x) = N_l(x) - marginal, the correction is
//   C(t) += sum_l (n_l/T) R_l(t_l) - (m-1)/T * R0,
// where R0 = I - sum_t C(t) is the common total residual.
void project_marginals(const ProductIndex& pi, const std::vector<Measurement>& ns,
                       std::vector<Matrix>& c) {
  const std::size_t m = ns.size();
  const int d = ns.front().dim();
  const double total = static_cast<double>(pi.total);

  Matrix r0 = identity(d);
  for (const Matrix& eff : c) r0 -= eff;

  std::vector<std::vector<Matrix>> corr(m);
  for (std::size_t l = 0; l < m; ++l) {
    corr[l].assign(pi.sizes[l], Matrix::Zero(d, d));
  }
  for (std::size_t t = 0; t < pi.total; ++t) {
    for (std::size_t l = 0; l < m; ++l) corr[l][pi.digit(t, l)] += c[t];
  }
  for (std::size_t l = 0; l < m; ++l) {
    const double scale = static_cast<double>(pi.sizes[l]) / total;
    for (std::size_t x = 0; x < pi.sizes[l]; ++x) {
      corr[l][x] = scale * (ns[l].effect(x) - corr[l][x]);
    }
  }
  const Matrix shared = (static_cast<double>(m) - 1.0) / total * r0;
  for (std::size_t t = 0; t < pi.total; ++t) {
    Matrix delta = -shared;
    for (std::size_t l = 0; l < m; ++l) delta += corr[l][pi.digit(t, l)];
    c[t] = symmetrized(c[t] + delta);
  }
}

// Clips negative eigenvalues; returns the worst violation seen.
double project_psd(std::vector<Matrix>& c) {
  double worst = 0.0;
  for (Matrix& eff : c) {
    auto es = eigh(eff);
    const double lo = es.values.minCoeff();
    if (lo >= 0.0) continue;
    worst = std::max(worst, -lo);
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
      es.values(k) = std::max(es.values(k), 0.0);
    }
    eff = symmetrized(es.vectors * es.values.asDiagonal() * es.vectors.adjoint());
  }
  return worst;
}

double negativity(const std::vector<Matrix>& c) {
  double worst = 0.0;
  for (const Matrix& eff : c) worst = std::max(worst, -min_eigenvalue(eff));
  return std::max(worst, 0.0);
}

Label tuple_outcome(const std::vector<Measurement>& ns, const ProductIndex& pi,
                    std::size_t flat) {
  std::vector<std::string> parts;
  parts.reserve(ns.size());
  for (std::size_t l = 0; l < ns.size(); ++l) {
    parts.push_back(ns[l].outcome(pi.digit(flat, l)).str());
  }
  return Label::tuple(std::move(parts));
}

}  // namespace

JointResult jointly_measurable(const std::vector<Measurement>& ns,
                               const JointOptions& opts) {
  if (ns.empty()) throw BadArgs("need at least one measurement");
  const int d = ns.front().dim();
  std::vector<std::size_t> sizes;
  for (const Measurement& n : ns) {
    if (n.dim() != d) throw DimensionMismatch("measurements act on different dimensions");
    sizes.push_back(n.size());
  }
  const ProductIndex pi(std::move(sizes), opts.cap);
  const std::size_t m = ns.size();

  // Classical product seed: outcome weights of the maximally mixed state.
  std::vector<Matrix> c(pi.total);
  for (std::size_t t = 0; t < pi.total; ++t) {
    double w = 1.0;
    for (std::size_t l = 0; l < m; ++l) {
      w *= real_trace(ns[l].effect(pi.digit(t, l))) / d;
    }
    c[t] = w * identity(d);
  }

  double best = std::numeric_limits<double>::infinity();
  double window_best = best;
  int iters = 0;
  bool hit = false;
  double res = std::numeric_limits<double>::infinity();
  while (iters < opts.max_iter) {
    project_marginals(pi, ns, c);
    res = negativity(c);
    best = std::min(best, res);
    ++iters;
    if (res <= opts.tol) {
      hit = true;
      break;
    }
    if (iters % opts.stall_window == 0) {
      if (window_best - best < opts.stall_eps) break;
      window_best = best;
    }
    project_psd(c);
  }

  if (hit) {
    // Mix in a slice of the trivial product measurement to clear the last
    // slivers of negativity, then clip rounding noise.
    const double s = std::min(1.0, 1.5 * res * static_cast<double>(pi.total));
    if (s > 0.0) {
      const Matrix floor_term = s / static_cast<double>(pi.total) * identity(d);
      for (Matrix& eff : c) eff = (1.0 - s) * eff + floor_term;
    }
    project_psd(c);
    std::vector<Label> outcomes;
    outcomes.reserve(pi.total);
    for (std::size_t t = 0; t < pi.total; ++t) outcomes.push_back(tuple_outcome(ns, pi, t));
    Measurement witness = Measurement::make(d, std::move(outcomes), std::move(c));
    return {JointStatus::feasible, std::move(witness), res, iters};
  }

  const JointStatus status =
      best > 10.0 * opts.tol ? JointStatus::infeasible : JointStatus::undecided;
  return {status, std::nullopt, best, iters};
}

// ---------------------------------------------------------------------------
// Joint measurability degree

namespace {

using NuSet = std::vector<std::vector<double>>;

NuSet uniform_nus(const std::vector<Measurement>& ns) {
  NuSet nus;
  nus.reserve(ns.size());
  for (const Measurement& n : ns) {
    nus.emplace_back(n.size(), 1.0 / static_cast<double>(n.size()));
  }
  return nus;
}

bool feasible_at(const std::vector<Measurement>& ns, const NuSet& nus, double t,
                 const JointOptions& jopts) {
  std::vector<Measurement> noisy;
  noisy.reserve(ns.size());
  for (std::size_t l = 0; l < ns.size(); ++l) {
    noisy.push_back(noisy_version(ns[l], t, nus[l]));
  }
  return jointly_measurable(noisy, jopts).status == JointStatus::feasible;
}

// Bisection bracket of sup{t : compatible} for fixed noise distributions.
// Feasibility is monotone in t: mixing extra trivial-product measurement
// lowers t while keeping a joint measurement.
std::pair<double, double> bracket_t(const std::vector<Measurement>& ns, const NuSet& nus,
                                    const JmdOptions& opts) {
  if (feasible_at(ns, nus, 1.0, opts.joint)) return {1.0, 1.0};
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > opts.bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible_at(ns, nus, mid, opts.joint) ? lo : hi) = mid;
  }
  return {lo, hi};
}

// All probability vectors of length n with entries on a grid of the given
// step, optionally confined to a box around a center point.
void enumerate_simplex(std::size_t n, double step, const std::vector<double>* center,
                       double radius, std::vector<double>& current,
                       std::vector<std::vector<double>>& out) {
  const std::size_t slot = current.size();
  double used = 0.0;
  for (double v : current) used += v;
  if (slot + 1 == n) {
    const double last = 1.0 - used;
    if (last < -1e-12) return;
    if (center && std::abs(last - (*center)[slot]) > radius + 1e-12) return;
    current.push_back(std::max(last, 0.0));
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (double v = 0.0; v <= 1.0 - used + 1e-12; v += step) {
    if (center && std::abs(v - (*center)[slot]) > radius + 1e-12) continue;
    current.push_back(std::min(v, 1.0 - used));
    enumerate_simplex(n, step, center, radius, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<double>> simplex_grid(std::size_t n, double step,
                                              const std::vector<double>* center = nullptr,
                                              double radius = 2.0) {
  std::vector<std::vector<double>> out;
  std::vector<double> current;
  enumerate_simplex(n, step, center, radius, current, out);
  return out;
}

}  // namespace

JmdEstimate jmd(const std::vector<Measurement>& ns, NoiseKind kind,
                const JmdOptions& opts) {
  NuSet nus = uniform_nus(ns);
  auto [lo, hi] = bracket_t(ns, nus, opts);
  if (kind == NoiseKind::uniform) return {lo, hi, NoiseKind::uniform};

  // Coordinate search: sweep each measurement's distribution over a simplex
  // grid, keep whatever raises the bracket, then refine once near the best.
  for (int pass = 0; pass < 2; ++pass) {
    const double step = pass == 0 ? opts.grid_step : opts.grid_step / 5.0;
    for (std::size_t l = 0; l < ns.size(); ++l) {
      const std::vector<double> center = nus[l];
      const auto candidates =
          pass == 0 ? simplex_grid(ns[l].size(), step)
                    : simplex_grid(ns[l].size(), step, &center, opts.grid_step);
      for (const auto& candidate : candidates) {
        if (candidate == nus[l]) continue;
        NuSet trial = nus;
        trial[l] = candidate;
        const auto b = bracket_t(ns, trial, opts);
        if (b.first > lo) {
          lo = b.first;
          hi = b.second;
          nus = std::move(trial);
        }
      }
    }
  }
  return {lo, hi, NoiseKind::distribution};
}

double post_lower_bound_jmd(const PostInfoProblem& prob, double jmd_value,
                            const SolveOptions& opts) {
  const std::size_t m = prob.block_count();
  bool perfect = true;
  bool equal_sizes = true;
  const std::size_t n0 = prob.partition().block(0).size();
  double prior = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    const Subensemble sub = prob.block_ensemble(l);
    const double value = solve(sub.ensemble, opts).value;
    perfect = perfect && std::abs(value - 1.0) <= 1e-7;
    equal_sizes = equal_sizes && prob.partition().block(l).size() == n0;
    prior += sub.weight * value;
  }
  if (perfect && equal_sizes) {
    const double n = static_cast<double>(n0);
    return 1.0 / n + (n - 1.0) / n * jmd_value;
  }
  return jmd_value * prior;
}

double cloning_factor(int m, int d) {
  if (m < 1 || d < 2) throw BadArgs("cloning factor needs m >= 1 and d >= 2");
  return static_cast<double>(m + d) / (static_cast<double>(m) * (1.0 + d));
}

double cloning_bound(const PostInfoProblem& prob, const SolveOptions& opts) {
  const StateEnsemble& e = prob.ensemble();
  const double expected = 1.0 / static_cast<double>(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (std::abs(e.prob(i) - expected) > 1e-9) {
      throw NonUniformPrior("cloning bound requires a uniform prior over the labels");
    }
  }
  const int m = static_cast<int>(prob.block_count());
  const double c = cloning_factor(m, e.dim());
  const double prior = p_prior(prob, opts);
  return c * prior + (1.0 - c) * static_cast<double>(m) / static_cast<double>(e.size());
}

Measurement cloning_observable(const Measurement& n, int m, int d) {
  if (d != n.dim()) throw DimensionMismatch("cloning dimension differs from the measurement");
  const double c = cloning_factor(m, d);
  std::vector<Matrix> effects;
  effects.reserve(n.size());
  const Matrix id_over_d = identity(d) / static_cast<double>(d);
  for (std::size_t i = 0; i < n.size(); ++i) {
    effects.push_back(c * n.effect(i) + (1.0 - c) * real_trace(n.effect(i)) * id_over_d);
  }
  return Measurement::make(d, n.outcomes(), std::move(effects));
}

Measurement qubit_symmetrize(const Measurement& c) {
  if (c.dim() != 2) throw WrongShape("antiunitary symmetrization is a qubit construction");
  std::size_t arity = 0;
  try {
    arity = c.tuple_arity();
  } catch (const NotProductOutcomes&) {
    throw WrongShape("outcomes must be sign tuples of a common arity");
  }
  const auto flip = [](const Label& x) {
    std::vector<std::string> parts;
    parts.reserve(x.arity());
    for (const std::string& p : x.parts()) {
      if (p == "+") {
        parts.emplace_back("-");
      } else if (p == "-") {
        parts.emplace_back("+");
      } else {
        throw WrongShape("outcome part '" + p + "' is not a sign");
      }
    }
    return Label::tuple(std::move(parts));
  };
  (void)arity;

  Matrix sigma2(2, 2);
  sigma2 << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);

  std::vector<Matrix> effects;
  effects.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Label flipped = flip(c.outcome(i));
    if (!c.has_outcome(flipped)) {
      throw WrongShape("outcome set is not closed under sign flips");
    }
    const Matrix conjugated = sigma2 * c.effect(flipped).conjugate() * sigma2;
    effects.push_back(0.5 * (c.effect(i) + conjugated));
  }
  return Measurement::make(2, c.outcomes(), std::move(effects));
}

}  // namespace pgdiscrim
