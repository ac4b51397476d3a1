#include "pgdiscrim/post_info.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace pgdiscrim {

std::size_t max_product_outcomes() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("PGDISCRIM_MAX_TUPLES")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return static_cast<std::size_t>(1000000);
  }();
  return cap;
}

PostInfoProblem::PostInfoProblem(StateEnsemble ensemble, Partition partition)
    : ensemble_(std::move(ensemble)), partition_(std::move(partition)) {
  std::size_t covered = 0;
  for (const auto& block : partition_.blocks()) {
    for (const Label& x : block) {
      if (!ensemble_.has_label(x)) {
        throw BadPartition("partition label '" + x.str() + "' is not in the ensemble");
      }
      if (x.arity() != 1) {
        throw BadArgs("post-information problems use plain (non-tuple) labels");
      }
      ++covered;
    }
  }
  if (covered != ensemble_.size()) {
    throw BadPartition("partition does not cover the ensemble labels");
  }
}

double PostInfoProblem::block_weight(std::size_t l) const {
  double q = 0.0;
  for (const Label& x : partition_.block(l)) q += ensemble_.prob(x);
  return q;
}

Subensemble PostInfoProblem::block_ensemble(std::size_t l) const {
  return subensemble(ensemble_, partition_, l);
}

namespace {

// Iterates all block-index tuples in row-major order (last block fastest).
class TupleRange {
 public:
  explicit TupleRange(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    digits_.assign(sizes_.size(), 0);
  }
  const std::vector<std::size_t>& digits() const { return digits_; }
  bool advance() {
    for (std::size_t l = sizes_.size(); l-- > 0;) {
      if (++digits_[l] < sizes_[l]) return true;
      digits_[l] = 0;
    }
    return false;
  }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> digits_;
};

std::size_t checked_tuple_count(const std::vector<std::size_t>& sizes, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t n : sizes) {
    if (n == 0 || total > cap / n) {
      throw SizeOverflow("product outcome set exceeds the cap of " + std::to_string(cap) +
                         " tuples");
    }
    total *= n;
  }
  return total;
}

Label tuple_label(const Partition& p, const std::vector<std::size_t>& digits) {
  std::vector<std::string> parts;
  parts.reserve(digits.size());
  for (std::size_t l = 0; l < digits.size(); ++l) {
    parts.push_back(p.block(l)[digits[l]].str());
  }
  return Label::tuple(std::move(parts));
}

}  // namespace

AuxiliaryEnsemble auxiliary_ensemble(const PostInfoProblem& prob, std::size_t cap) {
  const StateEnsemble& e = prob.ensemble();
  const Partition& p = prob.partition();
  const std::size_t m = p.block_count();

  std::vector<std::size_t> sizes(m);
  double delta_sum = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    sizes[l] = p.block(l).size();
    delta_sum += prob.block_weight(l) / static_cast<double>(sizes[l]);
  }
  const std::size_t total = checked_tuple_count(sizes, cap);
  double delta = delta_sum;
  for (std::size_t n : sizes) delta *= static_cast<double>(n);

  std::vector<Label> labels;
  std::vector<Matrix> elements;
  labels.reserve(total);
  elements.reserve(total);
  const int d = e.dim();
  TupleRange range(sizes);
  do {
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t l = 0; l < m; ++l) {
      sum += e.element(p.block(l)[range.digits()[l]]);
    }
    labels.push_back(tuple_label(p, range.digits()));
    elements.push_back(sum / delta);
  } while (range.advance());

  return {delta, StateEnsemble::make(d, std::move(labels), std::move(elements))};
}

double p_prior(const PostInfoProblem& prob, const SolveOptions& opts) {
  double total = 0.0;
  for (std::size_t l = 0; l < prob.block_count(); ++l) {
    const Subensemble sub = prob.block_ensemble(l);
    total += sub.weight * solve(sub.ensemble, opts).value;
  }
  return std::clamp(total, 0.0, 1.0);
}

SolveResult p_post(const PostInfoProblem& prob, const SolveOptions& opts) {
  const AuxiliaryEnsemble aux = auxiliary_ensemble(prob);
  SolveResult r = solve(aux.ensemble, opts);
  r.value = std::clamp(aux.delta * r.value, 0.0, 1.0);
  r.certificate_gap *= aux.delta;
  return r;
}

double p_post_with(const PostInfoProblem& prob, const Measurement& c) {
  const Partition& p = prob.partition();
  const std::size_t m = p.block_count();
  std::size_t arity = 0;
  try {
    arity = c.tuple_arity();
  } catch (const NotProductOutcomes&) {
    throw OutcomeShapeMismatch("strategy outcomes are not tuples");
  }
  if (arity != m) {
    throw OutcomeShapeMismatch("strategy outcomes have arity " + std::to_string(arity) +
                               ", expected " + std::to_string(m));
  }
  std::size_t expected = 1;
  for (std::size_t l = 0; l < m; ++l) expected *= p.block(l).size();
  if (c.size() != expected) {
    throw OutcomeShapeMismatch("strategy has " + std::to_string(c.size()) +
                               " outcomes, expected the full product set of " +
                               std::to_string(expected));
  }

  double total = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    const Subensemble sub = prob.block_ensemble(l);
    const Measurement marg = marginal(c, l);
    total += sub.weight * guess_prob(sub.ensemble, marg);
  }
  return std::clamp(total, 0.0, 1.0);
}

Measurement baseline_from_standard(const PostInfoProblem& prob, const Measurement& m,
                                   const std::vector<Label>& defaults) {
  const StateEnsemble& e = prob.ensemble();
  const Partition& p = prob.partition();
  const std::size_t nblocks = p.block_count();
  if (m.size() != e.size()) {
    throw LabelMismatch("baseline measurement must act on the full label set");
  }
  for (const Label& x : e.labels()) m.index_of(x);  // throws on mismatch
  if (defaults.size() != nblocks) {
    throw BadDefault("one default label per block is required");
  }
  std::vector<std::size_t> default_pos(nblocks);
  for (std::size_t l = 0; l < nblocks; ++l) {
    const auto& block = p.block(l);
    const auto it = std::find(block.begin(), block.end(), defaults[l]);
    if (it == block.end()) {
      throw BadDefault("default '" + defaults[l].str() + "' is not in block " +
                       std::to_string(l));
    }
    default_pos[l] = static_cast<std::size_t>(it - block.begin());
  }

  std::vector<std::size_t> sizes(nblocks);
  for (std::size_t l = 0; l < nblocks; ++l) sizes[l] = p.block(l).size();
  const std::size_t total = checked_tuple_count(sizes, max_product_outcomes());

  // All outcomes of the product set, zero effects to start.
  std::vector<Label> labels;
  labels.reserve(total);
  std::map<Label, std::size_t> index;
  TupleRange range(sizes);
  do {
    Label t = tuple_label(p, range.digits());
    index.emplace(t, labels.size());
    labels.push_back(std::move(t));
  } while (range.advance());
  std::vector<Matrix> effects(total, Matrix::Zero(e.dim(), e.dim()));

  // Outcome y lands on the tuple that keeps y in its own block and answers
  // the default everywhere else.
  for (const Label& y : e.labels()) {
    const std::size_t j = p.block_of(y);
    std::vector<std::size_t> digits = default_pos;
    const auto& block = p.block(j);
    digits[j] = static_cast<std::size_t>(
        std::find(block.begin(), block.end(), y) - block.begin());
    effects[index.at(tuple_label(p, digits))] += m.effect(y);
  }
  return Measurement::make(e.dim(), std::move(labels), std::move(effects));
}

Measurement diagonal_from_standard(const Measurement& m, std::size_t copies) {
  if (copies == 0) throw BadArgs("copies must be at least 1");
  for (const Label& x : m.outcomes()) {
    if (x.arity() != 1) {
      throw AlphabetMismatch("diagonal strategy requires a plain outcome alphabet");
    }
  }
  if (copies == 1) return m;

  const std::size_t n = m.size();
  std::vector<std::size_t> sizes(copies, n);
  const std::size_t total = checked_tuple_count(sizes, max_product_outcomes());

  std::vector<Label> labels;
  std::vector<Matrix> effects;
  labels.reserve(total);
  effects.reserve(total);
  TupleRange range(sizes);
  do {
    const auto& digits = range.digits();
    std::vector<std::string> parts;
    parts.reserve(copies);
    for (std::size_t i : digits) parts.push_back(m.outcome(i).str());
    const bool all_equal =
        std::all_of(digits.begin(), digits.end(), [&](std::size_t i) { return i == digits[0]; });
    labels.push_back(Label::tuple(std::move(parts)));
    effects.push_back(all_equal ? m.effect(digits[0])
                                : Matrix::Zero(m.dim(), m.dim()).eval());
  } while (range.advance());
  return Measurement::make(m.dim(), std::move(labels), std::move(effects));
}

const char* to_string(GapVerdict v) {
  switch (v) {
    case GapVerdict::compatible_optima_exist: return "compatible_optima_exist";
    case GapVerdict::incompatible_optima: return "incompatible_optima";
    case GapVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

CompatibilityGap compatibility_gap(const PostInfoProblem& prob, const SolveOptions& opts) {
  CompatibilityGap out;
  out.prior = p_prior(prob, opts);
  out.post = p_post(prob, opts).value;
  out.gap = out.prior - out.post;
  if (out.gap <= 1e-7) {
    out.verdict = GapVerdict::compatible_optima_exist;
  } else if (out.gap > 1e-6) {
    out.verdict = GapVerdict::incompatible_optima;
  } else {
    out.verdict = GapVerdict::inconclusive;
  }
  return out;
}

}  // namespace pgdiscrim
