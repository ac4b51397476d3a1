#include "pgdiscrim/quantum_core.hpp"

#include <algorithm>
#include <sstream>

namespace pgdiscrim {

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double hermitian_deviation(const Matrix& a) {
  return (a - a.adjoint().eval()).cwiseAbs().maxCoeff();
}

double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double real_trace(const Matrix& a) { return a.trace().real(); }

double trace_inner(const Matrix& a, const Matrix& b) {
  return (a * b).trace().real();
}

EigenSystem eigh(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a));
  if (solver.info() != Eigen::Success) {
    throw EigenFailure("hermitian eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& a) { return eigh(a).values.minCoeff(); }

double max_eigenvalue(const Matrix& a) { return eigh(a).values.maxCoeff(); }

// ---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(Matrix m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch("hermitian operator must be square and nonempty");
  }
  const double dev = hermitian_deviation(m);
  if (dev > tol) {
    std::ostringstream os;
    os << "matrix deviates from A = A† by " << dev << " (tolerance " << tol << ")";
    throw NotHermitian(os.str());
  }
  mat_ = symmetrized(m);
}

Effect::Effect(Matrix m, double tol) : op_(std::move(m)) {
  const auto es = eigh(op_.matrix());
  const double lo = es.values.minCoeff();
  const double hi = es.values.maxCoeff();
  if (lo < -tol || hi > 1.0 + tol) {
    std::ostringstream os;
    os << "effect eigenvalues must lie in [0,1]; got range [" << lo << ", " << hi << "]";
    throw NotEffect(os.str());
  }
}

DensityOperator::DensityOperator(Matrix m, double psd_tol, double trace_tol)
    : op_(std::move(m)) {
  const double lo = min_eigenvalue(op_.matrix());
  if (lo < -psd_tol) {
    std::ostringstream os;
    os << "state has negative eigenvalue " << lo;
    throw NotPositive(os.str());
  }
  const double tr = real_trace(op_.matrix());
  if (std::abs(tr - 1.0) > trace_tol) {
    std::ostringstream os;
    os << "state trace is " << tr << ", expected 1";
    throw NotNormalized(os.str());
  }
}

EigenPair largest_eigenpair(const Matrix& h, double degeneracy_tol) {
  const auto es = eigh(h);
  const Eigen::Index d = es.values.size();
  const double top = es.values(d - 1);
  Eigen::Index first = d - 1;
  while (first > 0 && es.values(first - 1) >= top - degeneracy_tol) --first;
  const Matrix block = es.vectors.rightCols(d - first);
  return {top, symmetrized(block * block.adjoint()), static_cast<int>(d - first)};
}

EigenPair largest_eigenpair(const HermitianOperator& h, double degeneracy_tol) {
  return largest_eigenpair(h.matrix(), degeneracy_tol);
}

// ---------------------------------------------------------------------------

namespace {

std::map<Label, std::size_t> build_index(const std::vector<Label>& labels,
                                         const char* what) {
  std::map<Label, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i], i).second) {
      throw LabelMismatch(std::string("duplicate ") + what + " '" + labels[i].str() + "'");
    }
  }
  return index;
}

void check_square_dim(const Matrix& m, int dim, const Label& x) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream os;
    os << "operator for '" << x.str() << "' is " << m.rows() << "x" << m.cols()
       << ", expected " << dim << "x" << dim;
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

StateEnsemble StateEnsemble::make(int dim, std::vector<Label> labels,
                                  std::vector<Matrix> elements, double psd_tol,
                                  double norm_tol) {
  if (dim <= 0) throw DimensionMismatch("ensemble dimension must be positive");
  if (labels.empty()) throw BadArgs("ensemble needs at least one label");
  if (labels.size() != elements.size()) {
    throw LabelMismatch("element count does not match label count");
  }
  StateEnsemble e;
  e.dim_ = dim;
  e.index_ = build_index(labels, "label");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    check_square_dim(elements[i], dim, labels[i]);
    const double dev = hermitian_deviation(elements[i]);
    if (dev > kHermitianTol) {
      throw NotHermitian("element '" + labels[i].str() + "' is not hermitian (deviation " +
                         std::to_string(dev) + ")");
    }
    Matrix sym = symmetrized(elements[i]);
    const double lo = min_eigenvalue(sym);
    if (lo < -psd_tol) {
      std::ostringstream os;
      os << "element '" << labels[i].str() << "' has negative eigenvalue " << lo;
      throw NotPositive(os.str());
    }
    total += real_trace(sym);
    e.elements_.push_back(std::move(sym));
  }
  if (std::abs(total - 1.0) > norm_tol) {
    std::ostringstream os;
    os << "ensemble traces sum to " << total << ", expected 1";
    throw NotNormalized(os.str());
  }
  e.labels_ = std::move(labels);
  return e;
}

StateEnsemble make_ensemble(int dim, std::vector<Label> labels,
                            std::vector<Matrix> elements, double psd_tol,
                            double norm_tol) {
  return StateEnsemble::make(dim, std::move(labels), std::move(elements), psd_tol,
                             norm_tol);
}

const Matrix& StateEnsemble::element(const Label& x) const {
  return elements_[index_of(x)];
}

double StateEnsemble::prob(std::size_t i) const { return real_trace(elements_.at(i)); }

double StateEnsemble::prob(const Label& x) const { return prob(index_of(x)); }

std::size_t StateEnsemble::index_of(const Label& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) {
    throw LabelMismatch("unknown ensemble label '" + x.str() + "'");
  }
  return it->second;
}

// ---------------------------------------------------------------------------

Partition Partition::make(const StateEnsemble& e, std::vector<std::vector<Label>> blocks) {
  if (blocks.empty()) throw BadPartition("partition needs at least one block");
  Partition p;
  std::size_t covered = 0;
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    if (blocks[l].empty()) throw EmptyBlock("partition block " + std::to_string(l) + " is empty");
    double q = 0.0;
    for (const Label& x : blocks[l]) {
      if (!e.has_label(x)) {
        throw BadPartition("block label '" + x.str() + "' is not in the ensemble");
      }
      if (!p.owner_.emplace(x, l).second) {
        throw BadPartition("label '" + x.str() + "' appears in two blocks");
      }
      q += e.prob(x);
      ++covered;
    }
    if (q <= 0.0) {
      throw BadPartition("block " + std::to_string(l) + " has zero weight");
    }
  }
  if (covered != e.size()) {
    throw BadPartition("partition does not cover the label set");
  }
  p.blocks_ = std::move(blocks);
  return p;
}

Partition Partition::single_block(const StateEnsemble& e) {
  return make(e, {e.labels()});
}

std::size_t Partition::block_of(const Label& x) const {
  auto it = owner_.find(x);
  if (it == owner_.end()) {
    throw LabelMismatch("label '" + x.str() + "' is not in the partition");
  }
  return it->second;
}

// ---------------------------------------------------------------------------

Measurement Measurement::make(int dim, std::vector<Label> outcomes,
                              std::vector<Matrix> effects, double effect_tol,
                              double sum_tol) {
  if (dim <= 0) throw DimensionMismatch("measurement dimension must be positive");
  if (outcomes.empty()) throw BadArgs("measurement needs at least one outcome");
  if (outcomes.size() != effects.size()) {
    throw LabelMismatch("effect count does not match outcome count");
  }
  Measurement m;
  m.dim_ = dim;
  m.index_ = build_index(outcomes, "outcome");
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    check_square_dim(effects[i], dim, outcomes[i]);
    const double dev = hermitian_deviation(effects[i]);
    if (dev > kHermitianTol) {
      throw NotHermitian("effect '" + outcomes[i].str() + "' is not hermitian (deviation " +
                         std::to_string(dev) + ")");
    }
    Matrix sym = symmetrized(effects[i]);
    const auto es = eigh(sym);
    const double lo = es.values.minCoeff();
    const double hi = es.values.maxCoeff();
    if (lo < -effect_tol || hi > 1.0 + effect_tol) {
      std::ostringstream os;
      os << "effect '" << outcomes[i].str() << "' has eigenvalue range [" << lo << ", "
         << hi << "] outside [0,1]";
      throw NotEffect(os.str());
    }
    sum += sym;
    m.effects_.push_back(std::move(sym));
  }
  const double dev = max_abs(sum - identity(dim));
  if (dev > sum_tol) {
    std::ostringstream os;
    os << "effects sum deviates from the identity by " << dev;
    throw NotNormalized(os.str());
  }
  m.outcomes_ = std::move(outcomes);
  return m;
}

const Matrix& Measurement::effect(const Label& x) const { return effects_[index_of(x)]; }

std::size_t Measurement::index_of(const Label& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) {
    throw LabelMismatch("unknown measurement outcome '" + x.str() + "'");
  }
  return it->second;
}

std::size_t Measurement::tuple_arity() const {
  const std::size_t arity = outcomes_.front().arity();
  for (const Label& x : outcomes_) {
    if (x.arity() != arity) {
      throw NotProductOutcomes("measurement outcomes have mixed arity");
    }
  }
  return arity;
}

// ---------------------------------------------------------------------------

Subensemble subensemble(const StateEnsemble& e, const Partition& p, std::size_t block) {
  if (block >= p.block_count()) {
    throw BadArgs("block index " + std::to_string(block) + " out of range");
  }
  const auto& labels = p.block(block);
  double q = 0.0;
  for (const Label& x : labels) q += e.prob(x);
  if (q <= 0.0) throw EmptyBlock("block " + std::to_string(block) + " has zero weight");
  std::vector<Matrix> elements;
  elements.reserve(labels.size());
  for (const Label& x : labels) elements.push_back(e.element(x) / q);
  return {q, StateEnsemble::make(e.dim(), labels, std::move(elements))};
}

Measurement push_forward(const Measurement& m,
                         const std::function<Label(const Label&)>& f) {
  std::vector<Label> outcomes;
  std::vector<Matrix> effects;
  std::map<Label, std::size_t> index;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Label y = f(m.outcome(i));
    auto [it, inserted] = index.emplace(std::move(y), outcomes.size());
    if (inserted) {
      outcomes.push_back(it->first);
      effects.push_back(Matrix::Zero(m.dim(), m.dim()));
    }
    effects[it->second] += m.effect(i);
  }
  return Measurement::make(m.dim(), std::move(outcomes), std::move(effects));
}

Measurement marginal(const Measurement& c, std::size_t component) {
  const std::size_t arity = c.tuple_arity();
  if (component >= arity) {
    throw NotProductOutcomes("marginal component " + std::to_string(component) +
                             " out of range for arity " + std::to_string(arity));
  }
  return push_forward(c, [component](const Label& x) { return x.component(component); });
}

double max_effect_difference(const Measurement& a, const Measurement& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("measurement dimensions differ");
  if (a.size() != b.size()) throw LabelMismatch("measurement outcome sets differ");
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dev = std::max(dev, max_abs(a.effect(i) - b.effect(a.outcome(i))));
  }
  return dev;
}

}  // namespace pgdiscrim
