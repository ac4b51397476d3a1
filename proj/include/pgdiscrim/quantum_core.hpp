#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "pgdiscrim/errors.hpp"
#include "pgdiscrim/label.hpp"

namespace pgdiscrim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Default tolerances. The worked closed forms are exact; the slack absorbs
// floating-point eigensolvers. All of them can be overridden per call.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kNormalizationTol = 1e-9;
inline constexpr double kDegeneracyTol = 1e-8;

// ---------------------------------------------------------------------------
// Dense matrix helpers

Matrix identity(Eigen::Index dim);
Matrix symmetrized(const Matrix& a);           // (A + A†)/2
double hermitian_deviation(const Matrix& a);   // max entry of |A - A†|
double max_abs(const Matrix& a);               // max entry of |A|
double real_trace(const Matrix& a);
double trace_inner(const Matrix& a, const Matrix& b);  // Re tr(AB), A,B Hermitian

struct EigenSystem {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // columns
};

// Hermitian eigendecomposition; symmetrizes the input first.
EigenSystem eigh(const Matrix& a);
double min_eigenvalue(const Matrix& a);
double max_eigenvalue(const Matrix& a);

// ---------------------------------------------------------------------------
// Validated operator types

// A d x d complex matrix with A = A†, enforced at construction by
// symmetrization after a deviation check.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix m, double tol = kHermitianTol);

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }

 private:
  Matrix mat_;
};

// A POVM element: 0 <= E <= 1 up to tolerance.
class Effect {
 public:
  explicit Effect(Matrix m, double tol = kPsdTol);

  Eigen::Index dim() const { return op_.dim(); }
  const Matrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

// A positive trace-one operator.
class DensityOperator {
 public:
  explicit DensityOperator(Matrix m, double psd_tol = kPsdTol,
                           double trace_tol = kPsdTol);

  Eigen::Index dim() const { return op_.dim(); }
  const Matrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

// Top eigenvalue of a Hermitian operator together with the orthogonal
// projection onto the full eigenspace attaining it (within a tolerance).
struct EigenPair {
  double value = 0.0;
  Matrix projector;
  int rank = 0;
};

EigenPair largest_eigenpair(const Matrix& h, double degeneracy_tol = kDegeneracyTol);
EigenPair largest_eigenpair(const HermitianOperator& h,
                            double degeneracy_tol = kDegeneracyTol);

// ---------------------------------------------------------------------------
// Ensembles, partitions, measurements

// Finite labeled family of subnormalized states E(x) = p(x) rho_x with
// sum_x tr E(x) = 1. Immutable after construction.
class StateEnsemble {
 public:
  static StateEnsemble make(int dim, std::vector<Label> labels,
                            std::vector<Matrix> elements,
                            double psd_tol = kPsdTol,
                            double norm_tol = kNormalizationTol);

  int dim() const { return dim_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<Label>& labels() const { return labels_; }
  const Label& label(std::size_t i) const { return labels_.at(i); }
  const Matrix& element(std::size_t i) const { return elements_.at(i); }
  const Matrix& element(const Label& x) const;
  double prob(std::size_t i) const;      // tr E(x)
  double prob(const Label& x) const;
  bool has_label(const Label& x) const { return index_.count(x) > 0; }
  std::size_t index_of(const Label& x) const;

 private:
  StateEnsemble() = default;
  int dim_ = 0;
  std::vector<Label> labels_;
  std::vector<Matrix> elements_;
  std::map<Label, std::size_t> index_;
};

StateEnsemble make_ensemble(int dim, std::vector<Label> labels,
                            std::vector<Matrix> elements,
                            double psd_tol = kPsdTol,
                            double norm_tol = kNormalizationTol);

// Disjoint cover of an ensemble's label set by nonempty blocks, each with
// positive weight q(l).
class Partition {
 public:
  static Partition make(const StateEnsemble& e, std::vector<std::vector<Label>> blocks);
  static Partition single_block(const StateEnsemble& e);

  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<Label>& block(std::size_t l) const { return blocks_.at(l); }
  const std::vector<std::vector<Label>>& blocks() const { return blocks_; }
  std::size_t block_of(const Label& x) const;

 private:
  Partition() = default;
  std::vector<std::vector<Label>> blocks_;
  std::map<Label, std::size_t> owner_;
};

// Finite outcome set mapped to effects summing to the identity.
class Measurement {
 public:
  static Measurement make(int dim, std::vector<Label> outcomes,
                          std::vector<Matrix> effects,
                          double effect_tol = kPsdTol,
                          double sum_tol = kNormalizationTol);

  int dim() const { return dim_; }
  std::size_t size() const { return outcomes_.size(); }
  const std::vector<Label>& outcomes() const { return outcomes_; }
  const Label& outcome(std::size_t i) const { return outcomes_.at(i); }
  const Matrix& effect(std::size_t i) const { return effects_.at(i); }
  const Matrix& effect(const Label& x) const;
  bool has_outcome(const Label& x) const { return index_.count(x) > 0; }
  std::size_t index_of(const Label& x) const;

  // Common arity when every outcome is an m-tuple; throws NotProductOutcomes
  // when arities are mixed.
  std::size_t tuple_arity() const;

 private:
  Measurement() = default;
  int dim_ = 0;
  std::vector<Label> outcomes_;
  std::vector<Matrix> effects_;
  std::map<Label, std::size_t> index_;
};

struct Subensemble {
  double weight = 0.0;  // q(l)
  StateEnsemble ensemble;
};

// Conditions the ensemble on a partition block: q(l) = sum_{x in X_l} tr E(x),
// sub(x) = E(x)/q(l).
Subensemble subensemble(const StateEnsemble& e, const Partition& p, std::size_t block);

// Relabels the measurement along f; effects of merged outcomes add up.
Measurement push_forward(const Measurement& m,
                         const std::function<Label(const Label&)>& f);

// The component'th marginal of a product-outcome measurement; equals
// push_forward along the coordinate projection.
Measurement marginal(const Measurement& c, std::size_t component);

// Max abs entrywise difference between effects, matched by outcome label.
double max_effect_difference(const Measurement& a, const Measurement& b);

}  // namespace pgdiscrim
