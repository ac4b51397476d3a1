#pragma once

#include <cstdint>
#include <optional>

#include "pgdiscrim/quantum_core.hpp"

namespace pgdiscrim {

enum class Method { closed_form, numeric };
enum class Uniqueness { yes, no, unknown };

const char* to_string(Method m);
const char* to_string(Uniqueness u);

// Outcome of a minimum-error discrimination solve: the optimal guessing
// probability, an optimizing measurement, and a duality-gap certificate.
struct SolveResult {
  double value = 0.0;
  Measurement measurement;
  Method method = Method::numeric;
  Uniqueness unique = Uniqueness::unknown;
  double certificate_gap = 0.0;
};

// Top eigenpair of every ensemble element, the overall top eigenvalue
// lambda_max with the labels X_E attaining it, and, when the top projectors
// over X_E sum to a multiple of the identity, that multiple mu.
struct SpectralProfile {
  std::vector<EigenPair> pairs;  // ensemble label order
  double lambda_max = 0.0;
  std::vector<Label> top_labels;
  std::vector<std::size_t> top_indices;
  std::optional<double> mu;
};

// sum_x tr(E(x) M(x)), requiring matching label sets.
double guess_prob(const StateEnsemble& e, const Measurement& m);

SpectralProfile spectral_profile(const StateEnsemble& e, double tol = kDegeneracyTol);

// Closed-form optimum when the top projectors over X_E sum to mu * identity:
// value = d * lambda_max, measurement = Pi(x)/mu on X_E and zero elsewhere.
// Empty when the condition fails; callers fall back to solve_numeric.
std::optional<SolveResult> solve_closed_form(const StateEnsemble& e,
                                             double tol = kDegeneracyTol);

// Optimality test in the closed-form regime: M(x) <= Pi(x) on X_E and
// M(x) = 0 off X_E, up to tol. Throws ConditionUnavailable when the
// closed-form condition does not hold for e.
bool is_optimal_measurement(const StateEnsemble& e, const Measurement& m,
                            double tol = 1e-8);

struct SolveOptions {
  double gap_tol = 1e-7;
  int max_iter = 10000;
  int restarts = 3;           // random reseeds when the gap stalls
  std::uint64_t seed = 1u;
  double spectral_tol = kDegeneracyTol;
};

// Fixed-point ascent over POVMs, iterated until the duality-gap certificate
// drops below opts.gap_tol. Deterministic for a given seed. Throws
// NoConvergence (carrying the best value and gap) when the budget runs out.
SolveResult solve_numeric(const StateEnsemble& e, const SolveOptions& opts = {});

// Closed form when applicable, numeric fallback otherwise.
SolveResult solve(const StateEnsemble& e, const SolveOptions& opts = {});

// Duality gap of m for e: forms Y = sym(sum_x E(x)M(x)), shifts it by the
// smallest multiple of the identity making Y - E(x) PSD for every x, and
// returns tr(Y') - guess_prob(e, m). Zero (within tolerance) certifies
// optimality; the result is always >= 0 up to rounding.
double optimality_certificate(const StateEnsemble& e, const Measurement& m);

// When every subensemble satisfies the closed-form condition, the optimal
// value for the whole ensemble is max_l q(l) * P_guess(E_l). Empty otherwise.
std::optional<double> compose_partition_value(const StateEnsemble& e,
                                              const Partition& p,
                                              double tol = kDegeneracyTol);

}  // namespace pgdiscrim
