#include "pgdiscrim/gallery.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace pgdiscrim::gallery {

namespace {

constexpr double kPi = std::numbers::pi;

// exp(2 pi i e / d); integer phases stay exact this way.
Complex unit_phase(int d, long long e) {
  return std::exp(Complex(0, 2.0 * kPi * static_cast<double>(e) / d));
}

Eigen::Vector3d unit(const Eigen::Vector3d& v) { return v / v.norm(); }

Matrix pauli_combination(const Eigen::Vector3d& a) {
  Matrix m(2, 2);
  m << Complex(a.z(), 0), Complex(a.x(), -a.y()), Complex(a.x(), a.y()), Complex(-a.z(), 0);
  return m;
}

Matrix projector(const Eigen::VectorXcd& v) { return v * v.adjoint(); }

std::map<std::string, Measurement> no_measurements() { return {}; }

}  // namespace

Matrix pauli(int i) {
  switch (i) {
    case 1: return pauli_combination({1, 0, 0});
    case 2: return pauli_combination({0, 1, 0});
    case 3: return pauli_combination({0, 0, 1});
    default: throw BadArgs("pauli index must be 1, 2 or 3");
  }
}

Matrix bloch_operator(double weight, double ax, double ay, double az) {
  return weight * (identity(2) + pauli_combination({ax, ay, az}));
}

Matrix bloch_state(double ax, double ay, double az) {
  return bloch_operator(0.5, ax, ay, az);
}

Matrix weyl_operator(int d, int r, int s) {
  if (d < 2) throw BadArgs("weyl operator needs dimension >= 2");
  Matrix w = Matrix::Zero(d, d);
  for (int z = 0; z < d; ++z) {
    w(((r % d) + z + d) % d, z) = unit_phase(d, static_cast<long long>(s) * z);
  }
  return w;
}

Eigen::VectorXcd fourier_basis_vector(int d, int k) {
  if (d < 2) throw BadArgs("fourier basis needs dimension >= 2");
  Eigen::VectorXcd psi(d);
  for (int h = 0; h < d; ++h) {
    psi(h) = unit_phase(d, static_cast<long long>(h) * k) / std::sqrt(double(d));
  }
  return psi;
}

// ---------------------------------------------------------------------------
// Two eigenbases an angle theta apart

GalleryCase two_bases(double theta, double q) {
  if (!(theta > 0.0 && theta < kPi)) throw BadAngle("theta must lie in (0, pi)");
  if (!(q > 0.0 && q < 1.0)) throw BadWeights("basis weight must lie in (0, 1)");
  const double q2 = 1.0 - q;
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Eigen::Vector3d a(c, s, 0.0);
  const Eigen::Vector3d b(c, -s, 0.0);

  const std::vector<Label> labels = {"+a", "-a", "+b", "-b"};
  std::vector<Matrix> elements = {
      (q / 2.0) * bloch_state(a.x(), a.y(), a.z()),
      (q / 2.0) * bloch_state(-a.x(), -a.y(), -a.z()),
      (q2 / 2.0) * bloch_state(b.x(), b.y(), b.z()),
      (q2 / 2.0) * bloch_state(-b.x(), -b.y(), -b.z()),
  };
  StateEnsemble e = StateEnsemble::make(2, labels, std::move(elements));
  Partition p = Partition::make(e, {{"+a", "-a"}, {"+b", "-b"}});

  // Top eigenvector directions of the auxiliary elements.
  const Eigen::Vector3d u_plus = unit(q * a + q2 * b);
  const Eigen::Vector3d u_minus = unit(q * a - q2 * b);
  const double cos_theta = std::cos(theta);

  const std::vector<Label> tuples = {
      Label::tuple({"+a", "+b"}), Label::tuple({"+a", "-b"}),
      Label::tuple({"-a", "+b"}), Label::tuple({"-a", "-b"})};
  const Matrix zero2 = Matrix::Zero(2, 2);
  auto sign_state = [](const Eigen::Vector3d& u, double h) {
    return bloch_state(h * u.x(), h * u.y(), h * u.z());
  };
  // C+ answers along u_plus when the two components agree, C- along u_minus
  // when they disagree.
  std::vector<Matrix> cp = {sign_state(u_plus, +1), zero2, zero2, sign_state(u_plus, -1)};
  std::vector<Matrix> cm = {zero2, sign_state(u_minus, +1), sign_state(u_minus, -1), zero2};
  Measurement c_plus = Measurement::make(2, tuples, std::move(cp));
  Measurement c_minus = Measurement::make(2, tuples, std::move(cm));
  std::vector<Matrix> c0_effects;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    c0_effects.push_back(0.5 * (c_plus.effect(i) + c_minus.effect(i)));
  }
  Measurement c0 = Measurement::make(2, tuples, std::move(c0_effects));

  Measurement n_a = Measurement::make(
      2, {"+a", "-a"},
      {bloch_state(a.x(), a.y(), a.z()), bloch_state(-a.x(), -a.y(), -a.z())});
  Measurement n_b = Measurement::make(
      2, {"+b", "-b"},
      {bloch_state(b.x(), b.y(), b.z()), bloch_state(-b.x(), -b.y(), -b.z())});

  GalleryCase out{
      "two-bases",
      PostInfoProblem(std::move(e), std::move(p)),
      {},
      no_measurements(),
      std::abs(cos_theta) > 1e-9 ? Uniqueness::yes : Uniqueness::no,
      nullptr};
  out.reference["p_guess"] = std::max(q, q2);
  out.reference["p_prior"] = 1.0;
  out.reference["p_post"] =
      0.5 * (1.0 + std::sqrt(q * q + q2 * q2 + 2.0 * q * q2 * std::abs(cos_theta)));
  out.reference["jmd"] = 1.0 / std::sqrt(1.0 + std::abs(std::sin(theta)));
  out.reference_measurements.emplace("N_a", n_a);
  out.reference_measurements.emplace("N_b", n_b);
  out.reference_measurements.emplace("C+", c_plus);
  out.reference_measurements.emplace("C-", c_minus);
  out.reference_measurements.emplace("C0", c0);

  out.family_residual = [c_plus, c_minus, cos_theta](const Measurement& m) {
    if (cos_theta > 1e-9) return max_effect_difference(m, c_plus);
    if (cos_theta < -1e-9) return max_effect_difference(m, c_minus);
    // Convex family t C+ + (1-t) C-: project and report the distance.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < c_plus.size(); ++i) {
      const Matrix dir = c_plus.effect(i) - c_minus.effect(c_plus.outcome(i));
      num += trace_inner(m.effect(c_plus.outcome(i)) - c_minus.effect(c_plus.outcome(i)), dir);
      den += trace_inner(dir, dir);
    }
    const double t = std::clamp(num / den, 0.0, 1.0);
    double dev = 0.0;
    for (std::size_t i = 0; i < c_plus.size(); ++i) {
      const Label& x = c_plus.outcome(i);
      dev = std::max(dev, max_abs(m.effect(x) - t * c_plus.effect(i) -
                                  (1.0 - t) * c_minus.effect(x)));
    }
    return dev;
  };
  return out;
}

// ---------------------------------------------------------------------------
// Sharp pair against a 2n-point equator ring

GalleryCase dihedral(int n, double q1) {
  if (n < 1) throw BadArgs("ring parameter n must be at least 1");
  if (!(q1 > 0.0 && q1 < 1.0)) throw BadArgs("block weight q1 must lie in (0, 1)");
  const double q2 = 1.0 - q1;
  const double nn = static_cast<double>(n);

  std::vector<Label> labels = {"+", "-"};
  std::vector<Matrix> elements = {(q1 / 2.0) * bloch_state(1, 0, 0),
                                  (q1 / 2.0) * bloch_state(-1, 0, 0)};
  std::vector<Label> ring;
  std::vector<Eigen::Vector3d> ring_axes;
  for (int k = 0; k < 2 * n; ++k) {
    const double phi = kPi * k / nn;
    ring_axes.emplace_back(0.0, std::cos(phi), std::sin(phi));
    const Label lab(std::to_string(k));
    ring.push_back(lab);
    labels.push_back(lab);
    elements.push_back((q2 / (2.0 * nn)) *
                       bloch_state(0.0, ring_axes.back().y(), ring_axes.back().z()));
  }
  StateEnsemble e = StateEnsemble::make(2, labels, std::move(elements));
  Partition p = Partition::make(e, {{"+", "-"}, ring});

  const double norm = std::sqrt(nn * nn * q1 * q1 + q2 * q2);
  std::vector<Label> tuples;
  std::vector<Matrix> pis;
  std::vector<Matrix> c0_effects;
  for (const char* h : {"+", "-"}) {
    const double sign = (*h == '+') ? 1.0 : -1.0;
    for (int k = 0; k < 2 * n; ++k) {
      const Eigen::Vector3d u = (Eigen::Vector3d(nn * q1 * sign, 0, 0) +
                                 q2 * ring_axes[static_cast<std::size_t>(k)]) /
                                norm;
      tuples.push_back(Label::tuple({h, std::to_string(k)}));
      pis.push_back(bloch_state(u.x(), u.y(), u.z()));
      c0_effects.push_back(pis.back() / (2.0 * nn));
    }
  }
  Measurement c0 = Measurement::make(2, tuples, std::move(c0_effects));

  Measurement n1 = Measurement::make(2, {"+", "-"},
                                     {bloch_state(1, 0, 0), bloch_state(-1, 0, 0)});
  std::vector<Matrix> ring_effects;
  for (int k = 0; k < 2 * n; ++k) {
    const auto& u = ring_axes[static_cast<std::size_t>(k)];
    ring_effects.push_back(bloch_state(u.x(), u.y(), u.z()) / nn);
  }
  Measurement n2 = Measurement::make(2, ring, std::move(ring_effects));

  GalleryCase out{"dihedral", PostInfoProblem(std::move(e), std::move(p)),
                  {},       no_measurements(),
                  Uniqueness::no, nullptr};
  out.reference["p_guess"] = std::max(q1, q2 / nn);
  out.reference["p_prior"] = ((nn - 1.0) * q1 + 1.0) / nn;
  out.reference["p_post"] = (nn * q1 + q2 + norm) / (2.0 * nn);
  out.reference_measurements.emplace("N1", n1);
  out.reference_measurements.emplace("N2", n2);
  out.reference_measurements.emplace("C0", c0);

  const auto axes = ring_axes;
  out.family_residual = [tuples, pis, axes, n](const Measurement& m) {
    double dev = 0.0;
    double row_plus = 0.0;
    double row_minus = 0.0;
    Eigen::Vector3d balance = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      const double alpha = trace_inner(m.effect(tuples[i]), pis[i]);
      dev = std::max(dev, max_abs(m.effect(tuples[i]) - alpha * pis[i]));
      dev = std::max({dev, -alpha, alpha - 1.0});
      const bool plus = i < static_cast<std::size_t>(2 * n);
      (plus ? row_plus : row_minus) += alpha;
      balance += alpha * axes[i % static_cast<std::size_t>(2 * n)];
    }
    dev = std::max(dev, std::abs(row_plus - 1.0));
    dev = std::max(dev, std::abs(row_minus - 1.0));
    dev = std::max(dev, balance.norm());
    return dev;
  };
  return out;
}

// ---------------------------------------------------------------------------
// Three orthogonal eigenbases

GalleryCase three_axes(double q1, double q2, double q3) {
  if (!(q1 > 0.0 && q2 > 0.0 && q3 > 0.0) || std::abs(q1 + q2 + q3 - 1.0) > 1e-9) {
    throw BadWeights("axis weights must be positive and sum to 1");
  }
  const Eigen::Vector3d qv(q1, q2, q3);
  std::vector<Label> labels;
  std::vector<Matrix> elements;
  std::vector<std::vector<Label>> blocks(3);
  for (int axis = 0; axis < 3; ++axis) {
    for (const double sign : {1.0, -1.0}) {
      Eigen::Vector3d dir = Eigen::Vector3d::Zero();
      dir(axis) = sign;
      const Label lab((sign > 0 ? "+e" : "-e") + std::to_string(axis + 1));
      labels.push_back(lab);
      blocks[static_cast<std::size_t>(axis)].push_back(lab);
      elements.push_back((qv(axis) / 2.0) * bloch_state(dir.x(), dir.y(), dir.z()));
    }
  }
  StateEnsemble e = StateEnsemble::make(2, labels, std::move(elements));
  Partition p = Partition::make(e, blocks);

  const double qnorm = qv.norm();
  // All eight sign tuples, in the auxiliary-ensemble odometer order.
  std::vector<Label> tuples;
  std::vector<Matrix> pis;
  std::vector<Matrix> c0_effects;
  std::vector<std::array<int, 3>> signs;
  for (int s1 : {+1, -1}) {
    for (int s2 : {+1, -1}) {
      for (int s3 : {+1, -1}) {
        const Eigen::Vector3d u =
            Eigen::Vector3d(s1 * q1, s2 * q2, s3 * q3) / qnorm;
        tuples.push_back(Label::tuple({s1 > 0 ? "+e1" : "-e1", s2 > 0 ? "+e2" : "-e2",
                                       s3 > 0 ? "+e3" : "-e3"}));
        signs.push_back({s1, s2, s3});
        pis.push_back(bloch_state(u.x(), u.y(), u.z()));
        c0_effects.push_back(pis.back() / 4.0);
      }
    }
  }
  Measurement c0 = Measurement::make(2, tuples, std::move(c0_effects));

  // Diagonal strategy: answer the same sign along every axis.
  const Eigen::Vector3d qhat = qv / qnorm;
  std::vector<Matrix> diag_effects;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto& s = signs[i];
    if (s[0] == s[1] && s[1] == s[2]) {
      diag_effects.push_back(
          bloch_state(s[0] * qhat.x(), s[0] * qhat.y(), s[0] * qhat.z()));
    } else {
      diag_effects.push_back(Matrix::Zero(2, 2));
    }
  }
  Measurement c_diag = Measurement::make(2, tuples, std::move(diag_effects));

  std::map<std::string, Measurement> refs;
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Vector3d dir = Eigen::Vector3d::Zero();
    dir(axis) = 1.0;
    refs.emplace("N" + std::to_string(axis + 1),
                 Measurement::make(2, blocks[static_cast<std::size_t>(axis)],
                                   {bloch_state(dir.x(), dir.y(), dir.z()),
                                    bloch_state(-dir.x(), -dir.y(), -dir.z())}));
  }
  refs.emplace("C0", c0);
  refs.emplace("Cdiag", c_diag);

  GalleryCase out{"three-axes", PostInfoProblem(std::move(e), std::move(p)),
                  {},          std::move(refs),
                  Uniqueness::no, nullptr};
  out.reference["p_guess"] = std::max({q1, q2, q3});
  out.reference["p_prior"] = 1.0;
  out.reference["p_post"] = 0.5 * (1.0 + qnorm);
  out.reference["jmd"] = 1.0 / std::sqrt(3.0);

  out.family_residual = [tuples, pis, signs](const Measurement& m) {
    double dev = 0.0;
    double sums[3][2] = {{0, 0}, {0, 0}, {0, 0}};
    std::vector<double> alphas(tuples.size());
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      const double alpha = trace_inner(m.effect(tuples[i]), pis[i]);
      alphas[i] = alpha;
      dev = std::max(dev, max_abs(m.effect(tuples[i]) - alpha * pis[i]));
      dev = std::max({dev, -alpha, alpha - 1.0});
      for (int axis = 0; axis < 3; ++axis) {
        sums[axis][signs[i][static_cast<std::size_t>(axis)] > 0 ? 0 : 1] += alpha;
      }
    }
    for (auto& axis_sums : sums) {
      dev = std::max(dev, std::abs(axis_sums[0] - 1.0));
      dev = std::max(dev, std::abs(axis_sums[1] - 1.0));
    }
    return dev;
  };
  return out;
}

// ---------------------------------------------------------------------------
// Fourier-conjugate MUB pair

std::pair<double, double> solve_alpha_beta(int d, double q_phi, double q_psi) {
  if (d < 2) throw BadArgs("dimension must be at least 2");
  if (!(q_phi > 0.0 && q_psi > 0.0) || std::abs(q_phi + q_psi - 1.0) > 1e-9) {
    throw BadArgs("basis weights must be positive and sum to 1");
  }
  const double root =
      std::sqrt((q_phi - q_psi) * (q_phi - q_psi) + 4.0 / d * q_phi * q_psi);
  const double ratio = std::sqrt(double(d)) / (2.0 * q_psi) * (q_phi - q_psi + root);
  const double beta = 1.0 / std::sqrt(ratio * ratio + 1.0 + 2.0 * ratio / std::sqrt(double(d)));
  return {ratio * beta, beta};
}

double mub_ellipse_residual(int d, double t_phi, double t_psi) {
  return t_phi * t_phi + t_psi * t_psi +
         2.0 * (d - 2.0) / d * (1.0 - t_phi) * (1.0 - t_psi) - 1.0;
}

bool mub_compat_boundary_check(int d, double t_phi, double t_psi) {
  if (d < 2) throw BadArgs("dimension must be at least 2");
  if (t_phi < 0.0 || t_phi > 1.0 || t_psi < 0.0 || t_psi > 1.0) {
    throw BadArgs("noise weights must lie in [0,1]");
  }
  if (t_phi + t_psi <= 1.0 + 1e-10) return true;
  return mub_ellipse_residual(d, t_phi, t_psi) <= 1e-10;
}

GalleryCase fourier_mub(int d, double q_phi) {
  if (d < 2) throw BadArgs("dimension must be at least 2");
  if (!(q_phi > 0.0 && q_phi < 1.0)) throw BadArgs("q_phi must lie in (0, 1)");
  const double q_psi = 1.0 - q_phi;

  std::vector<Eigen::VectorXcd> phi(static_cast<std::size_t>(d));
  std::vector<Eigen::VectorXcd> psi(static_cast<std::size_t>(d));
  for (int h = 0; h < d; ++h) {
    phi[static_cast<std::size_t>(h)] = Eigen::VectorXcd::Unit(d, h);
    psi[static_cast<std::size_t>(h)] = fourier_basis_vector(d, h);
  }

  std::vector<Label> labels;
  std::vector<Matrix> elements;
  std::vector<Label> block_phi;
  std::vector<Label> block_psi;
  for (int h = 0; h < d; ++h) {
    const Label lab(std::to_string(h) + "phi");
    labels.push_back(lab);
    block_phi.push_back(lab);
    elements.push_back((q_phi / d) * projector(phi[static_cast<std::size_t>(h)]));
  }
  for (int k = 0; k < d; ++k) {
    const Label lab(std::to_string(k) + "psi");
    labels.push_back(lab);
    block_psi.push_back(lab);
    elements.push_back((q_psi / d) * projector(psi[static_cast<std::size_t>(k)]));
  }
  StateEnsemble e = StateEnsemble::make(d, labels, std::move(elements));
  Partition p = Partition::make(e, {block_phi, block_psi});

  const auto [alpha, beta] = solve_alpha_beta(d, q_phi, q_psi);
  const double sqrt_d = std::sqrt(double(d));
  const double t_phi = alpha * alpha + 2.0 * alpha * beta / sqrt_d;
  const double t_psi = beta * beta + 2.0 * alpha * beta / sqrt_d;

  std::vector<Label> tuples;
  std::vector<Matrix> pis;
  std::vector<Matrix> c0_effects;
  for (int h = 0; h < d; ++h) {
    for (int k = 0; k < d; ++k) {
      // chi = alpha phi_h + beta omega^{-hk} psi_k, the phase kept explicit.
      const Eigen::VectorXcd chi =
          alpha * phi[static_cast<std::size_t>(h)] +
          beta * unit_phase(d, -static_cast<long long>(h) * k) *
              psi[static_cast<std::size_t>(k)];
      tuples.push_back(Label::tuple({std::to_string(h) + "phi", std::to_string(k) + "psi"}));
      pis.push_back(projector(chi));
      c0_effects.push_back(pis.back() / double(d));
    }
  }
  Measurement c0 = Measurement::make(d, tuples, std::move(c0_effects));

  std::vector<Matrix> nphi_effects;
  std::vector<Matrix> npsi_effects;
  for (int h = 0; h < d; ++h) {
    nphi_effects.push_back(projector(phi[static_cast<std::size_t>(h)]));
    npsi_effects.push_back(projector(psi[static_cast<std::size_t>(h)]));
  }
  Measurement n_phi = Measurement::make(d, block_phi, std::move(nphi_effects));
  Measurement n_psi = Measurement::make(d, block_psi, std::move(npsi_effects));

  GalleryCase out{"mub", PostInfoProblem(std::move(e), std::move(p)),
                  {},   no_measurements(),
                  d % 2 == 1 ? Uniqueness::yes : Uniqueness::no, nullptr};
  out.reference["p_guess"] = std::max(q_phi, q_psi);
  out.reference["p_prior"] = 1.0;
  out.reference["p_post"] =
      0.5 * (1.0 + std::sqrt((q_phi - q_psi) * (q_phi - q_psi) + 4.0 / d * q_phi * q_psi));
  out.reference["alpha"] = alpha;
  out.reference["beta"] = beta;
  out.reference["t_phi"] = t_phi;
  out.reference["t_psi"] = t_psi;
  out.reference_measurements.emplace("Nphi", n_phi);
  out.reference_measurements.emplace("Npsi", n_psi);
  out.reference_measurements.emplace("C0", c0);

  out.family_residual = [tuples, pis](const Measurement& m) {
    double dev = 0.0;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      dev = std::max(dev, max_eigenvalue(m.effect(tuples[i]) - pis[i]));
    }
    return std::max(dev, 0.0);
  };
  return out;
}

// ---------------------------------------------------------------------------
// Rank-2 counterexample

GalleryCase appendix_a_case() {
  auto diag3 = [](double a, double b, double c) {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
  };
  // The three rank-2 elements, scaled by 1/3 so the ensemble is normalized.
  const std::vector<Label> labels = {"1", "2", "3"};
  std::vector<Matrix> elements = {diag3(0.5, 0.5, 0.0) / 3.0, diag3(0.5, 0.0, 0.5) / 3.0,
                                  diag3(0.0, 0.5, 0.5) / 3.0};
  StateEnsemble e = StateEnsemble::make(3, labels, std::move(elements));
  Partition p = Partition::single_block(e);

  Measurement m0 = Measurement::make(
      3, labels, {diag3(0.5, 0.5, 0.0), diag3(0.5, 0.0, 0.5), diag3(0.0, 0.5, 0.5)});
  // The sharp alternative: each effect is the one basis projector inside the
  // matching top eigenspace (E(1)-E(2)+E(3) and so on).
  Measurement m1 = Measurement::make(
      3, labels, {diag3(0, 1, 0), diag3(1, 0, 0), diag3(0, 0, 1)});

  GalleryCase out{"appendix-a", PostInfoProblem(std::move(e), std::move(p)),
                  {},          no_measurements(),
                  Uniqueness::unknown, nullptr};
  out.reference["p_guess"] = 0.5;
  out.reference["p_prior"] = 0.5;
  out.reference["p_post"] = 0.5;
  out.reference_measurements.emplace("M0", std::move(m0));
  out.reference_measurements.emplace("M1", std::move(m1));
  return out;
}

}  // namespace pgdiscrim::gallery
