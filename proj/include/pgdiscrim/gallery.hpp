#pragma once

#include <functional>
#include <string>

#include "pgdiscrim/compat_bounds.hpp"

namespace pgdiscrim::gallery {

// Pauli matrix sigma_i, i in {1,2,3}.
Matrix pauli(int i);

// Qubit operator w * (I + a . sigma).
Matrix bloch_operator(double weight, double ax, double ay, double az);

// Qubit state (I + a . sigma) / 2.
Matrix bloch_state(double ax, double ay, double az);

// Generalized Pauli operator W(r,s) = sum_z omega^{sz} |phi_{r+z}><phi_z|
// over the canonical basis, omega = exp(2 pi i / d).
Matrix weyl_operator(int d, int r, int s);

// Fourier-conjugate basis vector psi_k = d^{-1/2} sum_h omega^{hk} phi_h.
Eigen::VectorXcd fourier_basis_vector(int d, int k);

// A worked example: the problem, its closed-form reference values, reference
// measurements, the uniqueness of the optimal post-info measurement, and
// (when a closed-form family of optima is known) a residual functional that
// vanishes exactly on that family.
struct GalleryCase {
  std::string name;
  PostInfoProblem problem;
  std::map<std::string, double> reference;
  std::map<std::string, Measurement> reference_measurements;
  Uniqueness uniqueness = Uniqueness::unknown;
  std::function<double(const Measurement&)> family_residual;
};

// Four equiangular qubit states split into two eigenbases an angle theta
// apart. Reference optima are C+ below pi/2, C- above, and the C+/C-
// convex family exactly at pi/2.
GalleryCase two_bases(double theta, double q = 0.5);

// The 2n+2 state family with dihedral symmetry: a sharp pair against a
// 2n-point equator ring, block weights q1 and 1-q1.
GalleryCase dihedral(int n, double q1);

// Three orthogonal qubit eigenbases with block weights (q1,q2,q3).
GalleryCase three_axes(double q1, double q2, double q3);

// Two Fourier-conjugate mutually unbiased bases in dimension d with basis
// weights (q_phi, 1-q_phi).
GalleryCase fourier_mub(int d, double q_phi);

// The rank-2 counterexample: closed-form condition holds with linearly
// independent projectors, yet the optimum is not unique.
GalleryCase appendix_a_case();

// Coefficients (alpha, beta) of the top eigenvector alpha phi_h + beta
// omega^{-hk} psi_k of the MUB auxiliary elements: the positive solution of
// alpha^2 + beta^2 + 2 alpha beta / sqrt(d) = 1 with the closed-form ratio.
std::pair<double, double> solve_alpha_beta(int d, double q_phi, double q_psi);

// Joint measurability of noisy MUB pairs: t_phi + t_psi <= 1 or the
// ellipse condition. Boundary slack 1e-10.
bool mub_compat_boundary_check(int d, double t_phi, double t_psi);

// LHS - 1 of the ellipse condition; zero on the boundary.
double mub_ellipse_residual(int d, double t_phi, double t_psi);

}  // namespace pgdiscrim::gallery
