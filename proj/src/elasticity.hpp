#pragma once

#include <array>

namespace platelab {

// Infinitesimal strain, tensor components in the order
// (E11, E22, E33, E23, E13, E12). Symmetry holds by construction.
struct Strain {
  std::array<double, 6> v{};

  double operator[](int i) const { return v[i]; }
  double& operator[](int i) { return v[i]; }
};

// Strain from a displacement gradient (row-major 3x3): E = (G + G^T)/2.
Strain symmetric_gradient(const std::array<double, 9>& grad);

// Material stiffness. Either an isotropic Lame pair or a full 6x6 Voigt
// matrix in the order (11, 22, 33, 23, 13, 12) with engineering shear
// strains (gamma = 2 E_ij on the off-diagonal slots).
struct ElasticityTensor {
  bool isotropic_form = true;
  double lambda = 0.0;
  double mu = 0.0;
  std::array<double, 36> voigt{};

  // lambda may be negative; admissibility requires mu > 0 and 3*lambda + 2*mu > 0.
  static ElasticityTensor isotropic(double lambda, double mu);

  // C must be symmetric and positive definite (verified via Cholesky).
  static ElasticityTensor general(const std::array<double, 36>& voigt);
};

// Parameters of the thickness-modified stored energy. epsilon_r is the
// reference slenderness of the family; epsilon must lie in (0, epsilon_r].
struct KappaEnergyParams {
  double kappa = 0.0;
  double epsilon = 0.0;
  double epsilon_r = 0.0;

  KappaEnergyParams(double kappa, double epsilon, double epsilon_r);
};

// Stored energy density of the isotropic material: mu |E|^2 + (lambda/2) tr(E)^2.
double energy_density(const Strain& E, double lambda, double mu);

// Same value for a general tensor: (1/2) e^T C e with engineering shears.
double energy_density(const Strain& E, const ElasticityTensor& C);

// Thickness-modified density. u33 holds the second x3-derivatives of the two
// in-plane displacement components, which enter only through the penalty term.
// Reduces exactly to energy_density at epsilon == epsilon_r for every kappa.
double energy_density_kappa(const Strain& E, const std::array<double, 2>& u33,
                            double lambda, double mu, const KappaEnergyParams& p);

// Bending moduli of the isotropic two-dimensional limit. lambda_star is the
// plane-stress reduced Lame modulus 2*lambda*mu/(lambda + 2*mu).
struct KLModuli {
  double lambda_star = 0.0;
  double Da = 0.0;   // coefficient of (laplacian w)^2, per unit h^3
  double da = 0.0;   // coefficient of the determinant term, per unit h^3
  double h = 0.0;    // half-thickness used to scale the plate moduli
  double Dbar = 0.0; // Da * h^3
  double dbar = 0.0; // da * h^3
};

KLModuli kl_moduli_from_lame(double lambda, double mu, double h);

// Coefficient matrix A of the energy density as a quadratic form:
//   W = (1/2) xi^T A xi,  xi = (E11, E22, E33, E23, E13, E12, u1_33, u2_33).
// The kappa-free overload covers the unmodified density (penalty rows zero).
std::array<double, 64> energy_coefficient_matrix(const ElasticityTensor& C,
                                                 const KappaEnergyParams& p);
std::array<double, 64> energy_coefficient_matrix(const ElasticityTensor& C);

} // namespace platelab
