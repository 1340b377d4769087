#include "elasticity.hpp"

#include <cmath>
#include <stdexcept>

namespace platelab {

Strain symmetric_gradient(const std::array<double, 9>& g) {
  Strain E;
  E[0] = g[0];
  E[1] = g[4];
  E[2] = g[8];
  E[3] = 0.5 * (g[5] + g[7]);
  E[4] = 0.5 * (g[2] + g[6]);
  E[5] = 0.5 * (g[1] + g[3]);
  return E;
}

ElasticityTensor ElasticityTensor::isotropic(double lambda, double mu) {
  if (!(mu > 0.0) || !(3.0 * lambda + 2.0 * mu > 0.0))
    throw std::invalid_argument(
        "ElasticityTensor: need mu > 0 and 3*lambda + 2*mu > 0");
  ElasticityTensor t;
  t.isotropic_form = true;
  t.lambda = lambda;
  t.mu = mu;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      t.voigt[6 * i + j] = (i == j) ? 2.0 * mu + lambda : lambda;
    t.voigt[6 * (i + 3) + (i + 3)] = mu;
  }
  return t;
}

ElasticityTensor ElasticityTensor::general(const std::array<double, 36>& voigt) {
  double scale = 0.0;
  for (double c : voigt)
    scale = std::max(scale, std::abs(c));
  if (!(scale > 0.0))
    throw std::invalid_argument("ElasticityTensor: zero stiffness matrix");
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (std::abs(voigt[6 * i + j] - voigt[6 * j + i]) > 1e-12 * scale)
        throw std::invalid_argument("ElasticityTensor: matrix is not symmetric");

  // Positive definiteness via an in-place Cholesky attempt.
  std::array<double, 36> L = voigt;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      L[6 * i + j] = L[6 * j + i] = 0.5 * (voigt[6 * i + j] + voigt[6 * j + i]);
  for (int k = 0; k < 6; ++k) {
    double d = L[6 * k + k];
    for (int m = 0; m < k; ++m)
      d -= L[6 * k + m] * L[6 * k + m];
    if (!(d > 0.0))
      throw std::invalid_argument("ElasticityTensor: matrix is not positive definite");
    d = std::sqrt(d);
    L[6 * k + k] = d;
    for (int i = k + 1; i < 6; ++i) {
      double s = L[6 * i + k];
      for (int m = 0; m < k; ++m)
        s -= L[6 * i + m] * L[6 * k + m];
      L[6 * i + k] = s / d;
    }
  }

  ElasticityTensor t;
  t.isotropic_form = false;
  t.voigt = voigt;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      t.voigt[6 * i + j] = t.voigt[6 * j + i] =
          0.5 * (voigt[6 * i + j] + voigt[6 * j + i]);
  return t;
}

KappaEnergyParams::KappaEnergyParams(double kappa_, double epsilon_, double epsilon_r_)
    : kappa(kappa_), epsilon(epsilon_), epsilon_r(epsilon_r_) {
  if (!(kappa >= 0.0))
    throw std::invalid_argument("KappaEnergyParams: kappa must be >= 0");
  if (!(epsilon_r > 0.0))
    throw std::invalid_argument("KappaEnergyParams: epsilon_r must be > 0");
  if (!(epsilon > 0.0) || epsilon > epsilon_r)
    throw std::invalid_argument("KappaEnergyParams: epsilon must lie in (0, epsilon_r]");
}

double energy_density(const Strain& E, double lambda, double mu) {
  double tr = E[0] + E[1] + E[2];
  double sq = E[0] * E[0] + E[1] * E[1] + E[2] * E[2] +
              2.0 * (E[3] * E[3] + E[4] * E[4] + E[5] * E[5]);
  return mu * sq + 0.5 * lambda * tr * tr;
}

double energy_density(const Strain& E, const ElasticityTensor& C) {
  if (C.isotropic_form)
    return energy_density(E, C.lambda, C.mu);
  std::array<double, 6> e = {E[0], E[1], E[2], 2.0 * E[3], 2.0 * E[4], 2.0 * E[5]};
  double w = 0.0;
  for (int i = 0; i < 6; ++i) {
    double s = 0.0;
    for (int j = 0; j < 6; ++j)
      s += C.voigt[6 * i + j] * e[j];
    w += e[i] * s;
  }
  return 0.5 * w;
}

double energy_density_kappa(const Strain& E, const std::array<double, 2>& u33,
                            double lambda, double mu, const KappaEnergyParams& p) {
  double r = p.epsilon_r / p.epsilon;
  // Written so that every kappa-dependent factor vanishes identically when
  // r == 1; the value then coincides bit-for-bit with the unmodified density.
  double c_pp = 0.5 * (2.0 * mu + lambda);
  double c_33 = c_pp * (1.0 + p.kappa * (r * r - 1.0));
  double c_x = lambda * (1.0 + p.kappa * (r - 1.0));
  double c_pen = p.kappa * ((p.epsilon_r - p.epsilon) / p.epsilon) *
                 ((p.epsilon_r - p.epsilon) / p.epsilon);
  double t = E[0] + E[1];
  return c_pp * t * t - 2.0 * mu * (E[0] * E[1] - E[5] * E[5]) +
         c_33 * E[2] * E[2] + c_x * t * E[2] +
         2.0 * mu * (E[4] * E[4] + E[3] * E[3]) +
         c_pen * (u33[0] * u33[0] + u33[1] * u33[1]);
}

KLModuli kl_moduli_from_lame(double lambda, double mu, double h) {
  if (!(mu > 0.0) || !(3.0 * lambda + 2.0 * mu > 0.0))
    throw std::invalid_argument("kl_moduli_from_lame: inadmissible Lame pair");
  if (!(h > 0.0))
    throw std::invalid_argument("kl_moduli_from_lame: half-thickness must be > 0");
  KLModuli m;
  m.lambda_star = 2.0 * lambda * mu / (lambda + 2.0 * mu);
  m.Da = (2.0 / 3.0) * (2.0 * mu + m.lambda_star);
  m.da = (8.0 / 3.0) * mu;
  m.h = h;
  m.Dbar = m.Da * h * h * h;
  m.dbar = m.da * h * h * h;
  return m;
}

std::array<double, 64> energy_coefficient_matrix(const ElasticityTensor& C,
                                                 const KappaEnergyParams& p) {
  std::array<double, 64> A{};
  if (C.isotropic_form) {
    double lambda = C.lambda, mu = C.mu;
    double r = p.epsilon_r / p.epsilon;
    double pen = p.kappa * ((p.epsilon_r - p.epsilon) / p.epsilon) *
                 ((p.epsilon_r - p.epsilon) / p.epsilon);
    A[8 * 0 + 0] = A[8 * 1 + 1] = 2.0 * mu + lambda;
    A[8 * 0 + 1] = A[8 * 1 + 0] = lambda;
    A[8 * 2 + 2] = (2.0 * mu + lambda) * (1.0 + p.kappa * (r * r - 1.0));
    A[8 * 0 + 2] = A[8 * 2 + 0] = lambda * (1.0 + p.kappa * (r - 1.0));
    A[8 * 1 + 2] = A[8 * 2 + 1] = A[8 * 0 + 2];
    A[8 * 3 + 3] = A[8 * 4 + 4] = A[8 * 5 + 5] = 4.0 * mu;
    A[8 * 6 + 6] = A[8 * 7 + 7] = 2.0 * pen;
  } else {
    if (p.kappa != 0.0)
      throw std::invalid_argument(
          "energy_coefficient_matrix: kappa > 0 requires an isotropic material");
    // Engineering-shear Voigt form rewritten for tensor strain components:
    // rows/columns of the shear slots pick up a factor of two.
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        double f = ((i >= 3) ? 2.0 : 1.0) * ((j >= 3) ? 2.0 : 1.0);
        A[8 * i + j] = f * C.voigt[6 * i + j];
      }
  }
  return A;
}

std::array<double, 64> energy_coefficient_matrix(const ElasticityTensor& C) {
  return energy_coefficient_matrix(C, KappaEnergyParams(0.0, 1.0, 1.0));
}

} // namespace platelab
