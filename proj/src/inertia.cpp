#include "inertia.hpp"

#include <stdexcept>

#include "quadrature.hpp"

namespace platelab {

namespace {

// {inplane, transverse} parts of the working, each already carrying the
// leading minus sign. The in-plane acceleration is built pointwise as
// (eps/eps_r)*a_alpha and the modified weight is applied on top of it, so the
// two pairings agree bitwise at eps = eps_r.
std::array<double, 2> working_parts(const AccelerationProfile& p,
                                    const DomainFamily& family, double eps,
                                    int nx, int ny, bool modified) {
  if (!(eps > 0.0) || !(eps <= family.epsilon_r()))
    throw std::invalid_argument("inertial working: eps outside (0, epsilon_r]");
  double er = family.epsilon_r();
  double weight = modified ? er / eps : 1.0;
  QuadratureRule1D g2 = gauss_legendre(2);
  double ell = family.ell;
  double hx = 2.0 * ell / nx, hy = 2.0 * ell / ny;
  double in = 0.0, tr = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double x0 = -ell + i * hx, y0 = -ell + j * hy;
      for (int qy = 0; qy < 2; ++qy)
        for (int qx = 0; qx < 2; ++qx) {
          double x = x0 + hx * g2.points[qx];
          double y = y0 + hy * g2.points[qy];
          double wq = g2.weights[qx] * g2.weights[qy] * hx * hy;
          double u1 = (eps / er) * profile_value(p.a1, ell, x, y);
          double u2 = (eps / er) * profile_value(p.a2, ell, x, y);
          double u3 = profile_value(p.a3, ell, x, y);
          in += wq * p.rho *
                (weight * u1 * profile_value(p.psi1, ell, x, y) +
                 weight * u2 * profile_value(p.psi2, ell, x, y));
          tr += wq * p.rho * u3 * profile_value(p.psi3, ell, x, y);
        }
    }
  return {-in, -tr};
}

} // namespace

AccelerationProfile default_acceleration_profile(double rho) {
  AccelerationProfile p;
  p.rho = rho;
  Profile bump{Profile::Kind::cosine, 1.0};
  Profile anti{Profile::Kind::cosine, -1.0};
  p.a1 = p.a2 = p.a3 = bump;
  p.psi1 = p.psi2 = p.psi3 = anti;
  return p;
}

double inertial_working_classical(const AccelerationProfile& p,
                                  const DomainFamily& family, double eps,
                                  int nx, int ny) {
  std::array<double, 2> parts = working_parts(p, family, eps, nx, ny, false);
  return parts[0] + parts[1];
}

double inertial_working_modified(const AccelerationProfile& p,
                                 const DomainFamily& family, double eps,
                                 int nx, int ny) {
  std::array<double, 2> parts = working_parts(p, family, eps, nx, ny, true);
  return parts[0] + parts[1];
}

std::vector<InertiaRow> inertia_table(const AccelerationProfile& p,
                                      const DomainFamily& family,
                                      const std::vector<double>& ladder,
                                      int nx, int ny) {
  std::vector<InertiaRow> rows;
  rows.reserve(ladder.size());
  for (double eps : ladder) {
    std::array<double, 2> c = working_parts(p, family, eps, nx, ny, false);
    std::array<double, 2> m = working_parts(p, family, eps, nx, ny, true);
    InertiaRow row;
    row.epsilon = eps;
    row.classical_inplane = c[0];
    row.classical_total = c[0] + c[1];
    row.modified_inplane = m[0];
    row.modified_total = m[0] + m[1];
    rows.push_back(row);
  }
  return rows;
}

} // namespace platelab
