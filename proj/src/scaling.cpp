#include "scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace platelab {

DomainFamily::DomainFamily(double ell_, double h_) : ell(ell_), h(h_) {
  if (!(ell > 0.0) || !(h > 0.0))
    throw std::invalid_argument("DomainFamily: ell and h must be positive");
  if (!(h / ell <= 1.0))
    throw std::invalid_argument("DomainFamily: requires h/ell <= 1");
}

double DomainFamily::half_thickness_at(double epsilon) const {
  double er = epsilon_r();
  if (!(epsilon > 0.0) || !(epsilon <= er))
    throw std::invalid_argument(
        "DomainFamily: epsilon must lie in (0, epsilon_r]");
  return (epsilon / er) * h;
}

std::shared_ptr<const Mesh3D> DomainFamily::mesh_at(double epsilon, int nx,
                                                    int ny, int nz) const {
  return std::make_shared<const Mesh3D>(
      build_plate_mesh(ell, half_thickness_at(epsilon), nx, ny, nz));
}

double profile_value(const Profile& p, double ell, double x1, double x2) {
  switch (p.kind) {
  case Profile::Kind::zero:
    return 0.0;
  case Profile::Kind::uniform:
    return p.amplitude;
  case Profile::Kind::cosine: {
    double c = M_PI / (2.0 * ell);
    return p.amplitude * std::cos(c * x1) * std::cos(c * x2);
  }
  }
  return 0.0;
}

LoadFn load_sequence(const LoadSpec& spec, const DomainFamily& family,
                     double epsilon) {
  double er = family.epsilon_r();
  if (!(epsilon > 0.0) || !(epsilon <= er))
    throw std::invalid_argument(
        "load_sequence: epsilon must lie in (0, epsilon_r]");
  double delta = epsilon / er;
  std::array<double, 3> factor = {std::pow(delta, spec.exponents[0]),
                                  std::pow(delta, spec.exponents[1]),
                                  std::pow(delta, spec.exponents[2])};
  double ell = family.ell;
  Profile g1 = spec.inplane1, g2 = spec.inplane2, g3 = spec.transverse;
  return [factor, ell, g1, g2, g3](double x1, double x2,
                                   double) -> std::array<double, 3> {
    return {factor[0] * profile_value(g1, ell, x1, x2),
            factor[1] * profile_value(g2, ell, x1, x2),
            factor[2] * profile_value(g3, ell, x1, x2)};
  };
}

namespace {

void require_same_grid(const Mesh3D& a, const Mesh3D& b, const char* who) {
  if (a.nx != b.nx || a.ny != b.ny || a.nz != b.nz || a.ell != b.ell)
    throw std::invalid_argument(std::string(who) + ": mesh mismatch");
}

// values copy, x3-derivative DOFs scale by `ratio` (chain rule of the
// thickness map).
DisplacementField3D transport(const DisplacementField3D& u,
                              std::shared_ptr<const Mesh3D> target,
                              double ratio) {
  DisplacementField3D out;
  out.epsilon = u.epsilon;
  out.coeff = u.coeff;
  for (size_t i = 1; i < out.coeff.size(); i += 2)
    out.coeff[i] *= ratio;
  out.mesh = std::move(target);
  return out;
}

} // namespace

DisplacementField3D pullback(const DisplacementField3D& u,
                             std::shared_ptr<const Mesh3D> reference_mesh) {
  if (!u.mesh || !reference_mesh)
    throw std::invalid_argument("pullback: null mesh");
  require_same_grid(*u.mesh, *reference_mesh, "pullback");
  double ratio = u.mesh->half_thickness / reference_mesh->half_thickness;
  return transport(u, std::move(reference_mesh), ratio);
}

DisplacementField3D push_forward(const DisplacementField3D& u,
                                 std::shared_ptr<const Mesh3D> member_mesh) {
  if (!u.mesh || !member_mesh)
    throw std::invalid_argument("push_forward: null mesh");
  require_same_grid(*u.mesh, *member_mesh, "push_forward");
  double ratio = u.mesh->half_thickness / member_mesh->half_thickness;
  return transport(u, std::move(member_mesh), ratio);
}

ScaledSolution scaled_components(const DisplacementField3D& pulled_back,
                                 double epsilon, double epsilon_r) {
  if (!(epsilon > 0.0) || !(epsilon_r > 0.0))
    throw std::invalid_argument("scaled_components: parameters must be > 0");
  double delta = epsilon / epsilon_r;
  ScaledSolution s;
  s.pulled_back = pulled_back;
  s.epsilon = epsilon;
  s.scaled = pulled_back;
  size_t nodes = s.scaled.coeff.size() / kDofsPerNode3D;
  for (size_t n = 0; n < nodes; ++n) {
    double* c = &s.scaled.coeff[n * kDofsPerNode3D];
    for (int k = 0; k < 4; ++k) // components 1 and 2, value and derivative
      c[k] /= delta;
  }
  return s;
}

std::vector<std::array<double, 3>> fiber_average(
    const DisplacementField3D& u) {
  const Mesh3D& m = *u.mesh;
  double hz = m.hz();
  double len = 2.0 * m.half_thickness;
  int nsec = (m.nx + 1) * (m.ny + 1);
  std::vector<std::array<double, 3>> avg(nsec, {0.0, 0.0, 0.0});
  for (int j = 0; j <= m.ny; ++j)
    for (int i = 0; i <= m.nx; ++i) {
      std::array<double, 3> acc = {0.0, 0.0, 0.0};
      for (int k = 0; k < m.nz; ++k) {
        const double* a =
            &u.coeff[static_cast<size_t>(m.node_index(i, j, k)) *
                     kDofsPerNode3D];
        const double* b =
            &u.coeff[static_cast<size_t>(m.node_index(i, j, k + 1)) *
                     kDofsPerNode3D];
        for (int comp = 0; comp < 3; ++comp) {
          // exact integral of the cubic Hermite profile over one cell
          acc[comp] += 0.5 * hz * (a[comp * 2] + b[comp * 2]) +
                       hz * hz / 12.0 * (a[comp * 2 + 1] - b[comp * 2 + 1]);
        }
      }
      for (int comp = 0; comp < 3; ++comp)
        avg[j * (m.nx + 1) + i][comp] = acc[comp] / len;
    }
  return avg;
}

std::pair<DisplacementField3D, LoadSpec> beta_rescale(
    const DisplacementField3D& u, const LoadSpec& b, double epsilon,
    double beta) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("beta_rescale: epsilon must be > 0");
  double factor = std::pow(epsilon, beta);
  DisplacementField3D ru;
  ru.mesh = u.mesh;
  ru.epsilon = u.epsilon;
  ru.coeff = u.coeff;
  for (double& c : ru.coeff)
    c /= factor;
  LoadSpec rb = b;
  rb.inplane1.amplitude /= factor;
  rb.inplane2.amplitude /= factor;
  rb.transverse.amplitude /= factor;
  return {std::move(ru), rb};
}

} // namespace platelab
