#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "elasticity.hpp"
#include "linsolve.hpp"
#include "mesh.hpp"

namespace platelab {

// Nodal displacement coefficients: per node and component a function value
// and an x3-derivative value, so six coefficients per node. The layout is
// dof = node*6 + component*2 + (0 value | 1 x3-derivative).
struct DisplacementField3D {
  std::shared_ptr<const Mesh3D> mesh;
  double epsilon = 0.0;
  std::vector<double> coeff;

  int dof_count() const { return static_cast<int>(coeff.size()); }
};

constexpr int kDofsPerNode3D = 6;

struct SparseSystem {
  std::shared_ptr<const Mesh3D> mesh;
  double epsilon = 0.0;
  CsrMatrix K;
  std::vector<double> f;
  std::vector<std::uint8_t> constrained; // mask over all dofs
};

// Treatment of the transverse shear rows of the strain operator. The plain
// interpolated shear of a bilinear-by-Hermite element locks severely on
// plate-shaped cells, so the default samples each shear component on the
// element midline transverse to its in-plane derivative (assumed natural
// strain); the reduced variant collapses both to the cell center instead.
enum class ShearTreatment { assumed_midline, reduced_center, full };

struct AssembleOptions {
  ShearTreatment shear = ShearTreatment::assumed_midline;
  bool apply_dirichlet = true;
};

using LoadFn = std::function<std::array<double, 3>(double, double, double)>;

// Element stiffness for a box cell of size (hx, hy, hz); A is the 8x8
// coefficient matrix of the energy density (see energy_coefficient_matrix).
// Local dof = local_node*6 + component*2 + dtype, where local nodes run
// x1-fastest, then x2, then x3.
std::array<double, 48 * 48> element_matrix(double hx, double hy, double hz,
                                           const std::array<double, 64>& A,
                                           ShearTreatment shear);

// Assembles (1/2) u.K u - f.u such that the quadratic part matches the
// quadrature value of the stored energy integral and f the load working.
// The load receives physical coordinates. Lateral boundary nodes are fully
// clamped (value and x3-derivative, all components) when apply_dirichlet.
SparseSystem assemble(std::shared_ptr<const Mesh3D> mesh, const ElasticityTensor& C,
                      const KappaEnergyParams& params, const LoadFn& load,
                      const AssembleOptions& opts = {});

DisplacementField3D solve(const SparseSystem& sys, const SolveOptions& opts = {},
                          SolveStats* stats = nullptr);

// Relative Euler-Lagrange residual |K u - f| / |f| on the free dofs.
double stationarity_residual(const SparseSystem& sys, const DisplacementField3D& u);

// F(u) = (1/2) u.K u - f.u (no slenderness prefactor applied here).
double total_energy(const SparseSystem& sys, const DisplacementField3D& u);

// Pointwise evaluation helpers on local cell coordinates in [0,1]^3.
std::array<double, 3> displacement_at(const DisplacementField3D& u, int cell,
                                      double s1, double s2, double s3);
// (E11, E22, E33, E23, E13, E12, u1_33, u2_33) with the requested shear rows.
std::array<double, 8> generalized_strain_at(const DisplacementField3D& u, int cell,
                                            double s1, double s2, double s3,
                                            ShearTreatment shear = ShearTreatment::full);

// sqrt of the thickness-normalized integral of E13^2 + E23^2. The treatment
// selects which shear operator is measured; it must match the one assembled,
// or the norm picks up tying-interpolation modes that carry no energy.
double transverse_shear_norm(const DisplacementField3D& u,
                             ShearTreatment shear = ShearTreatment::assumed_midline);

// Thickness-normalized L2 norm of the displacement vector field.
double field_l2_norm(const DisplacementField3D& u);

} // namespace platelab
