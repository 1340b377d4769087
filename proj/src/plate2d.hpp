#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "elasticity.hpp"
#include "fem3d.hpp"
#include "linsolve.hpp"
#include "mesh.hpp"

namespace platelab {

// Clamped bending state on the section mesh. Coefficients follow the
// Bogner-Fox-Schmit layout: per node (w, w_x, w_y, w_xy), i.e.
// dof = node*4 + {0,1,2,3}. Clamping pins all four boundary-node dofs,
// which makes both the deflection and its normal slope vanish along the
// whole boundary trace, not just at nodes.
struct KLState {
  std::shared_ptr<const Mesh2D> mesh;
  KLModuli moduli;
  std::vector<double> coeff;
  double residual = 0.0; // relative stationarity residual of the solve
};

constexpr int kDofsPerNode2D = 4;

using Load2D = std::function<double(double, double)>;

// Minimizes  (1/2) Int [ Dbar (lap w)^2 - dbar (w_11 w_22 - w_12^2) ] - Int bbar w
// over the clamped space. The determinant term is assembled but cancels on
// clamped fields, so it never shifts the solution.
KLState solve_kl(std::shared_ptr<const Mesh2D> mesh, const KLModuli& moduli,
                 const Load2D& bbar, const SolveOptions& opts = {});

// Int (w_11 w_22 - w_12^2) over the section, by the element quadrature.
double gaussian_term(const Mesh2D& mesh, const std::vector<double>& coeff);
double gaussian_term(const KLState& state);

// Int (lap w)^2, used to scale the null-Lagrangian check.
double laplacian_energy(const Mesh2D& mesh, const std::vector<double>& coeff);

// Bending Ansatz u = w e3 - x3 grad w expressed in the 3D dof layout:
// in-plane value dofs -x3 w_a, in-plane x3-derivative dofs -w_a,
// transverse value dof w, transverse x3-derivative dof 0.
// The 3D mesh must share the section grid of the state.
DisplacementField3D reconstruct_kl_3d(const KLState& state,
                                      std::shared_ptr<const Mesh3D> mesh);

// Per-column least-squares fit of shearable-plate kinematics
//   u_a ~ v_a + x3 phi_a,  u_3 ~ w
// over the thickness. Arrays are indexed by section node; node_misfit holds
// the absolute fiber misfit norm per column.
struct RMState {
  int nx = 0, ny = 0;
  double ell = 0.0;
  std::vector<double> w, v1, v2, phi1, phi2, node_misfit;
};

// Returns the fitted state and the relative L2 misfit of the fit over the
// whole body; a zero field fits exactly with residual 0.
std::pair<RMState, double> fit_rm(const DisplacementField3D& u);

} // namespace platelab
