#pragma once

#include <array>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "fem3d.hpp"
#include "mesh.hpp"

namespace platelab {

// Family of plate domains sharing the cross-section (-ell,ell)^2. The member
// at parameter epsilon has half-thickness (epsilon/epsilon_r())*h, so the
// member at epsilon_r() is the reference body itself, bit-exactly.
struct DomainFamily {
  double ell = 1.0;
  double h = 0.2;

  DomainFamily() = default;
  DomainFamily(double ell_, double h_);

  double epsilon_r() const { return h / ell; }

  // Requires 0 < epsilon <= epsilon_r().
  double half_thickness_at(double epsilon) const;
  std::shared_ptr<const Mesh3D> mesh_at(double epsilon, int nx, int ny,
                                        int nz) const;
};

struct Profile {
  enum class Kind { zero, uniform, cosine };
  Kind kind = Kind::zero;
  double amplitude = 0.0;
};

// cosine is amplitude*cos(pi x1/(2 ell))*cos(pi x2/(2 ell)): it vanishes on
// the clamped lateral boundary.
double profile_value(const Profile& p, double ell, double x1, double x2);

// Component profiles of the reference load and the per-component exponents
// p_i of the (epsilon/epsilon_r)^{p_i} factors defining the load sequence.
struct LoadSpec {
  Profile inplane1;
  Profile inplane2;
  Profile transverse;
  std::array<double, 3> exponents = {1.0, 1.0, 2.0};
};

// The member load b_epsilon as a pointwise function. At epsilon = epsilon_r
// every scale factor is exactly 1, so this reproduces the reference load
// bit-exactly.
LoadFn load_sequence(const LoadSpec& spec, const DomainFamily& family,
                     double epsilon);

// Transport of a field on the member mesh at some epsilon back to the
// reference mesh (composition with the thickness scaling map): nodal values
// carry over, x3-derivative DOFs pick up the thickness ratio. The two meshes
// must share (ell, nx, ny, nz). The field keeps the epsilon it was solved at.
DisplacementField3D pullback(const DisplacementField3D& u,
                             std::shared_ptr<const Mesh3D> reference_mesh);

// Inverse transport; pullback(push_forward(u)) = u up to one rounding each
// way.
DisplacementField3D push_forward(const DisplacementField3D& u,
                                 std::shared_ptr<const Mesh3D> member_mesh);

struct ScaledSolution {
  DisplacementField3D pulled_back;
  double epsilon = 0.0;
  // In-plane components divided by epsilon/epsilon_r, transverse unchanged.
  DisplacementField3D scaled;
};

ScaledSolution scaled_components(const DisplacementField3D& pulled_back,
                                 double epsilon, double epsilon_r);

// Thickness average of each displacement component per section node,
// integrating the Hermite profile in closed form (exact for the basis).
std::vector<std::array<double, 3>> fiber_average(const DisplacementField3D& u);

// Divides the field and the load amplitudes by epsilon^beta. Argmin
// equivariance: the minimizer under the rescaled load is the rescaled
// minimizer, so the pair stays consistent.
std::pair<DisplacementField3D, LoadSpec> beta_rescale(
    const DisplacementField3D& u, const LoadSpec& b, double epsilon,
    double beta);

} // namespace platelab
