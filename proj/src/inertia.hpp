#pragma once

#include <vector>

#include "scaling.hpp"

namespace platelab {

// Manufactured acceleration family on the flat section: the in-plane
// components carry the thin-member factor eps/eps_r, the transverse one does
// not. psi is the test field the working integrals pair against.
struct AccelerationProfile {
  double rho = 1.0;
  Profile a1, a2, a3;
  Profile psi1, psi2, psi3;
};

// Cosine bumps for every component with psi = -a, so both workings come out
// positive.
AccelerationProfile default_acceleration_profile(double rho = 1.0);

// Virtual work of the inertial force -rho*u_tt against psi, thickness
// normalized. The classical pairing keeps the member's own in-plane weight;
// the modified one restores it with the factor eps_r/eps.
double inertial_working_classical(const AccelerationProfile& p,
                                  const DomainFamily& family, double eps,
                                  int nx = 16, int ny = 16);
double inertial_working_modified(const AccelerationProfile& p,
                                 const DomainFamily& family, double eps,
                                 int nx = 16, int ny = 16);

struct InertiaRow {
  double epsilon = 0.0;
  double classical_total = 0.0;
  double classical_inplane = 0.0;
  double modified_total = 0.0;
  double modified_inplane = 0.0;
};

// One row per ladder entry; entries must lie in (0, eps_r].
std::vector<InertiaRow> inertia_table(const AccelerationProfile& p,
                                      const DomainFamily& family,
                                      const std::vector<double>& ladder,
                                      int nx = 16, int ny = 16);

} // namespace platelab
