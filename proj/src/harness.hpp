#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elasticity.hpp"
#include "linsolve.hpp"
#include "plate2d.hpp"
#include "scaling.hpp"

namespace platelab {

enum class LimitModel { none, kl, rm };

struct SweepConfig {
  DomainFamily family;
  double lambda = 1.0;
  double mu = 1.0;
  double kappa = 0.0;
  // Strictly decreasing, entries in (0, epsilon_r]. The recipe additionally
  // wants ladder[0] == epsilon_r; that is reported by the checklist rather
  // than enforced here, so the failure mode stays observable.
  std::vector<double> ladder;
  int nx = 16, ny = 16, nz = 1;
  LoadSpec load;
  double beta = 0.0;
  SolveOptions solver;
  double bound_factor = 3.0;
  LimitModel limit_model = LimitModel::kl;
};

struct SweepRow {
  double epsilon = 0.0;
  double energy = 0.0;        // functional value at the minimizer, times 1/epsilon
  double e_kl = 0.0;          // fiber-averaged transverse vs 2D deflection, relative
  double shear = 0.0;         // thickness-averaged shear-strain norm of the scaled pullback
  double rm_res = 0.0;        // relative thickness-profile misfit of the scaled pullback
  double director_gap = 0.0;  // |phi + grad w|/|grad w|, fitted director vs 2D slope
  double norm_inplane = 0.0;  // scaled-solution component norms (boundedness proxy)
  double norm_transverse = 0.0;
  double consistency = 0.0;   // fiber-average vs component-scaling commutation error
  bool failed = false;
  std::string note;
};

struct ChecklistItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConvergenceReport {
  std::vector<SweepRow> rows;
  std::optional<double> rate_e_kl;
  std::optional<double> rate_shear;
  std::optional<double> rate_rm_res;
  std::vector<ChecklistItem> checklist;
  bool passed = false; // every checklist item passed and no row failed
  KLState kl_reference; // 2D solution the rows are compared against
  RMState rm_fit;       // director fit at the smallest solved rung
  bool has_rm_fit = false;
};

// Solves the ladder member by member, compares against the 2D limit solve,
// and appends the construction checklist. Solver failures mark their row and
// the sweep continues.
ConvergenceReport run_sweep(const SweepConfig& config);

// Least-squares slope of log(value) against log(epsilon). Nonpositive or
// non-finite values are excluded; fewer than 3 surviving points -> absent.
std::optional<double> estimate_rate(const std::vector<double>& epsilons,
                                    const std::vector<double>& values);

// The construction checks alone: domain family limit, reference member
// reproduced bit-exactly, reference problem independent of kappa bit-exactly,
// and the boundedness proxy over the supplied rows (skipped if `rows` is
// null).
std::vector<ChecklistItem> validate_recipe(const SweepConfig& config,
                                           const std::vector<SweepRow>* rows);

} // namespace platelab
