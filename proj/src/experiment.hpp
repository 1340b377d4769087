#pragma once

#include <vector>

#include "config.hpp"
#include "inertia.hpp"

namespace platelab {

struct SolveOutcome {
  double epsilon = 0.0;
  double kappa = 0.0;
  double energy = 0.0;   // functional value at the minimizer, times 1/epsilon
  double residual = 0.0; // relative stationarity residual
  int free_dofs = 0;
};

// Runners behind both the CLI and the shared-library entry points. Each one
// re-validates the config, creates the output directory, and writes
// config_echo.json beside its artifacts.
//
// run_solve_experiment: field.csv, summary.json. Solver failures propagate
// as SolverError.
SolveOutcome run_solve_experiment(const ExperimentConfig& cfg);

// run_sweep_experiment: report.csv, report.json, kl.csv (2D reference),
// rm.csv (director fit at the smallest solved rung, when available).
ConvergenceReport run_sweep_experiment(const ExperimentConfig& cfg);

// run_inertia_experiment: inertia.csv over the configured ladder.
std::vector<InertiaRow> run_inertia_experiment(const ExperimentConfig& cfg);

} // namespace platelab
