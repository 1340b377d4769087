#include "experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "fem3d.hpp"
#include "io.hpp"

namespace platelab {

namespace {

std::string out_path(const ExperimentConfig& cfg, const char* name) {
  return (std::filesystem::path(cfg.output) / name).string();
}

void prepare_output(const ExperimentConfig& cfg) {
  validate_config(cfg);
  ensure_dir(cfg.output);
  write_text_file(out_path(cfg, "config_echo.json"), config_echo(cfg));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

} // namespace

SolveOutcome run_solve_experiment(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  prepare_output(cfg);

  LoadSpec spec = cfg.load;
  double undo = 1.0;
  if (cfg.beta != 0.0) {
    double factor = std::pow(cfg.epsilon, cfg.beta);
    spec.inplane1.amplitude /= factor;
    spec.inplane2.amplitude /= factor;
    spec.transverse.amplitude /= factor;
    undo = factor;
  }

  SparseSystem sys =
      assemble(cfg.family.mesh_at(cfg.epsilon, cfg.nx, cfg.ny, cfg.nz),
               elasticity_from_config(cfg),
               KappaEnergyParams(cfg.kappa, cfg.epsilon, cfg.family.epsilon_r()),
               load_sequence(spec, cfg.family, cfg.epsilon));
  DisplacementField3D u = solve(sys, cfg.solver);

  SolveOutcome out;
  out.epsilon = cfg.epsilon;
  out.kappa = cfg.kappa;
  out.energy = undo * undo * total_energy(sys, u) / cfg.epsilon;
  out.residual = stationarity_residual(sys, u);
  for (std::uint8_t c : sys.constrained)
    out.free_dofs += c ? 0 : 1;
  if (undo != 1.0)
    for (double& c : u.coeff)
      c *= undo;

  write_field_csv(out_path(cfg, "field.csv"), u);
  write_text_file(out_path(cfg, "summary.json"),
                  solve_summary_json(out.epsilon, out.kappa, out.energy,
                                     out.residual, out.free_dofs,
                                     seconds_since(t0)));
  return out;
}

ConvergenceReport run_sweep_experiment(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  prepare_output(cfg);

  ConvergenceReport rep = run_sweep(sweep_config(cfg));

  write_report_csv(out_path(cfg, "report.csv"), rep);
  write_text_file(out_path(cfg, "report.json"),
                  report_json(config_echo(cfg), rep, seconds_since(t0)));
  if (rep.kl_reference.mesh)
    write_kl_csv(out_path(cfg, "kl.csv"), rep.kl_reference);
  if (rep.has_rm_fit)
    write_rm_csv(out_path(cfg, "rm.csv"), rep.rm_fit);
  return rep;
}

std::vector<InertiaRow> run_inertia_experiment(const ExperimentConfig& cfg) {
  prepare_output(cfg);
  std::vector<InertiaRow> rows = inertia_table(
      default_acceleration_profile(cfg.rho), cfg.family, cfg.ladder, cfg.nx, cfg.ny);
  write_inertia_csv(out_path(cfg, "inertia.csv"), rows);
  return rows;
}

} // namespace platelab
