#include "platelab/platelab.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "config.hpp"
#include "experiment.hpp"

struct pl_experiment {
  platelab::ExperimentConfig cfg;
};

struct pl_report {
  platelab::ConvergenceReport sweep;
  std::vector<platelab::InertiaRow> inertia;
  bool is_inertia = false;
};

namespace {

thread_local std::string g_last_error;

pl_status fail(pl_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
pl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const platelab::ConfigError& e) {
    return fail(PL_ERR_CONFIG, e.what());
  } catch (const platelab::SolverError& e) {
    return fail(PL_ERR_SOLVER, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PL_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(PL_ERR_IO, e.what());
  }
}

void put(double* dst, double v) {
  if (dst)
    *dst = v;
}

} // namespace

extern "C" {

const char* pl_version(void) { return "platelab 0.1.0"; }

const char* pl_last_error(void) { return g_last_error.c_str(); }

pl_status pl_experiment_from_file(const char* path, pl_experiment** out) {
  if (!path || !out)
    return fail(PL_ERR_ARGUMENT, "pl_experiment_from_file: null argument");
  *out = nullptr;
  return guarded([&] {
    auto* exp = new pl_experiment{platelab::parse_config_file(path)};
    *out = exp;
    return PL_OK;
  });
}

pl_status pl_experiment_from_json(const char* text, pl_experiment** out) {
  if (!text || !out)
    return fail(PL_ERR_ARGUMENT, "pl_experiment_from_json: null argument");
  *out = nullptr;
  return guarded([&] {
    auto* exp = new pl_experiment{platelab::parse_config_json(text)};
    *out = exp;
    return PL_OK;
  });
}

void pl_experiment_free(pl_experiment* exp) { delete exp; }

pl_status pl_experiment_set_epsilon(pl_experiment* exp, double epsilon) {
  if (!exp)
    return fail(PL_ERR_ARGUMENT, "null experiment");
  return guarded([&] {
    platelab::ExperimentConfig next = exp->cfg;
    next.epsilon = epsilon;
    platelab::validate_config(next);
    exp->cfg = next;
    return PL_OK;
  });
}

pl_status pl_experiment_set_kappa(pl_experiment* exp, double kappa) {
  if (!exp)
    return fail(PL_ERR_ARGUMENT, "null experiment");
  return guarded([&] {
    platelab::ExperimentConfig next = exp->cfg;
    next.kappa = kappa;
    platelab::validate_config(next);
    exp->cfg = next;
    return PL_OK;
  });
}

pl_status pl_experiment_set_output_dir(pl_experiment* exp, const char* dir) {
  if (!exp || !dir)
    return fail(PL_ERR_ARGUMENT, "null experiment or directory");
  return guarded([&] {
    platelab::ExperimentConfig next = exp->cfg;
    next.output = dir;
    platelab::validate_config(next);
    exp->cfg = next;
    return PL_OK;
  });
}

pl_status pl_run_solve(pl_experiment* exp, pl_report** out) {
  if (!exp || !out)
    return fail(PL_ERR_ARGUMENT, "null experiment or report pointer");
  *out = nullptr;
  return guarded([&] {
    platelab::SolveOutcome res = platelab::run_solve_experiment(exp->cfg);
    auto* rep = new pl_report;
    platelab::SweepRow row;
    double nan = std::numeric_limits<double>::quiet_NaN();
    row.epsilon = res.epsilon;
    row.energy = res.energy;
    row.e_kl = row.shear = row.rm_res = nan;
    row.director_gap = row.norm_inplane = row.norm_transverse = nan;
    row.consistency = res.residual;
    rep->sweep.rows.push_back(row);
    rep->sweep.passed = true;
    *out = rep;
    return PL_OK;
  });
}

pl_status pl_run_sweep(pl_experiment* exp, pl_report** out) {
  if (!exp || !out)
    return fail(PL_ERR_ARGUMENT, "null experiment or report pointer");
  *out = nullptr;
  return guarded([&] {
    auto* rep = new pl_report;
    rep->sweep = platelab::run_sweep_experiment(exp->cfg);
    *out = rep;
    return PL_OK;
  });
}

pl_status pl_run_inertia(pl_experiment* exp, pl_report** out) {
  if (!exp || !out)
    return fail(PL_ERR_ARGUMENT, "null experiment or report pointer");
  *out = nullptr;
  return guarded([&] {
    auto* rep = new pl_report;
    rep->inertia = platelab::run_inertia_experiment(exp->cfg);
    rep->is_inertia = true;
    rep->sweep.passed = true;
    *out = rep;
    return PL_OK;
  });
}

void pl_report_free(pl_report* rep) { delete rep; }

size_t pl_report_row_count(const pl_report* rep) {
  if (!rep)
    return 0;
  return rep->is_inertia ? rep->inertia.size() : rep->sweep.rows.size();
}

pl_status pl_report_row(const pl_report* rep, size_t i, double* epsilon,
                        double* energy, double* e_kl, double* shear,
                        double* rm_res) {
  if (!rep)
    return fail(PL_ERR_ARGUMENT, "null report");
  if (rep->is_inertia)
    return fail(PL_ERR_ARGUMENT, "pl_report_row: inertia report, use pl_report_inertia_row");
  if (i >= rep->sweep.rows.size())
    return fail(PL_ERR_ARGUMENT, "pl_report_row: index out of range");
  const platelab::SweepRow& r = rep->sweep.rows[i];
  put(epsilon, r.epsilon);
  put(energy, r.energy);
  put(e_kl, r.e_kl);
  put(shear, r.shear);
  put(rm_res, r.rm_res);
  return PL_OK;
}

pl_status pl_report_inertia_row(const pl_report* rep, size_t i,
                                double* epsilon, double* classical_total,
                                double* classical_inplane,
                                double* modified_total,
                                double* modified_inplane) {
  if (!rep)
    return fail(PL_ERR_ARGUMENT, "null report");
  if (!rep->is_inertia)
    return fail(PL_ERR_ARGUMENT, "pl_report_inertia_row: not an inertia report");
  if (i >= rep->inertia.size())
    return fail(PL_ERR_ARGUMENT, "pl_report_inertia_row: index out of range");
  const platelab::InertiaRow& r = rep->inertia[i];
  put(epsilon, r.epsilon);
  put(classical_total, r.classical_total);
  put(classical_inplane, r.classical_inplane);
  put(modified_total, r.modified_total);
  put(modified_inplane, r.modified_inplane);
  return PL_OK;
}

int pl_report_all_passed(const pl_report* rep) {
  if (!rep)
    return 0;
  return rep->is_inertia ? 1 : (rep->sweep.passed ? 1 : 0);
}

pl_status pl_report_rate(const pl_report* rep, const char* name, double* out) {
  if (!rep || !name || !out)
    return fail(PL_ERR_ARGUMENT, "pl_report_rate: null argument");
  const std::optional<double>* rate = nullptr;
  if (std::strcmp(name, "e_kl") == 0)
    rate = &rep->sweep.rate_e_kl;
  else if (std::strcmp(name, "shear") == 0)
    rate = &rep->sweep.rate_shear;
  else if (std::strcmp(name, "rm_res") == 0)
    rate = &rep->sweep.rate_rm_res;
  else
    return fail(PL_ERR_ARGUMENT, std::string("pl_report_rate: unknown rate ") + name);
  if (!rate->has_value())
    return fail(PL_ERR_ARGUMENT, std::string("pl_report_rate: ") + name +
                                     " not computed (needs 3 ladder points)");
  *out = **rate;
  return PL_OK;
}

size_t pl_report_checklist_count(const pl_report* rep) {
  return rep && !rep->is_inertia ? rep->sweep.checklist.size() : 0;
}

pl_status pl_report_checklist_item(const pl_report* rep, size_t i,
                                   const char** name, int* passed,
                                   const char** detail) {
  if (!rep)
    return fail(PL_ERR_ARGUMENT, "null report");
  if (rep->is_inertia || i >= rep->sweep.checklist.size())
    return fail(PL_ERR_ARGUMENT, "pl_report_checklist_item: index out of range");
  const platelab::ChecklistItem& item = rep->sweep.checklist[i];
  if (name)
    *name = item.name.c_str();
  if (passed)
    *passed = item.passed ? 1 : 0;
  if (detail)
    *detail = item.detail.c_str();
  return PL_OK;
}

} // extern "C"
