#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "platelab/platelab.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  double epsilon = 0.0;
  double kappa = 0.0;
  bool quiet = false;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* kappa_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("-c,--config", opt.config, "JSON experiment description")
      ->required();
  opt.epsilon_opt =
      sub->add_option("--epsilon", opt.epsilon, "override config epsilon");
  opt.kappa_opt =
      sub->add_option("--kappa", opt.kappa, "override config kappa");
  opt.out_opt = sub->add_option("-o,--out", opt.out, "override output directory");
  sub->add_flag("--quiet", opt.quiet, "suppress the summary line");
}

int exit_code(pl_status status) {
  switch (status) {
  case PL_OK:
    return 0;
  case PL_ERR_SOLVER:
  case PL_ERR_IO:
    return 3;
  default:
    return 2;
  }
}

int fail(pl_status status) {
  std::fprintf(stderr, "error: %s\n", pl_last_error());
  return exit_code(status);
}

pl_status open_experiment(const Options& opt, pl_experiment** exp) {
  pl_status st = pl_experiment_from_file(opt.config.c_str(), exp);
  if (st != PL_OK)
    return st;
  if (*opt.epsilon_opt)
    st = pl_experiment_set_epsilon(*exp, opt.epsilon);
  if (st == PL_OK && *opt.kappa_opt)
    st = pl_experiment_set_kappa(*exp, opt.kappa);
  if (st == PL_OK && *opt.out_opt)
    st = pl_experiment_set_output_dir(*exp, opt.out.c_str());
  if (st != PL_OK) {
    pl_experiment_free(*exp);
    *exp = nullptr;
  }
  return st;
}

int run_solve(const Options& opt) {
  pl_experiment* exp = nullptr;
  pl_status st = open_experiment(opt, &exp);
  if (st != PL_OK)
    return fail(st);
  pl_report* rep = nullptr;
  st = pl_run_solve(exp, &rep);
  if (st != PL_OK) {
    pl_experiment_free(exp);
    return fail(st);
  }
  if (!opt.quiet) {
    double eps = 0.0, energy = 0.0;
    pl_report_row(rep, 0, &eps, &energy, nullptr, nullptr, nullptr);
    std::printf("solved epsilon=%.6g energy=%.12g (field.csv, summary.json)\n",
                eps, energy);
  }
  pl_report_free(rep);
  pl_experiment_free(exp);
  return 0;
}

int run_sweep(const Options& opt) {
  pl_experiment* exp = nullptr;
  pl_status st = open_experiment(opt, &exp);
  if (st != PL_OK)
    return fail(st);
  pl_report* rep = nullptr;
  st = pl_run_sweep(exp, &rep);
  if (st != PL_OK) {
    pl_experiment_free(exp);
    return fail(st);
  }
  int passed = pl_report_all_passed(rep);
  if (!opt.quiet) {
    size_t rows = pl_report_row_count(rep);
    std::printf("sweep: %zu rungs, checklist %s (report.csv, report.json)\n",
                rows, passed ? "passed" : "FAILED");
    size_t items = pl_report_checklist_count(rep);
    for (size_t i = 0; i < items; ++i) {
      const char* name = "";
      const char* detail = "";
      int ok = 0;
      pl_report_checklist_item(rep, i, &name, &ok, &detail);
      if (!ok)
        std::printf("  failed: %s%s%s\n", name, *detail ? ": " : "", detail);
    }
  }
  pl_report_free(rep);
  pl_experiment_free(exp);
  return passed ? 0 : 1;
}

int run_inertia(const Options& opt) {
  pl_experiment* exp = nullptr;
  pl_status st = open_experiment(opt, &exp);
  if (st != PL_OK)
    return fail(st);
  pl_report* rep = nullptr;
  st = pl_run_inertia(exp, &rep);
  if (st != PL_OK) {
    pl_experiment_free(exp);
    return fail(st);
  }
  if (!opt.quiet)
    std::printf("inertia: %zu ladder rows (inertia.csv)\n",
                pl_report_row_count(rep));
  pl_report_free(rep);
  pl_experiment_free(exp);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"thin-member elasticity experiments"};
  app.set_version_flag("--version", pl_version());
  app.require_subcommand(1);

  Options solve_opt, sweep_opt, inertia_opt;
  CLI::App* solve = app.add_subcommand(
      "solve", "solve one member and export the displacement field");
  add_common(solve, solve_opt);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "solve the slenderness ladder and compare with the 2D limits");
  add_common(sweep, sweep_opt);
  CLI::App* inertia = app.add_subcommand(
      "inertia", "tabulate classical vs thickness-corrected inertial workings");
  add_common(inertia, inertia_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (solve->parsed())
    return run_solve(solve_opt);
  if (sweep->parsed())
    return run_sweep(sweep_opt);
  return run_inertia(inertia_opt);
}
