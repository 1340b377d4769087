#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "elasticity.hpp"
#include "harness.hpp"

namespace platelab {

// Raised for malformed or inconsistent configuration; the message names the
// offending key.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Fully-resolved experiment description. Defaults mirror the shipped configs:
// unit half-span, half-thickness 0.2, unit Lame parameters and a small
// uniform transverse load.
struct ExperimentConfig {
  DomainFamily family;
  double lambda = 1.0;
  double mu = 1.0;
  bool has_voigt = false;
  std::array<double, 36> voigt{};
  double kappa = 0.0;
  double epsilon = 0.2; // resolved to epsilon_r unless given
  std::vector<double> ladder;
  int nx = 16, ny = 16, nz = 1;
  LoadSpec load;
  double beta = 0.0;
  SolveOptions solver;
  LimitModel limit_model = LimitModel::kl;
  double rho = 1.0;
  double bound_factor = 3.0;
  std::string output = "out";
};

ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Cross-field checks, re-run after programmatic overrides.
void validate_config(const ExperimentConfig& cfg);

// Machine-readable echo of the resolved config, stable key order. Two runs
// with equal echoes produce identical outputs.
std::string config_echo(const ExperimentConfig& cfg);

// Mapped views for the downstream modules. sweep_config rejects anisotropic
// material: the sweep metrics compare against the isotropic limit models.
SweepConfig sweep_config(const ExperimentConfig& cfg);
ElasticityTensor elasticity_from_config(const ExperimentConfig& cfg);

} // namespace platelab
