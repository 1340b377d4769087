#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace platelab {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      known = known || it.key() == k;
    if (!known)
      throw ConfigError("unknown key: " + (path.empty() ? it.key() : path + "." + it.key()));
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double num_at(const json& obj, const char* key, const std::string& path,
              double fallback) {
  const json* v = find(obj, key);
  if (!v)
    return fallback;
  if (!v->is_number())
    throw ConfigError(path + "." + key + " must be a number");
  return v->get<double>();
}

int int_at(const json& obj, const char* key, const std::string& path,
           int fallback) {
  const json* v = find(obj, key);
  if (!v)
    return fallback;
  if (!v->is_number_integer())
    throw ConfigError(path + "." + key + " must be an integer");
  return v->get<int>();
}

Profile::Kind profile_kind(const std::string& name, const std::string& path) {
  if (name == "zero")
    return Profile::Kind::zero;
  if (name == "uniform")
    return Profile::Kind::uniform;
  if (name == "cosine")
    return Profile::Kind::cosine;
  throw ConfigError(path + " must be one of zero, uniform, cosine");
}

const char* profile_name(Profile::Kind k) {
  switch (k) {
  case Profile::Kind::zero:
    return "zero";
  case Profile::Kind::uniform:
    return "uniform";
  default:
    return "cosine";
  }
}

const char* model_name(LimitModel m) {
  switch (m) {
  case LimitModel::kl:
    return "kl";
  case LimitModel::rm:
    return "rm";
  default:
    return "none";
  }
}

// Ladder heads within roundoff of epsilon_r are pinned to it exactly so the
// reference-coincidence checks can compare bitwise.
double snap_to(double value, double target) {
  return std::abs(value - target) <= 1e-9 * std::abs(target) ? target : value;
}

ExperimentConfig from_json(const json& j) {
  if (!j.is_object())
    throw ConfigError("config root must be a JSON object");
  reject_unknown(j, "", {"geometry", "material", "kappa", "epsilon", "ladder",
                         "mesh", "load", "beta", "solver", "limit_model",
                         "inertia", "bound_factor", "output"});
  ExperimentConfig cfg;

  double ell = 1.0, h = 0.2;
  if (const json* g = find(j, "geometry")) {
    if (!g->is_object())
      throw ConfigError("geometry must be an object");
    reject_unknown(*g, "geometry", {"ell", "half_thickness"});
    ell = num_at(*g, "ell", "geometry", ell);
    h = num_at(*g, "half_thickness", "geometry", h);
  }
  try {
    cfg.family = DomainFamily{ell, h};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
  double er = cfg.family.epsilon_r();

  if (const json* m = find(j, "material")) {
    if (!m->is_object())
      throw ConfigError("material must be an object");
    reject_unknown(*m, "material", {"lambda", "mu", "voigt"});
    if (const json* v = find(*m, "voigt")) {
      if (find(*m, "lambda") || find(*m, "mu"))
        throw ConfigError("material.voigt excludes material.lambda and material.mu");
      if (!v->is_array() || v->size() != 6)
        throw ConfigError("material.voigt must be a 6x6 array");
      for (int r = 0; r < 6; ++r) {
        const json& row = (*v)[r];
        if (!row.is_array() || row.size() != 6)
          throw ConfigError("material.voigt must be a 6x6 array");
        for (int c = 0; c < 6; ++c) {
          if (!row[c].is_number())
            throw ConfigError("material.voigt entries must be numbers");
          cfg.voigt[r * 6 + c] = row[c].get<double>();
        }
      }
      cfg.has_voigt = true;
    } else {
      cfg.lambda = num_at(*m, "lambda", "material", cfg.lambda);
      cfg.mu = num_at(*m, "mu", "material", cfg.mu);
    }
  }

  cfg.kappa = num_at(j, "kappa", "config", 0.0);
  cfg.epsilon = snap_to(num_at(j, "epsilon", "config", er), er);

  if (const json* l = find(j, "ladder")) {
    if (!l->is_array() || l->empty())
      throw ConfigError("ladder must be a nonempty array of numbers");
    for (const json& e : *l) {
      if (!e.is_number())
        throw ConfigError("ladder must be a nonempty array of numbers");
      cfg.ladder.push_back(e.get<double>());
    }
    cfg.ladder[0] = snap_to(cfg.ladder[0], er);
  } else {
    for (int k = 0; k < 5; ++k)
      cfg.ladder.push_back(er * std::ldexp(1.0, -k));
  }

  if (const json* m = find(j, "mesh")) {
    if (!m->is_object())
      throw ConfigError("mesh must be an object");
    reject_unknown(*m, "mesh", {"nx", "ny", "nz"});
    cfg.nx = int_at(*m, "nx", "mesh", cfg.nx);
    cfg.ny = int_at(*m, "ny", "mesh", cfg.ny);
    cfg.nz = int_at(*m, "nz", "mesh", cfg.nz);
  }

  cfg.load.transverse = Profile{Profile::Kind::uniform, 1e-2};
  if (const json* l = find(j, "load")) {
    if (!l->is_object())
      throw ConfigError("load must be an object");
    reject_unknown(*l, "load", {"profile", "amplitude", "exponents"});
    if (const json* p = find(*l, "profile")) {
      if (!p->is_string())
        throw ConfigError("load.profile must be a string");
      cfg.load.transverse.kind = profile_kind(p->get<std::string>(), "load.profile");
    }
    cfg.load.transverse.amplitude =
        num_at(*l, "amplitude", "load", cfg.load.transverse.amplitude);
    if (const json* e = find(*l, "exponents")) {
      if (!e->is_array() || e->size() != 3)
        throw ConfigError("load.exponents must be an array of 3 numbers");
      for (int k = 0; k < 3; ++k) {
        if (!(*e)[k].is_number())
          throw ConfigError("load.exponents must be an array of 3 numbers");
        cfg.load.exponents[k] = (*e)[k].get<double>();
      }
    }
  }

  cfg.beta = num_at(j, "beta", "config", 0.0);

  if (const json* s = find(j, "solver")) {
    if (!s->is_object())
      throw ConfigError("solver must be an object");
    reject_unknown(*s, "solver", {"tol", "max_iter_factor", "dense_threshold"});
    cfg.solver.tol = num_at(*s, "tol", "solver", cfg.solver.tol);
    cfg.solver.max_iter_factor =
        num_at(*s, "max_iter_factor", "solver", cfg.solver.max_iter_factor);
    cfg.solver.dense_threshold =
        int_at(*s, "dense_threshold", "solver", cfg.solver.dense_threshold);
  }

  if (const json* m = find(j, "limit_model")) {
    if (!m->is_string())
      throw ConfigError("limit_model must be one of kl, rm, none");
    std::string name = m->get<std::string>();
    if (name == "kl")
      cfg.limit_model = LimitModel::kl;
    else if (name == "rm")
      cfg.limit_model = LimitModel::rm;
    else if (name == "none")
      cfg.limit_model = LimitModel::none;
    else
      throw ConfigError("limit_model must be one of kl, rm, none");
  }

  if (const json* i = find(j, "inertia")) {
    if (!i->is_object())
      throw ConfigError("inertia must be an object");
    reject_unknown(*i, "inertia", {"rho"});
    cfg.rho = num_at(*i, "rho", "inertia", cfg.rho);
  }

  cfg.bound_factor = num_at(j, "bound_factor", "config", cfg.bound_factor);

  if (const json* o = find(j, "output")) {
    if (!o->is_string())
      throw ConfigError("output must be a string");
    cfg.output = o->get<std::string>();
  }

  validate_config(cfg);
  return cfg;
}

} // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  double er = cfg.family.epsilon_r();
  if (!(cfg.lambda >= 0.0) || !(cfg.mu > 0.0))
    if (!cfg.has_voigt)
      throw ConfigError("material: requires mu > 0 and lambda >= 0");
  if (cfg.has_voigt) {
    if (cfg.kappa != 0.0)
      throw ConfigError("material.voigt requires kappa = 0");
    if (cfg.limit_model != LimitModel::none)
      throw ConfigError("material.voigt requires limit_model = none");
  }
  if (!(cfg.kappa >= 0.0))
    throw ConfigError("kappa must be nonnegative");
  if (!(cfg.epsilon > 0.0) || !(cfg.epsilon <= er))
    throw ConfigError("epsilon must lie in (0, epsilon_r]");
  if (cfg.ladder.empty())
    throw ConfigError("ladder must be a nonempty array of numbers");
  if (cfg.ladder.front() != er)
    throw ConfigError("ladder must start at epsilon_r = half_thickness/ell");
  for (size_t i = 0; i < cfg.ladder.size(); ++i) {
    if (!(cfg.ladder[i] > 0.0) || !(cfg.ladder[i] <= er))
      throw ConfigError("ladder entries must lie in (0, epsilon_r]");
    if (i > 0 && !(cfg.ladder[i] < cfg.ladder[i - 1]))
      throw ConfigError("ladder must be strictly decreasing");
  }
  if (cfg.nx < 1 || cfg.ny < 1 || cfg.nz < 1)
    throw ConfigError("mesh sizes must be positive integers");
  if (!std::isfinite(cfg.load.transverse.amplitude))
    throw ConfigError("load.amplitude must be finite");
  for (double e : cfg.load.exponents)
    if (!std::isfinite(e))
      throw ConfigError("load.exponents must be finite");
  if (!std::isfinite(cfg.beta))
    throw ConfigError("beta must be finite");
  if (!(cfg.solver.tol > 0.0))
    throw ConfigError("solver.tol must be positive");
  if (!(cfg.solver.max_iter_factor > 0.0))
    throw ConfigError("solver.max_iter_factor must be positive");
  if (cfg.solver.dense_threshold < 0)
    throw ConfigError("solver.dense_threshold must be nonnegative");
  if (!(cfg.rho >= 0.0))
    throw ConfigError("inertia.rho must be nonnegative");
  if (!(cfg.bound_factor >= 1.0))
    throw ConfigError("bound_factor must be at least 1");
  if (cfg.output.empty())
    throw ConfigError("output must be a nonempty path");
}

std::string config_echo(const ExperimentConfig& cfg) {
  json j;
  j["geometry"]["ell"] = cfg.family.ell;
  j["geometry"]["half_thickness"] = cfg.family.h;
  if (cfg.has_voigt) {
    json rows = json::array();
    for (int r = 0; r < 6; ++r) {
      json row = json::array();
      for (int c = 0; c < 6; ++c)
        row.push_back(cfg.voigt[r * 6 + c]);
      rows.push_back(row);
    }
    j["material"]["voigt"] = rows;
  } else {
    j["material"]["lambda"] = cfg.lambda;
    j["material"]["mu"] = cfg.mu;
  }
  j["kappa"] = cfg.kappa;
  j["epsilon"] = cfg.epsilon;
  j["ladder"] = cfg.ladder;
  j["mesh"]["nx"] = cfg.nx;
  j["mesh"]["ny"] = cfg.ny;
  j["mesh"]["nz"] = cfg.nz;
  j["load"]["profile"] = profile_name(cfg.load.transverse.kind);
  j["load"]["amplitude"] = cfg.load.transverse.amplitude;
  j["load"]["exponents"] = cfg.load.exponents;
  j["beta"] = cfg.beta;
  j["solver"]["tol"] = cfg.solver.tol;
  j["solver"]["max_iter_factor"] = cfg.solver.max_iter_factor;
  j["solver"]["dense_threshold"] = cfg.solver.dense_threshold;
  j["limit_model"] = model_name(cfg.limit_model);
  j["inertia"]["rho"] = cfg.rho;
  j["bound_factor"] = cfg.bound_factor;
  j["output"] = cfg.output;
  return j.dump(2) + "\n";
}

SweepConfig sweep_config(const ExperimentConfig& cfg) {
  if (cfg.has_voigt)
    throw ConfigError("material.voigt: sweep needs the isotropic material "
                      "shared with the limit models; use solve instead");
  SweepConfig sc;
  sc.family = cfg.family;
  sc.lambda = cfg.lambda;
  sc.mu = cfg.mu;
  sc.kappa = cfg.kappa;
  sc.ladder = cfg.ladder;
  sc.nx = cfg.nx;
  sc.ny = cfg.ny;
  sc.nz = cfg.nz;
  sc.load = cfg.load;
  sc.beta = cfg.beta;
  sc.solver = cfg.solver;
  sc.bound_factor = cfg.bound_factor;
  sc.limit_model = cfg.limit_model;
  return sc;
}

ElasticityTensor elasticity_from_config(const ExperimentConfig& cfg) {
  if (cfg.has_voigt)
    return ElasticityTensor::general(cfg.voigt);
  return ElasticityTensor::isotropic(cfg.lambda, cfg.mu);
}

} // namespace platelab
