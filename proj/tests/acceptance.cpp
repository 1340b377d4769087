// Acceptance suite. Each numbered criterion prints exactly one PASS/FAIL
// line with the measured quantities; the exit status is the number of
// failed criteria. Tolerances are pinned here, next to the checks.

#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "elasticity.hpp"
#include "fem3d.hpp"
#include "harness.hpp"
#include "inertia.hpp"
#include "plate2d.hpp"
#include "scaling.hpp"
#include "support/element_oracle.hpp"

using namespace platelab;
using platelab::testing::max_rel_entry_diff;
using platelab::testing::oracle_element_matrix;

namespace {

constexpr double kTolDensity = 1e-13;     // criterion 1, both identities
constexpr double kTolResidual = 1e-10;    // criterion 2, stationarity
constexpr double kTolElement = 1e-12;     // criterion 2, element oracle
constexpr double kMaxFinalError = 0.05;   // criteria 3 and 4, last-rung metrics
constexpr double kMinShearRate = 0.9;     // criterion 3, log-log slope
constexpr double kMaxDirectorGap = 0.05;  // criterion 3, smallest rung
constexpr double kMinGapRatio = 3.0;      // criterion 4, retained-shear margin
constexpr double kTolArgmin = 1e-8;       // criterion 6
constexpr double kTolGaussSolved = 1e-6;  // criterion 7, solved deflection
constexpr double kTolGaussPoly = 1e-10;   // criterion 7, polynomial case
constexpr double kTolFiberAvg = 1e-14;    // criterion 8, bending reconstruction
constexpr double kTolRoundTrip = 1e-15;   // criterion 8, transport round trip
constexpr double kTolCommute = 1e-12;     // criterion 8, average/scaling order
constexpr double kTolSlope = 0.01;        // criterion 9, classical working
constexpr double kTolConstant = 1e-12;    // criterion 9, modified working
constexpr double kTolCoincide = 1e-14;    // criterion 9, reference member

std::string str(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

struct Criterion {
  bool passed = false;
  std::string detail;
};

double rel_gap(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1]))
      return false;
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i)
    out += (i ? " " : "") + str("%.3g", v[i]);
  return out;
}

// ---------------------------------------------------------------------------
// 1. The thickness-modified density evaluated at the reference slenderness
//    coincides with the plain density, and the plain density equals its
//    grouped in-plane/transverse rewrite.

double grouped_density(const Strain& E, double lambda, double mu) {
  double s = E[0] + E[1];
  return 0.5 * (2.0 * mu + lambda) * s * s -
         2.0 * mu * (E[0] * E[1] - E[5] * E[5]) +
         0.5 * (2.0 * mu + lambda) * E[2] * E[2] + lambda * s * E[2] +
         2.0 * mu * (E[4] * E[4] + E[3] * E[3]);
}

Criterion criterion_density() {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> mu_d(0.2, 3.0);
  std::uniform_real_distribution<double> kappa_d(0.0, 4.0);
  std::uniform_real_distribution<double> eps_d(0.05, 0.3);
  double worst_coincide = 0.0, worst_rewrite = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Strain E;
    for (int i = 0; i < 6; ++i)
      E[i] = unit(rng);
    std::array<double, 2> u33 = {unit(rng), unit(rng)};
    double mu = mu_d(rng);
    std::uniform_real_distribution<double> lambda_d(-0.6 * mu, 4.0);
    double lambda = lambda_d(rng);
    double eps_r = eps_d(rng);
    KappaEnergyParams p(kappa_d(rng), eps_r, eps_r);
    double plain = energy_density(E, lambda, mu);
    double modified = energy_density_kappa(E, u33, lambda, mu, p);
    worst_coincide = std::max(worst_coincide,
                              std::abs(modified - plain) / std::abs(plain));
    worst_rewrite =
        std::max(worst_rewrite, std::abs(grouped_density(E, lambda, mu) - plain) /
                                    std::abs(plain));
  }
  Criterion c;
  c.passed = worst_coincide <= kTolDensity && worst_rewrite <= kTolDensity;
  c.detail = str("1000 samples: reference-slenderness gap %.2e, grouped rewrite "
                 "gap %.2e (tol %.0e)",
                 worst_coincide, worst_rewrite, kTolDensity);
  return c;
}

// ---------------------------------------------------------------------------
// 2. Solved fields are stationary points of the discrete functional, and the
//    element matrix agrees with a dense-quadrature oracle.

Criterion criterion_stationarity(const ConvergenceReport& kl_report) {
  double worst_element = 0.0;
  {
    ElasticityTensor C = ElasticityTensor::isotropic(1.2, 0.8);
    KappaEnergyParams p(1.5, 0.08, 0.2);
    auto A = energy_coefficient_matrix(C, p);
    for (ShearTreatment sh : {ShearTreatment::assumed_midline,
                              ShearTreatment::reduced_center,
                              ShearTreatment::full}) {
      auto lib = element_matrix(0.23, 0.31, 0.17, A, sh);
      auto ora = oracle_element_matrix(0.23, 0.31, 0.17, A, sh);
      worst_element = std::max(worst_element, max_rel_entry_diff(lib, ora));
    }
  }

  DomainFamily family(1.0, 0.2);
  LoadSpec load;
  load.transverse = {Profile::Kind::uniform, 0.01};
  SolveOptions opts;
  opts.dense_threshold = 3000;
  double worst_residual = 0.0;
  std::string per_field;
  for (auto [kappa, eps] : {std::pair{0.0, family.epsilon_r()},
                            std::pair{0.0, 0.025}, std::pair{1.0, 0.05},
                            std::pair{1.0, 0.025}}) {
    auto mesh = family.mesh_at(eps, 16, 16, 1);
    SparseSystem sys =
        assemble(mesh, ElasticityTensor::isotropic(1.0, 1.0),
                 KappaEnergyParams(kappa, eps, family.epsilon_r()),
                 load_sequence(load, family, eps));
    DisplacementField3D u = solve(sys, opts);
    double res = stationarity_residual(sys, u);
    worst_residual = std::max(worst_residual, res);
    per_field += str(" (k=%g,eps=%g)%.1e", kappa, eps, res);
  }
  // The 2D reference solve records its own relative residual.
  worst_residual = std::max(worst_residual, kl_report.kl_reference.residual);

  Criterion c;
  c.passed = worst_residual <= kTolResidual && worst_element <= kTolElement;
  c.detail = str("solve residuals%s, 2d reference %.1e (tol %.0e); element "
                 "oracle gap %.2e (tol %.0e)",
                 per_field.c_str(), kl_report.kl_reference.residual,
                 kTolResidual, worst_element, kTolElement);
  return c;
}

// ---------------------------------------------------------------------------
// 3. Unshearable limit: deflection error and shear norm fall monotonically,
//    the shear decays at a first-order rate, and the fitted director matches
//    the deflection slope at the thinnest member.

Criterion criterion_kl_limit(const ConvergenceReport& r) {
  std::vector<double> e_kl, shear;
  for (const auto& row : r.rows) {
    e_kl.push_back(row.e_kl);
    shear.push_back(row.shear);
  }
  double gap = r.rows.back().director_gap;
  double rate = r.rate_shear.value_or(0.0);
  bool solved = true;
  for (const auto& row : r.rows)
    solved = solved && !row.failed;
  Criterion c;
  c.passed = solved && strictly_decreasing(e_kl) &&
             e_kl.back() <= kMaxFinalError && strictly_decreasing(shear) &&
             rate >= kMinShearRate && gap <= kMaxDirectorGap;
  c.detail = str("e_kl {%s} final<=%.2g, shear {%s} rate %.2f (min %.1f), "
                 "director gap %.2e (max %.2g)",
                 join(e_kl).c_str(), kMaxFinalError, join(shear).c_str(), rate,
                 kMinShearRate, gap, kMaxDirectorGap);
  return c;
}

// ---------------------------------------------------------------------------
// 4. Shearable limit: the affine-profile misfit falls monotonically below the
//    threshold, while the director gap stays well above its unshearable
//    counterpart at the thinnest member.

Criterion criterion_rm_limit(const ConvergenceReport& rm,
                             const ConvergenceReport& kl) {
  std::vector<double> res;
  for (const auto& row : rm.rows)
    res.push_back(row.rm_res);
  double gap_rm = rm.rows.back().director_gap;
  double gap_kl = kl.rows.back().director_gap;
  bool solved = true;
  for (const auto& row : rm.rows)
    solved = solved && !row.failed;
  Criterion c;
  c.passed = solved && strictly_decreasing(res) && res.back() <= kMaxFinalError &&
             gap_rm >= kMinGapRatio * gap_kl;
  c.detail = str("rm_res {%s} final<=%.2g, director gap %.4e vs %.4e "
                 "(ratio %.3f, required >= %.1f)",
                 join(res).c_str(), kMaxFinalError, gap_rm, gap_kl,
                 gap_kl > 0.0 ? gap_rm / gap_kl : 0.0, kMinGapRatio);
  return c;
}

// ---------------------------------------------------------------------------
// 5. Construction checklist: every item passes on both shipped recipes, and
//    zeroing the load exponents makes the boundedness proxy fail.

Criterion criterion_checklist(const ConvergenceReport& kl,
                              const ConvergenceReport& rm,
                              const SweepConfig& kl_cfg) {
  std::string failing;
  for (const auto& rep : {&kl, &rm})
    for (const auto& item : rep->checklist)
      if (!item.passed)
        failing += (failing.empty() ? "" : ", ") + item.name;

  SweepConfig unscaled = kl_cfg;
  unscaled.load.exponents = {0.0, 0.0, 0.0};
  unscaled.nx = unscaled.ny = 8; // the proxy is mesh-insensitive
  ConvergenceReport flat = run_sweep(unscaled);
  bool proxy_failed = false;
  double worst_norm = 0.0;
  for (const auto& item : flat.checklist)
    if (item.name == "scaled_norms_bounded")
      proxy_failed = !item.passed;
  for (const auto& row : flat.rows)
    worst_norm = std::max(worst_norm,
                          std::max(row.norm_inplane, row.norm_transverse));

  Criterion c;
  c.passed = failing.empty() && kl.passed && rm.passed && proxy_failed &&
             !flat.passed;
  c.detail =
      failing.empty()
          ? str("both shipped recipes pass all %zu items; zero exponents "
                "break the boundedness proxy as expected",
                kl.checklist.size())
          : "failing items: " + failing;
  return c;
}

// ---------------------------------------------------------------------------
// 6. Uniform rescaling of loads and displacements never moves the minimizer:
//    solving under the rescaled load reproduces the rescaled solution.

Criterion criterion_beta(const DomainFamily& family) {
  double eps = 0.1;
  LoadSpec b;
  b.transverse = {Profile::Kind::uniform, 0.01};
  b.inplane1 = {Profile::Kind::cosine, 0.004};
  auto mesh = family.mesh_at(eps, 8, 8, 1);
  ElasticityTensor C = ElasticityTensor::isotropic(1.0, 1.0);
  KappaEnergyParams p(0.5, eps, family.epsilon_r());
  SolveOptions opts;
  DisplacementField3D u =
      solve(assemble(mesh, C, p, load_sequence(b, family, eps)), opts);

  double worst = 0.0;
  for (double beta : {0.0, 0.5, 1.0}) {
    auto [u_tilde, b_tilde] = beta_rescale(u, b, eps, beta);
    DisplacementField3D direct =
        solve(assemble(mesh, C, p, load_sequence(b_tilde, family, eps)), opts);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < u_tilde.dof_count(); ++i) {
      num += (direct.coeff[i] - u_tilde.coeff[i]) *
             (direct.coeff[i] - u_tilde.coeff[i]);
      den += u_tilde.coeff[i] * u_tilde.coeff[i];
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  Criterion c;
  c.passed = worst <= kTolArgmin;
  c.detail = str("minimizers for beta in {0, 1/2, 1} agree to %.2e (tol %.0e)",
                 worst, kTolArgmin);
  return c;
}

// ---------------------------------------------------------------------------
// 7. The determinant term of the bending energy is a null Lagrangian on
//    clamped fields: it evaluates to noise relative to the Laplacian energy.

Criterion criterion_gaussian(const ConvergenceReport& kl_report) {
  const KLState& state = kl_report.kl_reference;
  double solved_ratio = std::abs(gaussian_term(state)) /
                        laplacian_energy(*state.mesh, state.coeff);

  auto mesh = std::make_shared<Mesh2D>(build_section_mesh(1.0, 9, 6));
  std::vector<double> coeff(mesh->node_count() * kDofsPerNode2D, 0.0);
  for (int n = 0; n < mesh->node_count(); ++n) {
    double x = mesh->nodes[n][0], y = mesh->nodes[n][1];
    double fx = (x * x - 1.0), fy = (y * y - 1.0);
    coeff[4 * n + 0] = fx * fx * fy * fy;
    coeff[4 * n + 1] = 4.0 * x * fx * fy * fy;
    coeff[4 * n + 2] = 4.0 * y * fy * fx * fx;
    coeff[4 * n + 3] = 16.0 * x * y * fx * fy;
  }
  double poly_ratio =
      std::abs(gaussian_term(*mesh, coeff)) / laplacian_energy(*mesh, coeff);

  Criterion c;
  c.passed = solved_ratio <= kTolGaussSolved && poly_ratio <= kTolGaussPoly;
  c.detail = str("solved deflection %.2e (tol %.0e), clamped quartic %.2e "
                 "(tol %.0e), relative to the Laplacian energy",
                 solved_ratio, kTolGaussSolved, poly_ratio, kTolGaussPoly);
  return c;
}

// ---------------------------------------------------------------------------
// 8. Bending reconstruction averages back to (0, 0, w); thickness transport
//    round-trips to machine precision; fiber averaging commutes with the
//    component scaling.

DisplacementField3D random_field(std::shared_ptr<const Mesh3D> mesh, double eps,
                                 unsigned seed) {
  DisplacementField3D u;
  u.mesh = mesh;
  u.epsilon = eps;
  u.coeff.resize(mesh->node_count() * kDofsPerNode3D);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (double& v : u.coeff)
    v = unit(rng);
  return u;
}

Criterion criterion_operators(const ConvergenceReport& kl_report,
                              const DomainFamily& family) {
  // Reconstruction: the fiber average returns the deflection exactly.
  const KLState& state = kl_report.kl_reference;
  auto ref_mesh = family.mesh_at(family.epsilon_r(), 16, 16, 1);
  DisplacementField3D bend = reconstruct_kl_3d(state, ref_mesh);
  auto avg = fiber_average(bend);
  double wmax = 0.0;
  for (int n = 0; n < state.mesh->node_count(); ++n)
    wmax = std::max(wmax, std::abs(state.coeff[4 * n]));
  double worst_avg = 0.0;
  for (int n = 0; n < state.mesh->node_count(); ++n) {
    worst_avg = std::max(worst_avg, std::abs(avg[n][0]));
    worst_avg = std::max(worst_avg, std::abs(avg[n][1]));
    worst_avg = std::max(worst_avg, std::abs(avg[n][2] - state.coeff[4 * n]));
  }
  worst_avg /= wmax;

  // Transport round trip on an arbitrary field.
  double eps = 0.05;
  auto member_mesh = family.mesh_at(eps, 6, 6, 2);
  auto ref6 = family.mesh_at(family.epsilon_r(), 6, 6, 2);
  DisplacementField3D u = random_field(member_mesh, eps, 99);
  DisplacementField3D back = push_forward(pullback(u, ref6), member_mesh);
  double worst_rt = 0.0;
  for (int i = 0; i < u.dof_count(); ++i)
    worst_rt = std::max(worst_rt, std::abs(back.coeff[i] - u.coeff[i]));
  double umax = 0.0;
  for (double v : u.coeff)
    umax = std::max(umax, std::abs(v));
  worst_rt /= umax;

  // Averaging first and scaling the in-plane components equals scaling the
  // pulled-back field and averaging afterwards.
  double delta = eps / family.epsilon_r();
  ScaledSolution sc = scaled_components(pullback(u, ref6), eps,
                                        family.epsilon_r());
  auto avg_orig = fiber_average(u);
  auto avg_scaled = fiber_average(sc.scaled);
  double amax = 0.0;
  for (const auto& a : avg_orig)
    for (double v : a)
      amax = std::max(amax, std::abs(v));
  double worst_comm = 0.0;
  for (size_t n = 0; n < avg_orig.size(); ++n) {
    worst_comm = std::max(worst_comm,
                          std::abs(avg_scaled[n][0] - avg_orig[n][0] / delta));
    worst_comm = std::max(worst_comm,
                          std::abs(avg_scaled[n][1] - avg_orig[n][1] / delta));
    worst_comm =
        std::max(worst_comm, std::abs(avg_scaled[n][2] - avg_orig[n][2]));
  }
  worst_comm /= amax;

  Criterion c;
  c.passed = worst_avg <= kTolFiberAvg && worst_rt <= kTolRoundTrip &&
             worst_comm <= kTolCommute;
  c.detail = str("fiber average gap %.2e (tol %.0e), round trip %.2e (tol "
                 "%.0e), average/scaling commutation %.2e (tol %.0e)",
                 worst_avg, kTolFiberAvg, worst_rt, kTolRoundTrip, worst_comm,
                 kTolCommute);
  return c;
}

// ---------------------------------------------------------------------------
// 9. Classical in-plane inertial working vanishes linearly in the thickness
//    parameter; the modified pairing is exactly thickness-independent; both
//    coincide on the reference member.

Criterion criterion_inertia(const DomainFamily& family) {
  AccelerationProfile p = default_acceleration_profile(1.0);
  std::vector<double> ladder;
  for (int k = 0; k < 11; ++k)
    ladder.push_back(family.epsilon_r() * std::ldexp(1.0, -k));
  auto rows = inertia_table(p, family, ladder, 16, 16);

  double coincide = std::max(
      rel_gap(rows[0].classical_total, rows[0].modified_total),
      rel_gap(rows[0].classical_inplane, rows[0].modified_inplane));

  // Least-squares slope of log(working) against log(epsilon).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : rows) {
    double x = std::log(row.epsilon), y = std::log(row.classical_inplane);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(rows.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  double constancy = 0.0;
  for (const auto& row : rows)
    constancy = std::max(constancy,
                         rel_gap(row.modified_inplane, rows[0].modified_inplane));

  Criterion c;
  c.passed = std::abs(slope - 1.0) <= kTolSlope && constancy <= kTolConstant &&
             coincide <= kTolCoincide;
  c.detail = str("classical in-plane slope %.4f (1 +- %.2g), modified "
                 "in-plane drift %.2e (tol %.0e), reference coincidence %.2e "
                 "(tol %.0e)",
                 slope, kTolSlope, constancy, kTolConstant, coincide,
                 kTolCoincide);
  return c;
}

} // namespace

int main() {
  std::string config_dir = PLATELAB_CONFIG_DIR;
  ExperimentConfig kl_cfg = parse_config_file(config_dir + "/kl.cfg");
  ExperimentConfig rm_cfg = parse_config_file(config_dir + "/rm.cfg");
  SweepConfig kl_sweep = sweep_config(kl_cfg);
  SweepConfig rm_sweep = sweep_config(rm_cfg);
  DomainFamily family = kl_sweep.family;

  std::printf("running shipped sweeps (%s)\n", config_dir.c_str());
  std::fflush(stdout);
  ConvergenceReport kl_report = run_sweep(kl_sweep);
  ConvergenceReport rm_report = run_sweep(rm_sweep);

  struct Named {
    const char* label;
    Criterion result;
  };
  std::vector<Named> all = {
      {"energy density identities", criterion_density()},
      {"stationarity and element oracle", criterion_stationarity(kl_report)},
      {"unshearable limit", criterion_kl_limit(kl_report)},
      {"shearable limit", criterion_rm_limit(rm_report, kl_report)},
      {"construction checklist", criterion_checklist(kl_report, rm_report,
                                                     kl_sweep)},
      {"load rescaling equivariance", criterion_beta(family)},
      {"determinant null Lagrangian", criterion_gaussian(kl_report)},
      {"reconstruction and transport", criterion_operators(kl_report, family)},
      {"inertial working", criterion_inertia(family)},
  };

  int failures = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    bool ok = all[i].result.passed;
    failures += ok ? 0 : 1;
    std::printf("criterion %zu: %s  %s: %s\n", i + 1, ok ? "PASS" : "FAIL",
                all[i].label, all[i].result.detail.c_str());
  }
  std::printf("acceptance: %zu/%zu criteria passed\n", all.size() - failures,
              all.size());
  return failures;
}
