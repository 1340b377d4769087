#include <doctest.h>

#include <cmath>
#include <memory>

#include "plate2d.hpp"
#include "scaling.hpp"
#include "support/test_helpers.hpp"

using namespace platelab;
using namespace platelab::testing;

namespace {

KLState solve_uniform(int n, double q, double lambda = 1.0, double mu = 1.0,
                      double ell = 1.0, double h = 0.2) {
  auto mesh = std::make_shared<Mesh2D>(build_section_mesh(ell, n, n));
  KLModuli mod = kl_moduli_from_lame(lambda, mu, h);
  double bbar = 2.0 * h * q;
  return solve_kl(mesh, mod, [bbar](double, double) { return bbar; });
}

// Nodal interpolant coefficients (w, w_x, w_y, w_xy) from closed-form
// derivatives.
std::vector<double> interpolate(const Mesh2D& mesh,
                                const std::function<double(double, double)>& w,
                                const std::function<double(double, double)>& wx,
                                const std::function<double(double, double)>& wy,
                                const std::function<double(double, double)>& wxy) {
  std::vector<double> c(static_cast<size_t>(mesh.node_count()) * kDofsPerNode2D);
  for (int n = 0; n < mesh.node_count(); ++n) {
    double x = mesh.nodes[n][0], y = mesh.nodes[n][1];
    c[n * 4 + 0] = w(x, y);
    c[n * 4 + 1] = wx(x, y);
    c[n * 4 + 2] = wy(x, y);
    c[n * 4 + 3] = wxy(x, y);
  }
  return c;
}

// exact RM member on a 3D mesh: u_a = v_a + x3 phi_a, u3 = w, nodal values
// arbitrary per section column
DisplacementField3D make_rm_member(std::shared_ptr<const Mesh3D> mesh,
                                   const std::vector<double>& v1,
                                   const std::vector<double>& v2,
                                   const std::vector<double>& w,
                                   const std::vector<double>& phi1,
                                   const std::vector<double>& phi2) {
  DisplacementField3D u;
  u.mesh = mesh;
  u.epsilon = mesh->half_thickness;
  u.coeff.assign(static_cast<size_t>(mesh->node_count()) * kDofsPerNode3D, 0.0);
  int per_layer = (mesh->nx + 1) * (mesh->ny + 1);
  for (int n = 0; n < mesh->node_count(); ++n) {
    int col = n % per_layer;
    double x3 = mesh->nodes[n][2];
    u.coeff[n * 6 + 0] = v1[col] + x3 * phi1[col];
    u.coeff[n * 6 + 1] = phi1[col];
    u.coeff[n * 6 + 2] = v2[col] + x3 * phi2[col];
    u.coeff[n * 6 + 3] = phi2[col];
    u.coeff[n * 6 + 4] = w[col];
    u.coeff[n * 6 + 5] = 0.0;
  }
  return u;
}

} // namespace

TEST_CASE("zero transverse load gives the zero bending state") {
  KLState st = solve_uniform(6, 0.0);
  for (double v : st.coeff)
    CHECK(v == 0.0);
  CHECK(gaussian_term(st) == 0.0);
}

TEST_CASE("bending solve is linear in the load") {
  KLState a = solve_uniform(8, 0.01);
  KLState b = solve_uniform(8, 0.03);
  double worst = 0.0, scale = 0.0;
  for (size_t i = 0; i < a.coeff.size(); ++i) {
    worst = std::max(worst, std::abs(3.0 * a.coeff[i] - b.coeff[i]));
    scale = std::max(scale, std::abs(b.coeff[i]));
  }
  CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("bending solves meet the stationarity tolerance") {
  for (int n : {4, 8, 16})
    CHECK(solve_uniform(n, 0.01).residual <= 1e-10);
}

TEST_CASE("center deflection converges to the classical clamped-plate value") {
  // uniformly loaded clamped square plate: w_c = alpha * q * a^4 / D with
  // alpha = 0.00126 for the side length a and flexural rigidity D
  double ell = 1.0, h = 0.2, q = 0.01;
  KLModuli mod = kl_moduli_from_lame(1.0, 1.0, h);
  double bbar = 2.0 * h * q;
  double a4 = 16.0 * ell * ell * ell * ell;
  std::vector<double> wc;
  for (int n : {4, 8, 16, 32}) {
    KLState st = solve_uniform(n, q, 1.0, 1.0, ell, h);
    int center = st.mesh->node_index(n / 2, n / 2);
    wc.push_back(st.coeff[center * 4]);
  }
  // conforming refinement softens monotonically and the increments shrink
  for (size_t t = 1; t < wc.size(); ++t)
    CHECK(wc[t] > wc[t - 1]);
  CHECK(wc[3] - wc[2] < 0.5 * (wc[2] - wc[1]));
  CHECK(wc[2] - wc[1] < 0.5 * (wc[1] - wc[0]));
  for (size_t t = 1; t < wc.size(); ++t) {
    double alpha = wc[t] * mod.Dbar / (bbar * a4);
    CHECK(alpha > 0.00125);
    CHECK(alpha < 0.00128);
  }
}

TEST_CASE("determinant functional vanishes on fields with zero twist curvature") {
  auto mesh = std::make_shared<Mesh2D>(build_section_mesh(1.0, 5, 5));
  auto c = interpolate(
      *mesh, [](double x, double) { return x * x; },
      [](double x, double) { return 2.0 * x; }, [](double, double) { return 0.0; },
      [](double, double) { return 0.0; });
  CHECK(std::abs(gaussian_term(*mesh, c)) <= 1e-14);
}

TEST_CASE("determinant functional integrates the twist exactly") {
  double ell = 1.3;
  auto mesh = std::make_shared<Mesh2D>(build_section_mesh(ell, 4, 7));
  auto c = interpolate(
      *mesh, [](double x, double y) { return x * y; },
      [](double, double y) { return y; }, [](double x, double) { return x; },
      [](double, double) { return 1.0; });
  // w11 w22 - w12^2 = -1 over the section of area 4 ell^2
  CHECK(gaussian_term(*mesh, c) ==
        doctest::Approx(-4.0 * ell * ell).epsilon(1e-13));
}

TEST_CASE("determinant functional is a null Lagrangian on clamped interpolants") {
  double ell = 1.0;
  auto mesh = std::make_shared<Mesh2D>(build_section_mesh(ell, 9, 6));
  auto f = [ell](double x) { return (x * x - ell * ell) * (x * x - ell * ell); };
  auto df = [ell](double x) { return 4.0 * x * (x * x - ell * ell); };
  auto c = interpolate(
      *mesh, [&](double x, double y) { return f(x) * f(y); },
      [&](double x, double y) { return df(x) * f(y); },
      [&](double x, double y) { return f(x) * df(y); },
      [&](double x, double y) { return df(x) * df(y); });
  double lap = laplacian_energy(*mesh, c);
  REQUIRE(lap > 0.0);
  CHECK(std::abs(gaussian_term(*mesh, c)) <= 1e-10 * lap);
}

TEST_CASE("determinant functional vanishes on solved clamped states") {
  for (int n : {6, 12}) {
    KLState st = solve_uniform(n, 0.01);
    double lap = laplacian_energy(*st.mesh, st.coeff);
    CHECK(std::abs(gaussian_term(st)) <= 1e-6 * lap);
  }
}

TEST_CASE("determinant term never shifts the clamped minimizer") {
  int n = 10;
  auto mesh = std::make_shared<Mesh2D>(build_section_mesh(1.0, n, n));
  KLModuli mod = kl_moduli_from_lame(1.0, 1.0, 0.2);
  auto bbar = [](double, double) { return 0.004; };
  KLState with = solve_kl(mesh, mod, bbar);
  KLModuli stripped = mod;
  stripped.da = 0.0;
  stripped.dbar = 0.0;
  KLState without = solve_kl(mesh, stripped, bbar);
  double scale = 0.0;
  for (double v : with.coeff)
    scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < with.coeff.size(); ++i)
    CHECK(std::abs(with.coeff[i] - without.coeff[i]) <= 1e-10 * scale);
}

TEST_CASE("bending reconstruction carries the deflection and no midline stretch") {
  int n = 8;
  double ell = 1.0, h = 0.2;
  KLState st = solve_uniform(n, 0.01, 1.0, 1.0, ell, h);
  auto mesh3 = std::make_shared<Mesh3D>(build_plate_mesh(ell, h, n, n, 1));
  DisplacementField3D u = reconstruct_kl_3d(st, mesh3);

  double wmax = 0.0;
  for (int node = 0; node < st.mesh->node_count(); ++node)
    wmax = std::max(wmax, std::abs(st.coeff[node * 4]));
  REQUIRE(wmax > 0.0);

  auto avg = fiber_average(u);
  REQUIRE(avg.size() == static_cast<size_t>(st.mesh->node_count()));
  for (int node = 0; node < st.mesh->node_count(); ++node) {
    CHECK(std::abs(avg[node][0]) <= 1e-14 * wmax);
    CHECK(std::abs(avg[node][1]) <= 1e-14 * wmax);
    CHECK(avg[node][2] == doctest::Approx(st.coeff[node * 4]).epsilon(1e-13));
  }

  // in-plane components vanish on the midsurface and the transverse
  // component is constant along each fiber
  for (int cell : {0, n * n / 2, n * n - 1}) {
    for (double s : {0.25, 0.5, 0.75}) {
      auto d = displacement_at(u, cell, s, s, 0.5);
      CHECK(std::abs(d[0]) <= 1e-14 * wmax);
      CHECK(std::abs(d[1]) <= 1e-14 * wmax);
      auto top = displacement_at(u, cell, s, s, 1.0);
      CHECK(d[2] == doctest::Approx(top[2]).epsilon(1e-13));
    }
  }
}

TEST_CASE("bending reconstruction fits shearable kinematics exactly") {
  int n = 8;
  KLState st = solve_uniform(n, 0.01);
  auto mesh3 = std::make_shared<Mesh3D>(build_plate_mesh(1.0, 0.2, n, n, 1));
  DisplacementField3D u = reconstruct_kl_3d(st, mesh3);
  auto [rm, misfit] = fit_rm(u);
  CHECK(misfit <= 1e-13);
  CHECK(rm.nx == n);
  CHECK(rm.ny == n);
  double scale = 0.0;
  for (int node = 0; node < st.mesh->node_count(); ++node)
    scale = std::max({scale, std::abs(st.coeff[node * 4 + 1]),
                      std::abs(st.coeff[node * 4 + 2])});
  for (int node = 0; node < st.mesh->node_count(); ++node) {
    // director equals the negative deflection gradient, midline does not move
    CHECK(std::abs(rm.phi1[node] + st.coeff[node * 4 + 1]) <= 1e-12 * scale);
    CHECK(std::abs(rm.phi2[node] + st.coeff[node * 4 + 2]) <= 1e-12 * scale);
    CHECK(std::abs(rm.v1[node]) <= 1e-13 * scale);
    CHECK(std::abs(rm.v2[node]) <= 1e-13 * scale);
    CHECK(rm.w[node] == doctest::Approx(st.coeff[node * 4]).epsilon(1e-12));
    CHECK(std::abs(rm.node_misfit[node]) <= 1e-14 * scale);
  }
}

TEST_CASE("exact shearable members are recovered node for node") {
  for (int nz : {1, 2}) {
    auto mesh3 = std::make_shared<Mesh3D>(build_plate_mesh(1.0, 0.2, 5, 4, nz));
    int cols = (mesh3->nx + 1) * (mesh3->ny + 1);
    auto g = rng(61 + nz);
    std::vector<double> v1(cols), v2(cols), w(cols), p1(cols), p2(cols);
    for (int c = 0; c < cols; ++c) {
      v1[c] = uniform(g, -1, 1);
      v2[c] = uniform(g, -1, 1);
      w[c] = uniform(g, -1, 1);
      p1[c] = uniform(g, -1, 1);
      p2[c] = uniform(g, -1, 1);
    }
    DisplacementField3D u = make_rm_member(mesh3, v1, v2, w, p1, p2);
    auto [rm, misfit] = fit_rm(u);
    CHECK(misfit <= 1e-13);
    for (int c = 0; c < cols; ++c) {
      CHECK(rm.v1[c] == doctest::Approx(v1[c]).epsilon(1e-12));
      CHECK(rm.v2[c] == doctest::Approx(v2[c]).epsilon(1e-12));
      CHECK(rm.w[c] == doctest::Approx(w[c]).epsilon(1e-12));
      CHECK(rm.phi1[c] == doctest::Approx(p1[c]).epsilon(1e-12));
      CHECK(rm.phi2[c] == doctest::Approx(p2[c]).epsilon(1e-12));
      CHECK(std::abs(rm.node_misfit[c]) <= 1e-13);
    }
  }
}

TEST_CASE("quadratic thickness profiles leave a misfit proportional to their size") {
  auto mesh3 = std::make_shared<Mesh3D>(build_plate_mesh(1.0, 0.2, 4, 4, 1));
  int cols = (mesh3->nx + 1) * (mesh3->ny + 1);
  std::vector<double> v1(cols, 0.2), v2(cols, -0.1), w(cols, 0.5), p1(cols, 0.3),
      p2(cols, -0.4);
  double h = mesh3->half_thickness;
  auto perturbed = [&](double a) {
    DisplacementField3D u = make_rm_member(mesh3, v1, v2, w, p1, p2);
    for (int n = 0; n < mesh3->node_count(); ++n) {
      double x3 = mesh3->nodes[n][2];
      u.coeff[n * 6 + 0] += a * x3 * x3;
      u.coeff[n * 6 + 1] += 2.0 * a * x3;
    }
    (void)h;
    return u;
  };
  double m1 = fit_rm(perturbed(1e-3)).second;
  double m2 = fit_rm(perturbed(2e-3)).second;
  CHECK(m1 > 0.0);
  CHECK(m2 / m1 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("fitting a fitted state is a fixed point") {
  auto mesh3 = std::make_shared<Mesh3D>(build_plate_mesh(1.0, 0.2, 4, 4, 1));
  int cols = (mesh3->nx + 1) * (mesh3->ny + 1);
  std::vector<double> v1(cols, 0.2), v2(cols, -0.1), w(cols, 0.5), p1(cols, 0.3),
      p2(cols, -0.4);
  DisplacementField3D u = make_rm_member(mesh3, v1, v2, w, p1, p2);
  for (int n = 0; n < mesh3->node_count(); ++n) {
    double x3 = mesh3->nodes[n][2];
    u.coeff[n * 6 + 0] += 0.05 * x3 * x3;
    u.coeff[n * 6 + 1] += 0.10 * x3;
  }
  auto [rm, misfit] = fit_rm(u);
  REQUIRE(misfit > 1e-6); // genuinely outside the fitted space
  DisplacementField3D proj =
      make_rm_member(mesh3, rm.v1, rm.v2, rm.w, rm.phi1, rm.phi2);
  auto [rm2, misfit2] = fit_rm(proj);
  CHECK(misfit2 <= 1e-13);
  for (int c = 0; c < cols; ++c) {
    CHECK(rm2.v1[c] == doctest::Approx(rm.v1[c]).epsilon(1e-12));
    CHECK(rm2.phi1[c] == doctest::Approx(rm.phi1[c]).epsilon(1e-12));
    CHECK(rm2.w[c] == doctest::Approx(rm.w[c]).epsilon(1e-12));
  }
}

TEST_CASE("the zero field fits with zero misfit") {
  auto mesh3 = std::make_shared<Mesh3D>(build_plate_mesh(1.0, 0.2, 3, 3, 1));
  DisplacementField3D u;
  u.mesh = mesh3;
  u.epsilon = 0.2;
  u.coeff.assign(static_cast<size_t>(mesh3->node_count()) * kDofsPerNode3D, 0.0);
  auto [rm, misfit] = fit_rm(u);
  CHECK(misfit == 0.0);
  for (int c = 0; c < (mesh3->nx + 1) * (mesh3->ny + 1); ++c) {
    CHECK(rm.w[c] == 0.0);
    CHECK(rm.phi1[c] == 0.0);
    CHECK(rm.v1[c] == 0.0);
  }
}
