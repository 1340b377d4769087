#include "plate2d.hpp"

#include <cmath>
#include <stdexcept>

#include "quadrature.hpp"

namespace platelab {

namespace {

// 1D Hermite pair on a cell of size h, parameterized over [0,1].
struct Hermite1D {
  double v[4];  // value of (val0, der0, val1, der1) shapes
  double d[4];  // first derivative w.r.t. the physical coordinate
  double dd[4]; // second derivative
};

Hermite1D hermite(double h, double s) {
  double s2 = s * s, s3 = s2 * s;
  Hermite1D r;
  r.v[0] = 1.0 - 3.0 * s2 + 2.0 * s3;
  r.v[1] = h * (s - 2.0 * s2 + s3);
  r.v[2] = 3.0 * s2 - 2.0 * s3;
  r.v[3] = h * (-s2 + s3);
  r.d[0] = (-6.0 * s + 6.0 * s2) / h;
  r.d[1] = 1.0 - 4.0 * s + 3.0 * s2;
  r.d[2] = (6.0 * s - 6.0 * s2) / h;
  r.d[3] = -2.0 * s + 3.0 * s2;
  r.dd[0] = (-6.0 + 12.0 * s) / (h * h);
  r.dd[1] = (-4.0 + 6.0 * s) / h;
  r.dd[2] = (6.0 - 12.0 * s) / (h * h);
  r.dd[3] = (-2.0 + 6.0 * s) / h;
  return r;
}

// Second derivatives of the 16 element shapes at (s1, s2). Local dof
// = local_node*4 + {w, wx, wy, wxy}; local nodes x1-fastest.
struct BfsShapes {
  double S[16], S11[16], S22[16], S12[16];
};

void eval_bfs(double hx, double hy, double s1, double s2, BfsShapes& out) {
  Hermite1D X = hermite(hx, s1);
  Hermite1D Y = hermite(hy, s2);
  for (int j2 = 0; j2 < 2; ++j2)
    for (int i2 = 0; i2 < 2; ++i2) {
      int ln = j2 * 2 + i2;
      // per-dof 1D shape selection: (val,val), (der,val), (val,der), (der,der)
      int xi[4] = {2 * i2, 2 * i2 + 1, 2 * i2, 2 * i2 + 1};
      int yi[4] = {2 * j2, 2 * j2, 2 * j2 + 1, 2 * j2 + 1};
      for (int d = 0; d < 4; ++d) {
        int l = ln * 4 + d;
        out.S[l] = X.v[xi[d]] * Y.v[yi[d]];
        out.S11[l] = X.dd[xi[d]] * Y.v[yi[d]];
        out.S22[l] = X.v[xi[d]] * Y.dd[yi[d]];
        out.S12[l] = X.d[xi[d]] * Y.d[yi[d]];
      }
    }
}

struct QuadPoint2 {
  double s1, s2, w;
};

std::vector<QuadPoint2> quadrature_points2() {
  QuadratureRule1D g4 = gauss_legendre(4);
  std::vector<QuadPoint2> pts;
  pts.reserve(16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      pts.push_back({g4.points[a], g4.points[b], g4.weights[a] * g4.weights[b]});
  return pts;
}

} // namespace

KLState solve_kl(std::shared_ptr<const Mesh2D> mesh, const KLModuli& moduli,
                 const Load2D& bbar, const SolveOptions& opts) {
  if (!mesh)
    throw std::invalid_argument("solve_kl: null mesh");
  const Mesh2D& m = *mesh;
  double hx = m.hx(), hy = m.hy(), area = hx * hy;

  double Ke[16][16] = {};
  std::vector<QuadPoint2> qpts = quadrature_points2();
  BfsShapes shp;
  for (const QuadPoint2& q : qpts) {
    eval_bfs(hx, hy, q.s1, q.s2, shp);
    double wv = q.w * area;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        double lap = (shp.S11[i] + shp.S22[i]) * (shp.S11[j] + shp.S22[j]);
        double det = 0.5 * (shp.S11[i] * shp.S22[j] + shp.S22[i] * shp.S11[j]) -
                     shp.S12[i] * shp.S12[j];
        Ke[i][j] += wv * (moduli.Dbar * lap - moduli.dbar * det);
      }
  }

  int ndof = m.node_count() * kDofsPerNode2D;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(m.cell_count()) * 256);
  std::vector<double> f(ndof, 0.0);

  for (int cell = 0; cell < m.cell_count(); ++cell) {
    const auto& cn = m.cells[cell];
    int gdof[16];
    for (int ln = 0; ln < 4; ++ln)
      for (int d = 0; d < 4; ++d)
        gdof[ln * 4 + d] = cn[ln] * kDofsPerNode2D + d;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        triplets.push_back({gdof[i], gdof[j], Ke[i][j]});
    const auto& p0 = m.nodes[cn[0]];
    for (const QuadPoint2& q : qpts) {
      double b = bbar(p0[0] + hx * q.s1, p0[1] + hy * q.s2);
      if (b == 0.0)
        continue;
      eval_bfs(hx, hy, q.s1, q.s2, shp);
      for (int l = 0; l < 16; ++l)
        f[gdof[l]] += q.w * area * b * shp.S[l];
    }
  }

  std::vector<std::uint8_t> constrained(ndof, 0);
  for (int n = 0; n < m.node_count(); ++n)
    if (m.boundary[n])
      for (int d = 0; d < 4; ++d)
        constrained[n * kDofsPerNode2D + d] = 1;

  CsrMatrix K = csr_from_triplets(ndof, std::move(triplets));
  KLState st;
  st.mesh = std::move(mesh);
  st.moduli = moduli;
  st.coeff = solve_spd(K, f, constrained, opts);

  std::vector<double> r(ndof);
  K.multiply(st.coeff.data(), r.data());
  double rn = 0.0, fn = 0.0;
  for (int i = 0; i < ndof; ++i) {
    if (constrained[i])
      continue;
    double ri = r[i] - f[i];
    rn += ri * ri;
    fn += f[i] * f[i];
  }
  st.residual = fn > 0.0 ? std::sqrt(rn / fn) : std::sqrt(rn);
  return st;
}

namespace {

double curvature_integral(const Mesh2D& m, const std::vector<double>& coeff,
                          bool determinant) {
  double hx = m.hx(), hy = m.hy(), area = hx * hy;
  std::vector<QuadPoint2> qpts = quadrature_points2();
  BfsShapes shp;
  double acc = 0.0;
  for (int cell = 0; cell < m.cell_count(); ++cell) {
    const auto& cn = m.cells[cell];
    for (const QuadPoint2& q : qpts) {
      eval_bfs(hx, hy, q.s1, q.s2, shp);
      double w11 = 0.0, w22 = 0.0, w12 = 0.0;
      for (int ln = 0; ln < 4; ++ln)
        for (int d = 0; d < 4; ++d) {
          double c = coeff[cn[ln] * kDofsPerNode2D + d];
          int l = ln * 4 + d;
          w11 += c * shp.S11[l];
          w22 += c * shp.S22[l];
          w12 += c * shp.S12[l];
        }
      double val = determinant ? (w11 * w22 - w12 * w12)
                               : (w11 + w22) * (w11 + w22);
      acc += q.w * area * val;
    }
  }
  return acc;
}

} // namespace

double gaussian_term(const Mesh2D& mesh, const std::vector<double>& coeff) {
  return curvature_integral(mesh, coeff, true);
}

double gaussian_term(const KLState& state) {
  return curvature_integral(*state.mesh, state.coeff, true);
}

double laplacian_energy(const Mesh2D& mesh, const std::vector<double>& coeff) {
  return curvature_integral(mesh, coeff, false);
}

DisplacementField3D reconstruct_kl_3d(const KLState& state,
                                      std::shared_ptr<const Mesh3D> mesh) {
  const Mesh2D& m2 = *state.mesh;
  const Mesh3D& m3 = *mesh;
  if (m3.nx != m2.nx || m3.ny != m2.ny || m3.ell != m2.ell)
    throw std::invalid_argument(
        "reconstruct_kl_3d: 3D mesh does not share the section grid");

  DisplacementField3D u;
  u.epsilon = m3.half_thickness / m3.ell;
  u.coeff.assign(static_cast<size_t>(m3.node_count()) * kDofsPerNode3D, 0.0);
  for (int k = 0; k <= m3.nz; ++k)
    for (int j = 0; j <= m3.ny; ++j)
      for (int i = 0; i <= m3.nx; ++i) {
        int n3 = m3.node_index(i, j, k);
        int n2 = m2.node_index(i, j);
        double z = m3.nodes[n3][2];
        double w = state.coeff[n2 * kDofsPerNode2D + 0];
        double wx = state.coeff[n2 * kDofsPerNode2D + 1];
        double wy = state.coeff[n2 * kDofsPerNode2D + 2];
        double* c = &u.coeff[static_cast<size_t>(n3) * kDofsPerNode3D];
        c[0] = -z * wx;
        c[1] = -wx;
        c[2] = -z * wy;
        c[3] = -wy;
        c[4] = w;
        c[5] = 0.0;
      }
  u.mesh = std::move(mesh);
  return u;
}

std::pair<RMState, double> fit_rm(const DisplacementField3D& u) {
  const Mesh3D& m = *u.mesh;
  double t = m.half_thickness;
  double hz = m.hz();
  QuadratureRule1D g4 = gauss_legendre(4);

  RMState rm;
  rm.nx = m.nx;
  rm.ny = m.ny;
  rm.ell = m.ell;
  int nsec = (m.nx + 1) * (m.ny + 1);
  rm.w.assign(nsec, 0.0);
  rm.v1.assign(nsec, 0.0);
  rm.v2.assign(nsec, 0.0);
  rm.phi1.assign(nsec, 0.0);
  rm.phi2.assign(nsec, 0.0);
  rm.node_misfit.assign(nsec, 0.0);

  Mesh2D section = build_section_mesh(m.ell, m.nx, m.ny);
  std::vector<double> wt = section_node_weights(section);

  double len = 2.0 * t;
  double ix2 = 2.0 * t * t * t / 3.0; // Int x3^2 over (-t, t)
  double misfit_total = 0.0, norm_total = 0.0;

  for (int j = 0; j <= m.ny; ++j)
    for (int i = 0; i <= m.nx; ++i) {
      int nsec_idx = j * (m.nx + 1) + i;
      // quadrature sweep over the fiber; cb is invoked per component with
      // the interpolated value, the height, and the quadrature weight
      auto sweep = [&](auto&& cb) {
        for (int k = 0; k < m.nz; ++k) {
          int na = m.node_index(i, j, k);
          int nb = m.node_index(i, j, k + 1);
          double z0 = m.nodes[na][2];
          for (int q = 0; q < 4; ++q) {
            double s = g4.points[q];
            double s2 = s * s, s3 = s2 * s;
            double hv0 = 1.0 - 3.0 * s2 + 2.0 * s3;
            double hd0 = hz * (s - 2.0 * s2 + s3);
            double hv1 = 3.0 * s2 - 2.0 * s3;
            double hd1 = hz * (-s2 + s3);
            double z = z0 + hz * s;
            double wq = g4.weights[q] * hz;
            for (int comp = 0; comp < 3; ++comp) {
              const double* ca = &u.coeff[static_cast<size_t>(na) * kDofsPerNode3D + comp * 2];
              const double* cbp = &u.coeff[static_cast<size_t>(nb) * kDofsPerNode3D + comp * 2];
              double val = ca[0] * hv0 + ca[1] * hd0 + cbp[0] * hv1 + cbp[1] * hd1;
              cb(comp, val, z, wq);
            }
          }
        }
      };
      double I0[3] = {}, I1[3] = {}, I2[3] = {};
      sweep([&](int comp, double val, double z, double wq) {
        I0[comp] += wq * val;
        I1[comp] += wq * z * val;
        I2[comp] += wq * val * val;
      });
      double v1 = I0[0] / len, phi1 = I1[0] / ix2;
      double v2 = I0[1] / len, phi2 = I1[1] / ix2;
      double w = I0[2] / len;
      // Squared misfit of the projection onto {1, x3} (in-plane) and {1}
      // (transverse), integrated directly; exact members land at roundoff
      // instead of the cancellation floor of the moment identity.
      double fit0[3] = {v1, v2, w};
      double fit1[3] = {phi1, phi2, 0.0};
      double mis = 0.0;
      sweep([&](int comp, double val, double z, double wq) {
        double r = val - fit0[comp] - z * fit1[comp];
        mis += wq * r * r;
      });
      rm.v1[nsec_idx] = v1;
      rm.phi1[nsec_idx] = phi1;
      rm.v2[nsec_idx] = v2;
      rm.phi2[nsec_idx] = phi2;
      rm.w[nsec_idx] = w;
      rm.node_misfit[nsec_idx] = std::sqrt(mis);
      misfit_total += wt[nsec_idx] * mis;
      norm_total += wt[nsec_idx] * (I2[0] + I2[1] + I2[2]);
    }

  double residual =
      norm_total > 0.0 ? std::sqrt(misfit_total / norm_total) : 0.0;
  return {std::move(rm), residual};
}

} // namespace platelab
