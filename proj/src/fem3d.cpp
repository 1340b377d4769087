#include "fem3d.hpp"

#include <cmath>
#include <stdexcept>

#include "quadrature.hpp"

namespace platelab {

namespace {

// Values and derivatives of the 16 scalar shape functions (8 nodes times
// {value, x3-derivative}) at local coordinates (s1, s2, s3) in [0,1]^3.
// Index = local_node*2 + dtype with local nodes x1-fastest per level.
struct ScalarShapes {
  double S[16];
  double S1[16];
  double S2[16];
  double S3[16];
  double S33[16];
};

void eval_scalar_shapes(double hx, double hy, double hz, double s1, double s2,
                        double s3, ScalarShapes& out) {
  double L1[2] = {1.0 - s1, s1};
  double L2[2] = {1.0 - s2, s2};
  double dL1[2] = {-1.0 / hx, 1.0 / hx};
  double dL2[2] = {-1.0 / hy, 1.0 / hy};

  double t = s3, t2 = t * t, t3 = t2 * t;
  // Hermite pair per thickness level; derivative-type functions carry the
  // cell size so that coefficients stay physical x3-derivatives.
  double Hv[2] = {1.0 - 3.0 * t2 + 2.0 * t3, 3.0 * t2 - 2.0 * t3};
  double Hd[2] = {hz * (t - 2.0 * t2 + t3), hz * (-t2 + t3)};
  double dHv[2] = {(-6.0 * t + 6.0 * t2) / hz, (6.0 * t - 6.0 * t2) / hz};
  double dHd[2] = {1.0 - 4.0 * t + 3.0 * t2, -2.0 * t + 3.0 * t2};
  double d2Hv[2] = {(-6.0 + 12.0 * t) / (hz * hz), (6.0 - 12.0 * t) / (hz * hz)};
  double d2Hd[2] = {(-4.0 + 6.0 * t) / hz, (-2.0 + 6.0 * t) / hz};

  for (int k2 = 0; k2 < 2; ++k2)
    for (int j2 = 0; j2 < 2; ++j2)
      for (int i2 = 0; i2 < 2; ++i2) {
        int ln = k2 * 4 + j2 * 2 + i2;
        double N = L1[i2] * L2[j2];
        double Nx = dL1[i2] * L2[j2];
        double Ny = L1[i2] * dL2[j2];
        for (int dt = 0; dt < 2; ++dt) {
          double P = dt ? Hd[k2] : Hv[k2];
          double Pz = dt ? dHd[k2] : dHv[k2];
          double Pzz = dt ? d2Hd[k2] : d2Hv[k2];
          int s = ln * 2 + dt;
          out.S[s] = N * P;
          out.S1[s] = Nx * P;
          out.S2[s] = Ny * P;
          out.S3[s] = N * Pz;
          out.S33[s] = N * Pzz;
        }
      }
}

// Rows of the generalized strain operator at one quadrature point. The shear
// rows may be evaluated at tied in-plane locations, hence three shape sets.
void build_strain_rows(const ScalarShapes& main, const ScalarShapes& tie13,
                       const ScalarShapes& tie23, double B[8][48]) {
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 48; ++c)
      B[r][c] = 0.0;
  for (int ln = 0; ln < 8; ++ln)
    for (int dt = 0; dt < 2; ++dt) {
      int s = ln * 2 + dt;
      int base = ln * kDofsPerNode3D + dt;
      int c0 = base;     // u1 dof
      int c1 = base + 2; // u2 dof
      int c2 = base + 4; // u3 dof
      B[0][c0] = main.S1[s];
      B[1][c1] = main.S2[s];
      B[2][c2] = main.S3[s];
      B[3][c1] = 0.5 * tie23.S3[s];
      B[3][c2] = 0.5 * tie23.S2[s];
      B[4][c0] = 0.5 * tie13.S3[s];
      B[4][c2] = 0.5 * tie13.S1[s];
      B[5][c0] = 0.5 * main.S2[s];
      B[5][c1] = 0.5 * main.S1[s];
      B[6][c0] = main.S33[s];
      B[7][c1] = main.S33[s];
    }
}

struct QuadPoint3 {
  double s1, s2, s3, w;
};

std::vector<QuadPoint3> quadrature_points() {
  QuadratureRule1D g2 = gauss_legendre(2);
  QuadratureRule1D g4 = gauss_legendre(4);
  std::vector<QuadPoint3> pts;
  pts.reserve(2 * 2 * 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 4; ++c)
        pts.push_back({g2.points[a], g2.points[b], g4.points[c],
                       g2.weights[a] * g2.weights[b] * g4.weights[c]});
  return pts;
}

} // namespace

std::array<double, 48 * 48> element_matrix(double hx, double hy, double hz,
                                           const std::array<double, 64>& A,
                                           ShearTreatment shear) {
  std::array<double, 48 * 48> Ke{};
  double vol = hx * hy * hz;
  ScalarShapes main, tie13, tie23;
  double B[8][48], AB[8][48];

  for (const QuadPoint3& q : quadrature_points()) {
    eval_scalar_shapes(hx, hy, hz, q.s1, q.s2, q.s3, main);
    switch (shear) {
    case ShearTreatment::assumed_midline:
      eval_scalar_shapes(hx, hy, hz, 0.5, q.s2, q.s3, tie13);
      eval_scalar_shapes(hx, hy, hz, q.s1, 0.5, q.s3, tie23);
      break;
    case ShearTreatment::reduced_center:
      eval_scalar_shapes(hx, hy, hz, 0.5, 0.5, q.s3, tie13);
      tie23 = tie13;
      break;
    case ShearTreatment::full:
      tie13 = main;
      tie23 = main;
      break;
    }
    build_strain_rows(main, tie13, tie23, B);

    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 48; ++c) {
        double s = 0.0;
        for (int m = 0; m < 8; ++m)
          s += A[8 * r + m] * B[m][c];
        AB[r][c] = s;
      }
    double wv = q.w * vol;
    for (int i = 0; i < 48; ++i)
      for (int j = i; j < 48; ++j) {
        double s = 0.0;
        for (int m = 0; m < 8; ++m)
          s += B[m][i] * AB[m][j];
        Ke[48 * i + j] += wv * s;
      }
  }
  // mirror; the solvers rely on exact symmetry of the operator
  for (int i = 0; i < 48; ++i)
    for (int j = 0; j < i; ++j)
      Ke[48 * i + j] = Ke[48 * j + i];
  return Ke;
}

SparseSystem assemble(std::shared_ptr<const Mesh3D> mesh, const ElasticityTensor& C,
                      const KappaEnergyParams& params, const LoadFn& load,
                      const AssembleOptions& opts) {
  if (!mesh)
    throw std::invalid_argument("assemble: null mesh");
  if (!C.isotropic_form && params.kappa != 0.0)
    throw std::invalid_argument("assemble: kappa > 0 requires an isotropic material");

  const Mesh3D& m = *mesh;
  std::array<double, 64> A = energy_coefficient_matrix(C, params);
  double hx = m.hx(), hy = m.hy(), hz = m.hz();
  double vol = hx * hy * hz;

  // All cells are congruent boxes with a homogeneous material, so a single
  // element matrix serves the whole mesh.
  std::array<double, 48 * 48> Ke = element_matrix(hx, hy, hz, A, opts.shear);

  int ndof = m.node_count() * kDofsPerNode3D;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(m.cell_count()) * 48 * 48);
  std::vector<double> f(ndof, 0.0);

  std::vector<QuadPoint3> qpts = quadrature_points();
  ScalarShapes shp;
  int gdof[48];

  for (int cell = 0; cell < m.cell_count(); ++cell) {
    const auto& cn = m.cells[cell];
    for (int ln = 0; ln < 8; ++ln)
      for (int d = 0; d < kDofsPerNode3D; ++d)
        gdof[ln * kDofsPerNode3D + d] = cn[ln] * kDofsPerNode3D + d;

    for (int i = 0; i < 48; ++i)
      for (int j = 0; j < 48; ++j)
        triplets.push_back({gdof[i], gdof[j], Ke[48 * i + j]});

    const auto& p0 = m.nodes[cn[0]];
    for (const QuadPoint3& q : qpts) {
      double x = p0[0] + hx * q.s1;
      double y = p0[1] + hy * q.s2;
      double z = p0[2] + hz * q.s3;
      std::array<double, 3> b = load(x, y, z);
      if (b[0] == 0.0 && b[1] == 0.0 && b[2] == 0.0)
        continue;
      eval_scalar_shapes(hx, hy, hz, q.s1, q.s2, q.s3, shp);
      double wv = q.w * vol;
      for (int ln = 0; ln < 8; ++ln)
        for (int dt = 0; dt < 2; ++dt) {
          double sv = shp.S[ln * 2 + dt];
          for (int comp = 0; comp < 3; ++comp)
            f[gdof[ln * kDofsPerNode3D + comp * 2 + dt]] += wv * b[comp] * sv;
        }
    }
  }

  SparseSystem sys;
  sys.mesh = std::move(mesh);
  sys.epsilon = params.epsilon;
  sys.K = csr_from_triplets(ndof, std::move(triplets));
  sys.f = std::move(f);
  sys.constrained.assign(ndof, 0);
  if (opts.apply_dirichlet)
    for (int n = 0; n < m.node_count(); ++n)
      if (m.lateral_dirichlet[n])
        for (int d = 0; d < kDofsPerNode3D; ++d)
          sys.constrained[n * kDofsPerNode3D + d] = 1;
  return sys;
}

DisplacementField3D solve(const SparseSystem& sys, const SolveOptions& opts,
                          SolveStats* stats) {
  DisplacementField3D u;
  u.mesh = sys.mesh;
  u.epsilon = sys.epsilon;
  u.coeff = solve_spd(sys.K, sys.f, sys.constrained, opts, stats);
  return u;
}

double stationarity_residual(const SparseSystem& sys, const DisplacementField3D& u) {
  int n = sys.K.n;
  std::vector<double> r;
  residual_compensated(sys.K, sys.f, u.coeff, r);
  double rn = 0.0, fn = 0.0;
  for (int i = 0; i < n; ++i) {
    if (sys.constrained[i])
      continue;
    rn += r[i] * r[i];
    fn += sys.f[i] * sys.f[i];
  }
  return fn > 0.0 ? std::sqrt(rn / fn) : std::sqrt(rn);
}

double total_energy(const SparseSystem& sys, const DisplacementField3D& u) {
  int n = sys.K.n;
  std::vector<double> Ku(n);
  sys.K.multiply(u.coeff.data(), Ku.data());
  double e = 0.0;
  for (int i = 0; i < n; ++i)
    e += 0.5 * u.coeff[i] * Ku[i] - sys.f[i] * u.coeff[i];
  return e;
}

namespace {

void gather_cell_coeffs(const DisplacementField3D& u, int cell, double* local) {
  const auto& cn = u.mesh->cells[cell];
  for (int ln = 0; ln < 8; ++ln)
    for (int d = 0; d < kDofsPerNode3D; ++d)
      local[ln * kDofsPerNode3D + d] = u.coeff[cn[ln] * kDofsPerNode3D + d];
}

} // namespace

std::array<double, 3> displacement_at(const DisplacementField3D& u, int cell,
                                      double s1, double s2, double s3) {
  const Mesh3D& m = *u.mesh;
  ScalarShapes shp;
  eval_scalar_shapes(m.hx(), m.hy(), m.hz(), s1, s2, s3, shp);
  double local[48];
  gather_cell_coeffs(u, cell, local);
  std::array<double, 3> val{};
  for (int ln = 0; ln < 8; ++ln)
    for (int dt = 0; dt < 2; ++dt) {
      double sv = shp.S[ln * 2 + dt];
      for (int comp = 0; comp < 3; ++comp)
        val[comp] += sv * local[ln * kDofsPerNode3D + comp * 2 + dt];
    }
  return val;
}

std::array<double, 8> generalized_strain_at(const DisplacementField3D& u, int cell,
                                            double s1, double s2, double s3,
                                            ShearTreatment shear) {
  const Mesh3D& m = *u.mesh;
  double hx = m.hx(), hy = m.hy(), hz = m.hz();
  ScalarShapes main, tie13, tie23;
  eval_scalar_shapes(hx, hy, hz, s1, s2, s3, main);
  switch (shear) {
  case ShearTreatment::assumed_midline:
    eval_scalar_shapes(hx, hy, hz, 0.5, s2, s3, tie13);
    eval_scalar_shapes(hx, hy, hz, s1, 0.5, s3, tie23);
    break;
  case ShearTreatment::reduced_center:
    eval_scalar_shapes(hx, hy, hz, 0.5, 0.5, s3, tie13);
    tie23 = tie13;
    break;
  case ShearTreatment::full:
    tie13 = main;
    tie23 = main;
    break;
  }
  double B[8][48];
  build_strain_rows(main, tie13, tie23, B);
  double local[48];
  gather_cell_coeffs(u, cell, local);
  std::array<double, 8> xi{};
  for (int r = 0; r < 8; ++r) {
    double s = 0.0;
    for (int c = 0; c < 48; ++c)
      s += B[r][c] * local[c];
    xi[r] = s;
  }
  return xi;
}

double transverse_shear_norm(const DisplacementField3D& u, ShearTreatment shear) {
  const Mesh3D& m = *u.mesh;
  double vol = m.hx() * m.hy() * m.hz();
  double acc = 0.0;
  for (int cell = 0; cell < m.cell_count(); ++cell)
    for (const QuadPoint3& q : quadrature_points()) {
      std::array<double, 8> xi =
          generalized_strain_at(u, cell, q.s1, q.s2, q.s3, shear);
      acc += q.w * vol * (xi[3] * xi[3] + xi[4] * xi[4]);
    }
  return std::sqrt(acc / (2.0 * m.half_thickness));
}

double field_l2_norm(const DisplacementField3D& u) {
  const Mesh3D& m = *u.mesh;
  double vol = m.hx() * m.hy() * m.hz();
  double acc = 0.0;
  for (int cell = 0; cell < m.cell_count(); ++cell)
    for (const QuadPoint3& q : quadrature_points()) {
      std::array<double, 3> v = displacement_at(u, cell, q.s1, q.s2, q.s3);
      acc += q.w * vol * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    }
  return std::sqrt(acc / (2.0 * m.half_thickness));
}

} // namespace platelab
