#include "mesh.hpp"

#include <stdexcept>

namespace platelab {

namespace {

void check_counts(int nx, int ny, int nz) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw std::invalid_argument("mesh: cell counts must be >= 1");
}

} // namespace

Mesh3D build_plate_mesh(double ell, double half_thickness, int nx, int ny, int nz) {
  if (!(ell > 0.0) || !(half_thickness > 0.0))
    throw std::invalid_argument("build_plate_mesh: dimensions must be > 0");
  check_counts(nx, ny, nz);

  Mesh3D m;
  m.ell = ell;
  m.half_thickness = half_thickness;
  m.nx = nx;
  m.ny = ny;
  m.nz = nz;
  m.nodes.reserve(static_cast<size_t>(nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k) {
    // Node coordinates are affine in the index so that opposite boundary
    // nodes land exactly on +/(-) the box dimensions.
    double z = half_thickness * (2.0 * k - nz) / nz;
    for (int j = 0; j <= ny; ++j) {
      double y = ell * (2.0 * j - ny) / ny;
      for (int i = 0; i <= nx; ++i) {
        double x = ell * (2.0 * i - nx) / nx;
        m.nodes.push_back({x, y, z});
      }
    }
  }

  m.cells.reserve(static_cast<size_t>(nx) * ny * nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::array<int, 8> c;
        int l = 0;
        for (int dk = 0; dk <= 1; ++dk)
          for (int dj = 0; dj <= 1; ++dj)
            for (int di = 0; di <= 1; ++di)
              c[l++] = m.node_index(i + di, j + dj, k + dk);
        m.cells.push_back(c);
      }

  m.lateral_dirichlet.assign(m.nodes.size(), 0);
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        if (i == 0 || i == nx || j == 0 || j == ny)
          m.lateral_dirichlet[m.node_index(i, j, k)] = 1;
  return m;
}

Mesh2D build_section_mesh(double ell, int nx, int ny) {
  if (!(ell > 0.0))
    throw std::invalid_argument("build_section_mesh: ell must be > 0");
  check_counts(nx, ny, 1);

  Mesh2D m;
  m.ell = ell;
  m.nx = nx;
  m.ny = ny;
  m.nodes.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    double y = ell * (2.0 * j - ny) / ny;
    for (int i = 0; i <= nx; ++i) {
      double x = ell * (2.0 * i - nx) / nx;
      m.nodes.push_back({x, y});
    }
  }
  m.cells.reserve(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      m.cells.push_back({m.node_index(i, j), m.node_index(i + 1, j),
                         m.node_index(i, j + 1), m.node_index(i + 1, j + 1)});

  m.boundary.assign(m.nodes.size(), 0);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      if (i == 0 || i == nx || j == 0 || j == ny)
        m.boundary[m.node_index(i, j)] = 1;
  return m;
}

std::vector<double> section_node_weights(const Mesh2D& mesh) {
  std::vector<double> w(mesh.nodes.size(), 0.0);
  double cell = 0.25 * mesh.hx() * mesh.hy();
  for (const auto& c : mesh.cells)
    for (int n : c)
      w[n] += cell;
  return w;
}

} // namespace platelab
