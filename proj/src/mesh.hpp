#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace platelab {

// Structured hexahedral mesh of the plate-shaped box
// (-ell, ell)^2 x (-half_thickness, half_thickness).
// Nodes are ordered x1-fastest, then x2, then x3.
struct Mesh3D {
  double ell = 0.0;
  double half_thickness = 0.0;
  int nx = 0, ny = 0, nz = 0;
  std::vector<std::array<double, 3>> nodes;
  std::vector<std::array<int, 8>> cells; // local order: x1-fastest per level
  std::vector<std::uint8_t> lateral_dirichlet;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int cell_count() const { return static_cast<int>(cells.size()); }
  int node_index(int i, int j, int k) const {
    return (k * (ny + 1) + j) * (nx + 1) + i;
  }
  double hx() const { return 2.0 * ell / nx; }
  double hy() const { return 2.0 * ell / ny; }
  double hz() const { return 2.0 * half_thickness / nz; }
};

Mesh3D build_plate_mesh(double ell, double half_thickness, int nx, int ny, int nz);

// Structured quadrilateral mesh of the section (-ell, ell)^2.
struct Mesh2D {
  double ell = 0.0;
  int nx = 0, ny = 0;
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 4>> cells;
  std::vector<std::uint8_t> boundary;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int cell_count() const { return static_cast<int>(cells.size()); }
  int node_index(int i, int j) const { return j * (nx + 1) + i; }
  double hx() const { return 2.0 * ell / nx; }
  double hy() const { return 2.0 * ell / ny; }
};

Mesh2D build_section_mesh(double ell, int nx, int ny);

// Trapezoidal nodal weights for discrete L2 sums over the section grid;
// they add up to the section area.
std::vector<double> section_node_weights(const Mesh2D& mesh);

} // namespace platelab
