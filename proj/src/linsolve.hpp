#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace platelab {

struct Triplet {
  int row;
  int col;
  double value;
};

// Compressed sparse row storage of a symmetric matrix (both triangles kept).
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  void multiply(const double* x, double* y) const;
};

// Duplicate triplets are accumulated; entries are sorted per row, so the
// result does not depend on insertion order beyond the usual float addition
// order, which is made deterministic by sorting.
CsrMatrix csr_from_triplets(int n, std::vector<Triplet> triplets);

// r = b - A x with compensated products and sums; accurate under the heavy
// cancellation of penalty-dominated rows, where a plain matvec returns
// mostly rounding noise.
void residual_compensated(const CsrMatrix& A, const std::vector<double>& b,
                          const std::vector<double>& x, std::vector<double>& r);

struct SolveOptions {
  double tol = 1e-12;            // relative residual target
  double max_iter_factor = 50.0; // iteration cap = factor * sqrt(free dofs)
  int dense_threshold = 2000;    // direct solve below this many free dofs
  int dense_rescue_max = 9000;   // dense retry limit when PCG stalls
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
  bool used_dense = false;
};

class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Solves K x = f for an SPD matrix restricted to the rows/columns where
// constrained == 0; constrained entries of the result are exactly zero.
// Diagonally preconditioned CG with a dense LDLT fallback for small or
// stubborn systems. Throws SolverError when no path converges.
std::vector<double> solve_spd(const CsrMatrix& K, const std::vector<double>& f,
                              const std::vector<std::uint8_t>& constrained,
                              const SolveOptions& opts = {},
                              SolveStats* stats = nullptr);

} // namespace platelab
