#include <doctest.h>

#include <cmath>
#include <random>

#include "linsolve.hpp"
#include "support/test_helpers.hpp"

#include <Eigen/Dense>

using namespace platelab;
using namespace platelab::testing;

namespace {

// Random SPD system with spread eigenvalues; returns (K, f).
std::pair<CsrMatrix, std::vector<double>> random_spd(int n, std::uint64_t seed,
                                                     double shift = 0.1) {
  auto g = rng(seed);
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      B(i, j) = uniform(g, -1.0, 1.0);
  Eigen::MatrixXd A = B.transpose() * B + shift * Eigen::MatrixXd::Identity(n, n);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      t.push_back({i, j, A(i, j)});
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i)
    f[i] = uniform(g, -1.0, 1.0);
  return {csr_from_triplets(n, std::move(t)), std::move(f)};
}

double residual(const CsrMatrix& K, const std::vector<double>& x,
                const std::vector<double>& f) {
  std::vector<double> r(K.n);
  K.multiply(x.data(), r.data());
  double num = 0.0, den = 0.0;
  for (int i = 0; i < K.n; ++i) {
    num += (r[i] - f[i]) * (r[i] - f[i]);
    den += f[i] * f[i];
  }
  return std::sqrt(num / den);
}

} // namespace

TEST_CASE("triplet assembly sums duplicates and sorts columns") {
  std::vector<Triplet> t = {
      {1, 2, 4.0}, {0, 0, 1.0}, {1, 0, 3.0}, {1, 2, -1.5}, {2, 1, 2.0},
  };
  CsrMatrix A = csr_from_triplets(3, t);
  CHECK(A.n == 3);
  REQUIRE(A.row_ptr == std::vector<int>({0, 1, 3, 4}));
  CHECK(A.col == std::vector<int>({0, 0, 2, 1}));
  CHECK(A.val[0] == 1.0);
  CHECK(A.val[1] == 3.0);
  CHECK(A.val[2] == 2.5); // duplicates accumulated
  CHECK(A.val[3] == 2.0);

  double x[3] = {1.0, 2.0, 3.0};
  double y[3];
  A.multiply(x, y);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == 3.0 + 7.5);
  CHECK(y[2] == 4.0);
}

TEST_CASE("assembly result is independent of triplet insertion order") {
  auto g = rng(31);
  std::vector<Triplet> t;
  for (int k = 0; k < 200; ++k)
    t.push_back({static_cast<int>(uniform(g, 0, 7.999)),
                 static_cast<int>(uniform(g, 0, 7.999)), uniform(g, -1, 1)});
  std::vector<Triplet> shuffled = t;
  std::shuffle(shuffled.begin(), shuffled.end(), g);
  CsrMatrix a = csr_from_triplets(8, t);
  CsrMatrix b = csr_from_triplets(8, shuffled);
  CHECK(a.col == b.col);
  CHECK(a.row_ptr == b.row_ptr);
  for (size_t i = 0; i < a.val.size(); ++i)
    CHECK(a.val[i] == doctest::Approx(b.val[i]).epsilon(1e-15));
}

TEST_CASE("direct path solves a dense SPD system to refinement accuracy") {
  auto [K, f] = random_spd(60, 32);
  std::vector<std::uint8_t> free_mask(60, 0);
  SolveOptions opts;
  opts.dense_threshold = 100; // force the direct path
  SolveStats st;
  std::vector<double> x = solve_spd(K, f, free_mask, opts, &st);
  CHECK(st.used_dense);
  CHECK(residual(K, x, f) <= 1e-12);
}

TEST_CASE("conjugate gradients matches the direct solution") {
  auto [K, f] = random_spd(80, 33);
  std::vector<std::uint8_t> mask(80, 0);
  SolveOptions direct;
  direct.dense_threshold = 1000;
  SolveOptions iterative;
  iterative.dense_threshold = 0; // force the CG path
  iterative.dense_rescue_max = 0;
  SolveStats sti;
  std::vector<double> xd = solve_spd(K, f, mask, direct);
  std::vector<double> xi = solve_spd(K, f, mask, iterative, &sti);
  CHECK(!sti.used_dense);
  CHECK(sti.iterations > 0);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 80; ++i) {
    num += (xd[i] - xi[i]) * (xd[i] - xi[i]);
    den += xd[i] * xd[i];
  }
  CHECK(std::sqrt(num / den) <= 1e-9);
}

TEST_CASE("constrained rows stay exactly zero and do not pollute the solve") {
  auto [K, f] = random_spd(40, 34);
  std::vector<std::uint8_t> mask(40, 0);
  for (int i = 0; i < 40; i += 3)
    mask[i] = 1;
  std::vector<double> x = solve_spd(K, f, mask);
  for (int i = 0; i < 40; i += 3)
    CHECK(x[i] == 0.0);
  // residual restricted to free rows
  std::vector<double> r(40);
  K.multiply(x.data(), r.data());
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 40; ++i) {
    if (mask[i])
      continue;
    num += (r[i] - f[i]) * (r[i] - f[i]);
    den += f[i] * f[i];
  }
  CHECK(std::sqrt(num) / std::sqrt(den) <= 1e-11);
}

TEST_CASE("iterative refinement rescues an ill-conditioned system") {
  // Hilbert-like matrix: condition number ~1e13 at n = 10.
  int n = 10;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      t.push_back({i, j, 1.0 / (1.0 + i + j)});
  CsrMatrix K = csr_from_triplets(n, std::move(t));
  std::vector<double> f(n, 1.0);
  std::vector<std::uint8_t> mask(n, 0);
  SolveOptions opts;
  opts.dense_threshold = 100;
  std::vector<double> x = solve_spd(K, f, mask, opts);
  CHECK(residual(K, x, f) <= 1e-10);
}

TEST_CASE("solver failure is reported, not silent") {
  auto [K, f] = random_spd(50, 35);
  std::vector<std::uint8_t> mask(50, 0);
  SolveOptions opts;
  opts.dense_threshold = 0;
  opts.dense_rescue_max = 0;    // no rescue
  opts.max_iter_factor = 1e-9;  // zero-iteration cap
  CHECK_THROWS_AS(solve_spd(K, f, mask, opts), SolverError);
}

TEST_CASE("zero right-hand side gives the zero solution") {
  auto [K, f] = random_spd(30, 36);
  (void)f;
  std::vector<double> zero(30, 0.0);
  std::vector<std::uint8_t> mask(30, 0);
  std::vector<double> x = solve_spd(K, zero, mask);
  for (double v : x)
    CHECK(v == 0.0);
}
