#include "linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace platelab {

void CsrMatrix::multiply(const double* x, double* y) const {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
      s += val[p] * x[col[p]];
    y[i] = s;
  }
}

void residual_compensated(const CsrMatrix& A, const std::vector<double>& b,
                          const std::vector<double>& x, std::vector<double>& r) {
  r.resize(A.n);
  for (int i = 0; i < A.n; ++i) {
    // Dot2-style accumulation: fma recovers each product's rounding error,
    // two-sum tracks the running error, so the row result is accurate even
    // when stiff penalty entries cancel almost completely.
    double s = b[i], comp = 0.0;
    for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) {
      double prod = -A.val[p] * x[A.col[p]];
      double perr = std::fma(-A.val[p], x[A.col[p]], -prod);
      double t = s + prod;
      double z = t - s;
      comp += (s - (t - z)) + (prod - z) + perr;
      s = t;
    }
    r[i] = s + comp;
  }
}

CsrMatrix csr_from_triplets(int n, std::vector<Triplet> t) {
  // stable: duplicates are summed in insertion order, so a symmetric
  // stream of element contributions yields a bitwise-symmetric matrix
  std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  for (size_t i = 0; i < t.size();) {
    size_t j = i;
    double s = 0.0;
    while (j < t.size() && t[j].row == t[i].row && t[j].col == t[i].col)
      s += t[j++].value;
    m.col.push_back(t[i].col);
    m.val.push_back(s);
    ++m.row_ptr[t[i].row + 1];
    i = j;
  }
  for (int i = 0; i < n; ++i)
    m.row_ptr[i + 1] += m.row_ptr[i];
  return m;
}

namespace {

// Restriction of K to the free index set, again in CSR form.
CsrMatrix restrict_free(const CsrMatrix& K, const std::vector<int>& full_to_free,
                        const std::vector<int>& free_to_full) {
  CsrMatrix m;
  m.n = static_cast<int>(free_to_full.size());
  m.row_ptr.assign(m.n + 1, 0);
  for (int r = 0; r < m.n; ++r) {
    int i = free_to_full[r];
    for (int p = K.row_ptr[i]; p < K.row_ptr[i + 1]; ++p) {
      int c = full_to_free[K.col[p]];
      if (c >= 0) {
        m.col.push_back(c);
        m.val.push_back(K.val[p]);
      }
    }
    m.row_ptr[r + 1] = static_cast<int>(m.col.size());
  }
  return m;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return std::sqrt(s);
}

// Dense LDLT without pivoting (valid for SPD input), followed by two rounds
// of iterative refinement against the sparse residual.
bool dense_solve(const CsrMatrix& A, const std::vector<double>& b,
                 std::vector<double>& x) {
  int n = A.n;
  std::vector<double> M(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
      M[static_cast<size_t>(i) * n + A.col[p]] = A.val[p];

  std::vector<double> d(n);
  for (int k = 0; k < n; ++k) {
    double dk = M[static_cast<size_t>(k) * n + k];
    for (int m = 0; m < k; ++m) {
      double l = M[static_cast<size_t>(k) * n + m];
      dk -= l * l * d[m];
    }
    if (!(dk > 0.0))
      return false;
    d[k] = dk;
    for (int i = k + 1; i < n; ++i) {
      double s = M[static_cast<size_t>(i) * n + k];
      const double* Li = &M[static_cast<size_t>(i) * n];
      const double* Lk = &M[static_cast<size_t>(k) * n];
      for (int m = 0; m < k; ++m)
        s -= Li[m] * Lk[m] * d[m];
      M[static_cast<size_t>(i) * n + k] = s / dk;
    }
  }

  auto backsolve = [&](std::vector<double>& rhs) {
    for (int i = 0; i < n; ++i) {
      double s = rhs[i];
      const double* Li = &M[static_cast<size_t>(i) * n];
      for (int m = 0; m < i; ++m)
        s -= Li[m] * rhs[m];
      rhs[i] = s;
    }
    for (int i = 0; i < n; ++i)
      rhs[i] /= d[i];
    for (int i = n - 1; i >= 0; --i) {
      double s = rhs[i];
      for (int m = i + 1; m < n; ++m)
        s -= M[static_cast<size_t>(m) * n + i] * rhs[m];
      rhs[i] = s;
    }
  };

  x = b;
  backsolve(x);
  // Refine until the true residual stops improving; the factorization alone
  // can land orders of magnitude above roundoff on thin-plate conditioning.
  // The residual is evaluated compensated, otherwise its own rounding noise
  // stalls the iteration well short of what the coefficients can represent.
  double bn = norm2(b);
  if (bn == 0.0)
    bn = 1.0;
  std::vector<double> r(n), corr(n), best;
  double best_res = std::numeric_limits<double>::infinity();
  double prev_res = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 12; ++round) {
    residual_compensated(A, b, x, r);
    double res = norm2(r) / bn;
    if (res < best_res) {
      best_res = res;
      best = x;
    }
    if (res <= 1e-14 || res >= 0.9 * prev_res)
      break;
    prev_res = res;
    corr = r;
    backsolve(corr);
    for (int i = 0; i < n; ++i)
      x[i] += corr[i];
  }
  x = best;
  return true;
}

// Jacobi-preconditioned conjugate gradients. Returns true when the true
// relative residual reaches tol within the iteration budget.
bool pcg(const CsrMatrix& A, const std::vector<double>& b, std::vector<double>& x,
         double tol, int max_iter, int* iters_out, double* res_out) {
  int n = A.n;
  std::vector<double> diag(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
      if (A.col[p] == i && A.val[p] > 0.0)
        diag[i] = A.val[p];

  double bnorm = norm2(b);
  x.assign(n, 0.0);
  if (bnorm == 0.0) {
    if (iters_out) *iters_out = 0;
    if (res_out) *res_out = 0.0;
    return true;
  }

  std::vector<double> r = b, z(n), p(n), Ap(n);
  for (int i = 0; i < n; ++i)
    z[i] = r[i] / diag[i];
  p = z;
  double rz = 0.0;
  for (int i = 0; i < n; ++i)
    rz += r[i] * z[i];

  int it = 0;
  double rel = 1.0;
  while (it < max_iter) {
    A.multiply(p.data(), Ap.data());
    double pAp = 0.0;
    for (int i = 0; i < n; ++i)
      pAp += p[i] * Ap[i];
    if (!(pAp > 0.0))
      break; // loss of positive definiteness in finite precision
    double alpha = rz / pAp;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    ++it;
    double rnorm = norm2(r);
    if (rnorm <= tol * bnorm) {
      // The recurrence residual can drift; accept only the true residual.
      A.multiply(x.data(), Ap.data());
      for (int i = 0; i < n; ++i)
        Ap[i] = b[i] - Ap[i];
      double truenorm = norm2(Ap);
      rel = truenorm / bnorm;
      if (rel <= tol) {
        if (iters_out) *iters_out = it;
        if (res_out) *res_out = rel;
        return true;
      }
      r = Ap;
    }
    double rznew = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = r[i] / diag[i];
      rznew += r[i] * z[i];
    }
    double beta = rznew / rz;
    rz = rznew;
    for (int i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  if (iters_out) *iters_out = it;
  if (res_out) *res_out = rel;
  return false;
}

} // namespace

std::vector<double> solve_spd(const CsrMatrix& K, const std::vector<double>& f,
                              const std::vector<std::uint8_t>& constrained,
                              const SolveOptions& opts, SolveStats* stats) {
  int n = K.n;
  std::vector<int> full_to_free(n, -1), free_to_full;
  for (int i = 0; i < n; ++i)
    if (!constrained[i]) {
      full_to_free[i] = static_cast<int>(free_to_full.size());
      free_to_full.push_back(i);
    }
  int nf = static_cast<int>(free_to_full.size());

  CsrMatrix A = restrict_free(K, full_to_free, free_to_full);
  std::vector<double> b(nf);
  for (int r = 0; r < nf; ++r)
    b[r] = f[free_to_full[r]];

  std::vector<double> xf;
  SolveStats local;
  bool ok = false;
  if (nf < opts.dense_threshold) {
    ok = dense_solve(A, b, xf);
    local.used_dense = true;
  } else {
    int max_iter =
        static_cast<int>(opts.max_iter_factor * std::sqrt(static_cast<double>(nf)));
    ok = pcg(A, b, xf, opts.tol, max_iter, &local.iterations, &local.residual);
    if (!ok && nf <= opts.dense_rescue_max) {
      ok = dense_solve(A, b, xf);
      local.used_dense = true;
    }
  }
  if (ok) {
    std::vector<double> r;
    residual_compensated(A, b, xf, r);
    double bn = norm2(b);
    local.residual = bn > 0.0 ? norm2(r) / bn : 0.0;
  }
  if (stats)
    *stats = local;
  if (!ok)
    throw SolverError("solve_spd: no solver path converged");

  std::vector<double> x(n, 0.0);
  for (int r = 0; r < nf; ++r)
    x[free_to_full[r]] = xf[r];
  return x;
}

} // namespace platelab
