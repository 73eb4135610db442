#include "mrt/linalg.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <random>
#include <cstdlib>
#include <string>

#include <unistd.h>

#include "mrt/errors.hpp"

namespace mrt::linalg {

namespace {

using lapack_size = lapack_int;

lapack_size to_lapack(std::size_t n) { return static_cast<lapack_size>(n); }

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw ConvergenceError(std::string(routine) + " failed with info = " +
                           std::to_string(info));
  }
}

// Replace the n x p block by an orthonormal basis of its column span.
void orthonormalize(std::vector<double>& v, std::size_t n, std::size_t p) {
  std::vector<double> tau(p);
  check_info(LAPACKE_dgeqrf(LAPACK_COL_MAJOR, to_lapack(n), to_lapack(p),
                            v.data(), to_lapack(n), tau.data()),
             "dgeqrf");
  check_info(LAPACKE_dorgqr(LAPACK_COL_MAJOR, to_lapack(n), to_lapack(p),
                            to_lapack(p), v.data(), to_lapack(n), tau.data()),
             "dorgqr");
}

}  // namespace

void use_single_threaded_blas() { openblas_set_num_threads(1); }

double blas_self_check() {
  constexpr int n = 256;
  std::vector<double> a(n * n);
  std::vector<double> b(n * n);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& x : a) x = u(rng);
  for (auto& x : b) x = u(rng);
  std::vector<double> c(n * n, 0.0);
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0,
              a.data(), n, b.data(), n, 0.0, c.data(), n);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a[k * n + i] * b[j * n + k];
      worst = std::max(worst, std::fabs(s - c[j * n + i]));
    }
  }
  return worst;
}

void ensure_reliable_blas(char** argv) {
  use_single_threaded_blas();
  constexpr double kTolerance = 1e-10;
  if (blas_self_check() <= kTolerance) return;
  // The kernel is picked when the library loads, so the only remedy is a
  // fresh process with the core type pinned.
  if (argv != nullptr && std::getenv("OPENBLAS_CORETYPE") == nullptr) {
    setenv("OPENBLAS_CORETYPE", "Haswell", 1);
    execv("/proc/self/exe", argv);
  }
  throw Error(std::string("BLAS self-check failed for OpenBLAS core ") +
              openblas_get_corename() + "; set OPENBLAS_CORETYPE to a working core");
}

std::string blas_core_name() { return openblas_get_corename(); }

TridiagonalEigen::TridiagonalEigen(SymmetricMatrix a)
    : reflectors_(std::move(a)) {
  const std::size_t n = reflectors_.size();
  if (n == 0) throw std::invalid_argument("empty matrix");
  diag_.resize(n);
  offdiag_.assign(n, 0.0);
  tau_.assign(std::max<std::size_t>(n, 2) - 1, 0.0);
  check_info(LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', to_lapack(n),
                            reflectors_.data(), to_lapack(n), diag_.data(),
                            offdiag_.data(), tau_.data()),
             "dsytrd");
}

std::size_t TridiagonalEigen::count_below(double x) const {
  const std::size_t n = diag_.size();
  double emax = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    emax = std::max(emax, offdiag_[i] * offdiag_[i]);
  }
  const double pivmin = DBL_MIN * std::max(1.0, emax);
  std::size_t count = 0;
  double q = diag_[0] - x;
  if (std::fabs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    q = diag_[i] - x - offdiag_[i - 1] * offdiag_[i - 1] / q;
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

EigenBlock TridiagonalEigen::solve(std::size_t first, std::size_t last,
                                   bool vectors) const {
  const std::size_t n = diag_.size();
  if (first > last || last >= n) {
    throw std::out_of_range("eigen index window out of range");
  }
  const std::size_t want = last - first + 1;
  std::vector<double> d = diag_;
  std::vector<double> e = offdiag_;
  std::vector<double> w(n);
  std::vector<double> z(vectors ? n * want : 1);
  std::vector<lapack_int> isuppz(2 * want);
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  check_info(LAPACKE_dstemr(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'I',
                            to_lapack(n), d.data(), e.data(), 0.0, 0.0,
                            to_lapack(first + 1), to_lapack(last + 1), &found,
                            w.data(), z.data(), to_lapack(vectors ? n : 1),
                            to_lapack(want), isuppz.data(), &tryrac),
             "dstemr");
  if (static_cast<std::size_t>(found) != want) {
    throw ConvergenceError("dstemr returned " + std::to_string(found) +
                           " eigenvalues, expected " + std::to_string(want));
  }
  EigenBlock block;
  block.first_index = first;
  block.values.assign(w.begin(), w.begin() + found);
  if (vectors) {
    check_info(LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', 'N', to_lapack(n),
                              found, reflectors_.data(), to_lapack(n),
                              tau_.data(), z.data(), to_lapack(n)),
               "dormtr");
    block.vectors = std::move(z);
  }
  return block;
}

NearestEigen nearest_eigenpairs(const SymmetricMatrix& a, double sigma,
                                std::size_t block, std::size_t want,
                                std::span<const double> warm_start, double tol,
                                int max_iterations) {
  const std::size_t n = a.size();
  const std::size_t p = std::min(block, n);
  want = std::min(want, p);
  const lapack_int ln = to_lapack(n);
  const lapack_int lp = to_lapack(p);

  std::vector<double> lu(a.data(), a.data() + n * n);
  std::vector<lapack_int> ipiv(n);
  for (int attempt = 0;; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) lu[i * n + i] = a(i, i) - sigma;
    const lapack_int info =
        LAPACKE_dgetrf(LAPACK_COL_MAJOR, ln, ln, lu.data(), ln, ipiv.data());
    if (info < 0) check_info(info, "dgetrf");
    if (info == 0) break;
    // Shift landed exactly on an eigenvalue; nudge it.
    if (attempt > 4) check_info(info, "dgetrf");
    sigma += 1e-13 * (1.0 + std::fabs(sigma));
    std::copy(a.data(), a.data() + n * n, lu.begin());
  }

  std::vector<double> v(n * p);
  const std::size_t warm_cols = std::min(p, warm_start.size() / n);
  std::copy(warm_start.begin(), warm_start.begin() + warm_cols * n, v.begin());
  for (std::size_t c = warm_cols; c < p; ++c) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + c);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < n; ++i) v[c * n + i] = normal(rng);
  }
  orthonormalize(v, n, p);

  std::vector<double> av(n * p);
  std::vector<double> g(p * p);
  std::vector<double> theta(p);
  std::vector<double> tmp(n * p);
  NearestEigen out;
  out.residuals.assign(p, 0.0);
  for (int it = 1; it <= max_iterations; ++it) {
    check_info(LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', ln, lp, lu.data(), ln,
                              ipiv.data(), v.data(), ln),
               "dgetrs");
    orthonormalize(v, n, p);
    cblas_dsymm(CblasColMajor, CblasLeft, CblasLower, ln, lp, 1.0, a.data(),
                ln, v.data(), ln, 0.0, av.data(), ln);
    cblas_dgemm(CblasColMajor, CblasTrans, CblasNoTrans, lp, lp, ln, 1.0,
                v.data(), ln, av.data(), ln, 0.0, g.data(), lp);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        const double s = 0.5 * (g[j * p + i] + g[i * p + j]);
        g[j * p + i] = s;
        g[i * p + j] = s;
      }
    }
    check_info(LAPACKE_dsyev(LAPACK_COL_MAJOR, 'V', 'L', lp, g.data(), lp,
                             theta.data()),
               "dsyev");
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, ln, lp, lp, 1.0,
                v.data(), ln, g.data(), lp, 0.0, tmp.data(), ln);
    v.swap(tmp);
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, ln, lp, lp, 1.0,
                av.data(), ln, g.data(), lp, 0.0, tmp.data(), ln);
    av.swap(tmp);
    for (std::size_t c = 0; c < p; ++c) {
      double r2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = av[c * n + i] - theta[c] * v[c * n + i];
        r2 += r * r;
      }
      out.residuals[c] = std::sqrt(r2);
    }
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return std::fabs(theta[x] - sigma) < std::fabs(theta[y] - sigma);
    });
    double worst = 0.0;
    for (std::size_t k = 0; k < want; ++k) {
      worst = std::max(worst, out.residuals[order[k]]);
    }
    out.iterations = it;
    if (worst < tol) {
      out.values = theta;
      out.vectors = v;
      return out;
    }
  }
  throw ConvergenceError("shift-invert iteration did not converge near sigma = " +
                         std::to_string(sigma));
}

}  // namespace mrt::linalg
