#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mrt::linalg {

/// Dense symmetric matrix, full column-major storage.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[j * n_ + i];
  }
  double& operator()(std::size_t i, std::size_t j) { return data_[j * n_ + i]; }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    data_[j * n_ + i] = v;
    data_[i * n_ + j] = v;
  }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Eigenpairs for a contiguous block of the ascending spectrum.
struct EigenBlock {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // n x values.size(), column-major; may be empty
  std::size_t first_index = 0;  // index of values[0] in the full spectrum
};

/// Householder tridiagonalization kept around so that several index windows
/// and Sturm counts can be taken from one O(n^3) reduction.
class TridiagonalEigen {
 public:
  explicit TridiagonalEigen(SymmetricMatrix a);

  std::size_t size() const { return diag_.size(); }
  /// Number of eigenvalues strictly below x (Sturm sequence).
  std::size_t count_below(double x) const;
  /// Eigenpairs first..last (0-based, inclusive).
  EigenBlock solve(std::size_t first, std::size_t last, bool vectors) const;

 private:
  SymmetricMatrix reflectors_;
  std::vector<double> diag_;
  std::vector<double> offdiag_;
  std::vector<double> tau_;
};

struct NearestEigen {
  std::vector<double> values;     // Ritz values, ascending
  std::vector<double> vectors;    // n x values.size(), column-major
  std::vector<double> residuals;  // ||A v - theta v||
  int iterations = 0;
};

/// Shift-invert block iteration with Rayleigh-Ritz: the `block` eigenpairs of
/// `a` closest to sigma. Iterates until the `want` Ritz values nearest sigma
/// have residual below tol. A warm start (n x k column-major, k <= block)
/// seeds the leading columns; the rest are fixed pseudo-random vectors.
NearestEigen nearest_eigenpairs(const SymmetricMatrix& a, double sigma,
                                std::size_t block, std::size_t want,
                                std::span<const double> warm_start,
                                double tol, int max_iterations = 60);

/// Pin BLAS to one thread so results do not depend on the host.
void use_single_threaded_blas();

/// Largest deviation of a 256^3 dgemm from a naive triple loop.
double blas_self_check();

/// Call at the top of main. Pins BLAS to one thread and runs the self-check;
/// if the kernel OpenBLAS picked for this CPU is wrong and no core type was
/// forced, re-executes the process with OPENBLAS_CORETYPE=Haswell. Throws if
/// the check still fails.
void ensure_reliable_blas(char** argv);

/// Kernel family OpenBLAS selected, for run manifests.
std::string blas_core_name();

}  // namespace mrt::linalg
