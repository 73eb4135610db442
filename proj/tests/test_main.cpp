#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "mrt/linalg.hpp"

int main(int argc, char** argv) {
  // May re-exec with a working OpenBLAS kernel before any test runs.
  mrt::linalg::ensure_reliable_blas(argv);
  doctest::Context context(argc, argv);
  return context.run();
}
