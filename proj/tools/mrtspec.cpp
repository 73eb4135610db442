#include <exception>
#include <iostream>

#include "mrt/cli.hpp"
#include "mrt/linalg.hpp"

int main(int argc, char** argv) {
  try {
    mrt::linalg::ensure_reliable_blas(argv);
  } catch (const std::exception& e) {
    std::cerr << "mrtspec: " << e.what() << "\n";
    return mrt::cli::kOther;
  }
  return mrt::cli::cli_dispatch(argc, argv);
}
