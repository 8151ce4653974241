#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tngeo {

using cplx = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";

// Bad user input: malformed configs, inconsistent sizes, unknown labels.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical trouble: non-convergence, degenerate spectra, NaN/Inf entries.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tngeo
