#pragma once

#include <cstddef>
#include <vector>

namespace mutfront {

// Thomas algorithm.  lower/upper have size n-1, diag and rhs size n; the
// solution overwrites rhs, diag is consumed.  Stable for the diagonally
// dominant systems produced by backward-Euler diffusion.
inline void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                              std::vector<double>& upper, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = lower[i - 1] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
  }
}

}  // namespace mutfront
