#pragma once

#include <complex>
#include <span>
#include <vector>

#include "andrews3d/singular_pair.hpp"

namespace andrews3d {

/// S_n(x, theta) = sum_{k=1}^{n} exp(i pi x k^2) exp(2 pi i k theta), summed directly.
std::complex<double> gauss_sum(long n, double x, double theta);

/// 4 sqrt(d) + 3/2 + 1/d, the uniform bound on |S_d(1/d, theta)|.
double gauss_sum_bound(int d);

struct GaussSumReport {
  long n = 0;
  double x = 0.0;
  std::vector<double> theta_grid;
  std::vector<double> magnitudes;
  double bound = 0.0;
  double max_magnitude = 0.0;
  double max_ratio = 0.0;
};

/// Sweeps |S_d(1/d, theta)| over theta_samples uniform points of [-1/2, 1/2]
/// (endpoints included). Throws ValidationError if the bound is exceeded.
GaussSumReport verify_bound(int d, int theta_samples);

/// Singular values sqrt(1 +- |w|^2 / 2) of the 2 x n matrix (Re z; Im z),
/// where w^2 = sum z_k^2. Requires sum |z_k|^2 = 2 within 1e-9.
SingularPair perturb_singular_values(std::span<const std::complex<double>> z);

}  // namespace andrews3d
