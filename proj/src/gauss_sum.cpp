#include "andrews3d/gauss_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "andrews3d/errors.hpp"

namespace andrews3d {
namespace {

constexpr long kCompensatedThreshold = 1L << 16;

// Neumaier summation of one real component.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Phase of term k in turns, reduced to [-1/2, 1/2].
double term_turns(long k, double x, double theta) {
  const double kk = static_cast<double>(k);
  double quad = 0.5 * x * kk * kk;
  quad -= std::nearbyint(quad);
  double lin = kk * theta;
  lin -= std::nearbyint(lin);
  const double turns = quad + lin;
  return turns - std::nearbyint(turns);
}

}  // namespace

std::complex<double> gauss_sum(long n, double x, double theta) {
  if (n < 1) throw InvalidArgument("gauss_sum needs n >= 1");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (n < kCompensatedThreshold) {
    double re = 0.0;
    double im = 0.0;
    for (long k = 1; k <= n; ++k) {
      const double angle = two_pi * term_turns(k, x, theta);
      re += std::cos(angle);
      im += std::sin(angle);
    }
    return {re, im};
  }
  CompensatedSum re;
  CompensatedSum im;
  for (long k = 1; k <= n; ++k) {
    const double angle = two_pi * term_turns(k, x, theta);
    re.add(std::cos(angle));
    im.add(std::sin(angle));
  }
  return {re.value(), im.value()};
}

double gauss_sum_bound(int d) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  return 4.0 * std::sqrt(static_cast<double>(d)) + 1.5 + 1.0 / d;
}

GaussSumReport verify_bound(int d, int theta_samples) {
  if (d < 1) throw InvalidArgument("verify_bound needs d >= 1");
  if (theta_samples < 2) throw InvalidArgument("verify_bound needs at least two theta samples");
  GaussSumReport r;
  r.n = d;
  r.x = 1.0 / d;
  r.bound = gauss_sum_bound(d);
  r.theta_grid.resize(static_cast<std::size_t>(theta_samples));
  r.magnitudes.resize(static_cast<std::size_t>(theta_samples));
  for (int i = 0; i < theta_samples; ++i) {
    const double theta = -0.5 + static_cast<double>(i) / (theta_samples - 1);
    const double mag = std::abs(gauss_sum(d, r.x, theta));
    r.theta_grid[static_cast<std::size_t>(i)] = theta;
    r.magnitudes[static_cast<std::size_t>(i)] = mag;
    r.max_magnitude = std::max(r.max_magnitude, mag);
  }
  r.max_ratio = r.max_magnitude / r.bound;
  if (r.max_ratio > 1.0) {
    throw ValidationError("Gauss sum bound violated for d=" + std::to_string(d) +
                          ": max |S| / bound = " + std::to_string(r.max_ratio));
  }
  return r;
}

SingularPair perturb_singular_values(std::span<const std::complex<double>> z) {
  double mass = 0.0;
  std::complex<double> omega_sq = 0.0;
  for (const auto& zk : z) {
    mass += std::norm(zk);
    omega_sq += zk * zk;
  }
  if (std::abs(mass - 2.0) > 1e-9) {
    throw InvalidArgument("perturb_singular_values needs sum |z_k|^2 = 2 (got " + std::to_string(mass) + ")");
  }
  // sqrt(1 +- |w|^2/2) are the root sums of squares of the real and imaginary
  // parts after rotating every z_k by -arg(w). Summing there avoids the
  // cancellation in 1 - |w|^2/2 when the matrix is close to rank one.
  const std::complex<double> unrotate = std::polar(1.0, -0.5 * std::arg(omega_sq));
  double major = 0.0;
  double minor = 0.0;
  for (const auto& zk : z) {
    const std::complex<double> w = zk * unrotate;
    major += w.real() * w.real();
    minor += w.imag() * w.imag();
  }
  return {std::sqrt(major), std::sqrt(minor)};
}

}  // namespace andrews3d
