#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "andrews3d/dataset.hpp"
#include "andrews3d/singular_pair.hpp"
#include "andrews3d/spectral.hpp"

namespace andrews3d {

enum class PhasePolicy {
  quadratic,  // psi_k = 2 pi k^2 / (4d)
  none,       // psi_k = 0
  custom,     // explicit frequencies/phases (orbit exploration, test fixtures)
};

PhasePolicy parse_phase_policy(const std::string& name);
std::string to_string(PhasePolicy policy);

/// Phase angles in radians for the given policy, unreduced.
Eigen::VectorXd phase_angles(Eigen::Index d, PhasePolicy policy);

/// Smallest grid on which uniform quadrature integrates every product of two
/// slices exactly.
inline int min_sample_count(Eigen::Index d) { return static_cast<int>(4 * d + 2); }
inline int default_sample_count(Eigen::Index d) { return std::max(1024, min_sample_count(d)); }

/// The plane curve Phi[x] of a single data point, evaluable at any t.
class PlaneCurve {
 public:
  PlaneCurve() = default;
  PlaneCurve(std::vector<double> amplitudes, std::vector<int> frequencies, std::vector<double> phase_turns,
             double source_norm);

  Eigen::Vector2d value(double t) const;
  Eigen::Vector2d derivative(double t) const;
  double source_norm() const { return source_norm_; }

 private:
  std::vector<double> amplitude_;  // sqrt(2) * (U^T x)_k
  std::vector<int> frequency_;
  std::vector<double> phase_turns_;
  double source_norm_ = 0.0;
};

/// Phi(t) = C(t) U^T where column k of C(t) is
/// R(psi_k) (sqrt2 cos 2 pi f_k t, sqrt2 sin 2 pi f_k t)^T, f_k = k by default.
class AndrewsMap {
 public:
  AndrewsMap(Eigen::MatrixXd u_transpose, PhasePolicy policy);
  /// General member of the per-column orbit. Frequencies must be >= 1.
  AndrewsMap(Eigen::MatrixXd u_transpose, std::vector<int> frequencies, Eigen::VectorXd phases);

  static AndrewsMap identity(Eigen::Index d, PhasePolicy policy);

  Eigen::Index dim() const { return u_transpose_.rows(); }
  const Eigen::MatrixXd& u_transpose() const { return u_transpose_; }
  const Eigen::VectorXd& phases() const { return phases_; }
  const std::vector<int>& frequencies() const { return frequencies_; }
  PhasePolicy phase_policy() const { return policy_; }

  /// 2 x d matrix Phi(t).
  Eigen::Matrix2Xd time_slice(double t) const;
  Eigen::Matrix2Xd time_slice_derivative(double t) const;

  PlaneCurve curve(const Eigen::VectorXd& x) const;

 private:
  Eigen::Matrix2Xd basis_slice(double t) const;
  void init();

  Eigen::MatrixXd u_transpose_;
  std::vector<int> frequencies_;
  Eigen::VectorXd phases_;
  std::vector<double> phase_turns_;
  PhasePolicy policy_;
};

AndrewsMap build_map(const SvdFactors& factors, PhasePolicy policy);

/// Samples of a curve on t_i = i / M, i = 0..M-1.
struct PlaneCurveSamples {
  int samples = 0;
  Eigen::Matrix2Xd points;
  Eigen::Matrix2Xd derivative_points;
  double source_norm = 0.0;

  double time(int i) const { return static_cast<double>(i) / samples; }
};

/// Requires M >= 4d + 2.
PlaneCurveSamples evaluate_curve(const AndrewsMap& map, const Eigen::VectorXd& x, int samples);

/// Minimal mean quadratic variation over all isotropic isometries, given the
/// singular values of the data matrix:
///   2 sum_{s<d} (sigma_s^2 - sigma_{s+1}^2) sum_{k<=s} k^2 + 2 sigma_d^2 sum_{k<=d} k^2.
double mqv_closed_form(std::span<const double> sigma);
double mqv_closed_form(const Eigen::VectorXd& sigma);

/// sum_m m^2 |f^(m)|^2 of Phi[x], computed from the exact Fourier coefficients.
double quadratic_variation(const AndrewsMap& map, const Eigen::VectorXd& x);

/// Quadratic variation summed over every data point of ds. This is the
/// normalization under which mqv_closed_form() is attained.
double mqv_of_map(const AndrewsMap& map, const Dataset& ds);

using TimeSliceFn = std::function<Eigen::Matrix2Xd(double)>;

/// Largest deviation of the component functions from an orthonormal,
/// zero-mean system under M-point uniform quadrature. Requires M >= 4d + 2.
double gram_deviation(const AndrewsMap& map, int samples);
double gram_deviation(const TimeSliceFn& slice, Eigen::Index d, int samples);

/// Singular values of Phi(t) / sqrt(d) from the closed-form 2 x 2 eigenvalues.
SingularPair time_slice_singular_values(const AndrewsMap& map, double t);
SingularPair slice_singular_values(const Eigen::Matrix2Xd& slice, double scale);

/// 4/sqrt(d) + 3/(2d) + 1/d^2. The scaled slices have singular values in
/// [sqrt(1-eps), sqrt(1+eps)] under quadratic phases; vacuous for eps >= 1.
double tour_epsilon(int d);

}  // namespace andrews3d
