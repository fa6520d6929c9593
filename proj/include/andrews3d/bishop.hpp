#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "andrews3d/andrews_map.hpp"

namespace andrews3d {

/// Rows are (T, N1, N2).
using Frame = Eigen::Matrix3d;

/// Bishop generator [[0, p1, p2], [-p1, 0, 0], [-p2, 0, 0]].
Eigen::Matrix3d skew_from_phi(double phi1, double phi2);

/// exp(a) for skew-symmetric a by Rodrigues's formula, with a series for
/// rotation angles below 1e-6. Throws InvalidArgument if a is not skew.
Eigen::Matrix3d rodrigues_exp(const Eigen::Matrix3d& a);

struct FrameTrajectory {
  std::vector<Frame> frames;  // M + 1 frames at t_i = i / M
  double step_size = 0.0;

  Eigen::Vector3d tangent(std::size_t i) const { return frames[i].row(0).transpose(); }
  /// max_i ||F_i F_i^T - I||_max
  double max_orthogonality_error() const;
  double max_determinant_error() const;
};

/// Generator A(t, F) of the left-invariant system F' = A F.
using GeneratorFn = std::function<Eigen::Matrix3d(double, const Frame&)>;

/// Third-order Crouch-Grossman integration of F' = A(t, F) F on SO(3) from
/// F(0) = I over [0, 1] with `steps` uniform steps.
FrameTrajectory integrate_lie_cg3(const GeneratorFn& generator, int steps);

using PlaneFn = std::function<Eigen::Vector2d(double)>;

/// Bishop frame driven by phi(t) = (phi1, phi2).
FrameTrajectory integrate_frame(const PlaneFn& phi, int steps);

/// Curvature / torsion source: analytic phi and phi'.
struct CurveSource {
  PlaneFn value;
  PlaneFn derivative;
  double source_norm = 0.0;

  static CurveSource from(const PlaneCurve& curve);
};

struct Filament {
  std::vector<Eigen::Vector3d> points;  // M + 1, points[0] = 0
  FrameTrajectory frames;
  Eigen::Matrix2Xd phi;                 // phi(t_i), i < M
  Eigen::Matrix2Xd dphi;                // phi'(t_i), i < M
  std::vector<double> curvature;        // kappa(t_i), i < M
  std::vector<std::optional<double>> torsion;
  double kappa_floor = 0.0;
  double source_norm = 0.0;

  int steps() const { return static_cast<int>(curvature.size()); }
  double step_size() const { return frames.step_size; }
};

inline constexpr double kDefaultKappaFloorFraction = 1e-3;

/// Integrates the frame, sums h T(t_i) into points, and samples curvature and
/// torsion. Torsion is reported only where kappa >= floor_fraction * max kappa.
Filament build_filament(const CurveSource& source, int steps,
                        double floor_fraction = kDefaultKappaFloorFraction);
Filament build_filament(const PlaneCurve& curve, int steps, double floor_fraction = kDefaultKappaFloorFraction);

/// (phi2' phi1 - phi2 phi1') / (phi1^2 + phi2^2), or nothing where
/// phi1^2 + phi2^2 < kappa_floor^2 or kappa vanishes.
std::optional<double> torsion(const Eigen::Vector2d& phi, const Eigen::Vector2d& dphi, double kappa_floor);

/// Max relative residual of |phi'|^2 = kappa'^2 + tau^2 kappa^2 over samples
/// with kappa >= kappa_floor, kappa' = (phi . phi') / kappa.
double check_identity(const Eigen::Matrix2Xd& phi, const Eigen::Matrix2Xd& dphi, double kappa_floor);

struct FilamentDiagnostics {
  double length = 0.0;                   // sum h |T(t_i)|
  double total_square_curvature = 0.0;   // sum h kappa(t_i)^2
  double expected_square_curvature = 0.0;  // 2 |x|^2
  double identity_residual = 0.0;
  double max_orthogonality_error = 0.0;
  double max_unit_speed_error = 0.0;
};

FilamentDiagnostics diagnose(const Filament& filament);

}  // namespace andrews3d
