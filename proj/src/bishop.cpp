#include "andrews3d/bishop.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "andrews3d/errors.hpp"

namespace andrews3d {

Eigen::Matrix3d skew_from_phi(double phi1, double phi2) {
  Eigen::Matrix3d a;
  a << 0.0, phi1, phi2,
      -phi1, 0.0, 0.0,
      -phi2, 0.0, 0.0;
  return a;
}

Eigen::Matrix3d rodrigues_exp(const Eigen::Matrix3d& a) {
  if (!((a + a.transpose()).cwiseAbs().maxCoeff() < 1e-12)) {
    throw InvalidArgument("rodrigues_exp: matrix is not skew-symmetric");
  }
  // a = [w]_x with w = (a21, a02, a10)
  const double rho2 = a(2, 1) * a(2, 1) + a(0, 2) * a(0, 2) + a(1, 0) * a(1, 0);
  const double rho = std::sqrt(rho2);
  double sinc;      // sin(rho) / rho
  double cosc;      // (1 - cos(rho)) / rho^2
  if (rho < 1e-6) {
    sinc = 1.0 - rho2 / 6.0 + rho2 * rho2 / 120.0;
    cosc = 0.5 - rho2 / 24.0 + rho2 * rho2 / 720.0;
  } else {
    sinc = std::sin(rho) / rho;
    // 1 - cos(rho) = 2 sin^2(rho/2) keeps full precision for small angles.
    const double s = std::sin(0.5 * rho);
    cosc = 2.0 * s * s / rho2;
  }
  return Eigen::Matrix3d::Identity() + sinc * a + cosc * (a * a);
}

double FrameTrajectory::max_orthogonality_error() const {
  double err = 0.0;
  for (const auto& f : frames) {
    err = std::max(err, (f * f.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
  }
  return err;
}

double FrameTrajectory::max_determinant_error() const {
  double err = 0.0;
  for (const auto& f : frames) err = std::max(err, std::abs(f.determinant() - 1.0));
  return err;
}

FrameTrajectory integrate_lie_cg3(const GeneratorFn& generator, int steps) {
  if (steps < 1) throw InvalidArgument("integration needs at least one step");
  // Crouch-Grossman order-3 tableau.
  constexpr double c2 = 3.0 / 4.0;
  constexpr double c3 = 17.0 / 24.0;
  constexpr double a21 = 3.0 / 4.0;
  constexpr double a31 = 119.0 / 216.0;
  constexpr double a32 = 17.0 / 108.0;
  constexpr double b1 = 13.0 / 51.0;
  constexpr double b2 = -2.0 / 3.0;
  constexpr double b3 = 24.0 / 17.0;

  FrameTrajectory out;
  out.step_size = 1.0 / steps;
  out.frames.reserve(static_cast<std::size_t>(steps) + 1);
  out.frames.push_back(Frame::Identity());
  const double h = out.step_size;

  for (int n = 0; n < steps; ++n) {
    const Frame& f = out.frames.back();
    const double t = n * h;
    const Eigen::Matrix3d k1 = generator(t, f);
    const Frame y2 = rodrigues_exp(h * a21 * k1) * f;
    const Eigen::Matrix3d k2 = generator(t + c2 * h, y2);
    const Frame y3 = rodrigues_exp(h * a32 * k2) * rodrigues_exp(h * a31 * k1) * f;
    const Eigen::Matrix3d k3 = generator(t + c3 * h, y3);
    out.frames.push_back(rodrigues_exp(h * b3 * k3) * rodrigues_exp(h * b2 * k2) * rodrigues_exp(h * b1 * k1) * f);
  }
  return out;
}

FrameTrajectory integrate_frame(const PlaneFn& phi, int steps) {
  return integrate_lie_cg3(
      [&phi](double t, const Frame&) {
        const Eigen::Vector2d p = phi(t);
        return skew_from_phi(p.x(), p.y());
      },
      steps);
}

CurveSource CurveSource::from(const PlaneCurve& curve) {
  return {[curve](double t) { return curve.value(t); }, [curve](double t) { return curve.derivative(t); },
          curve.source_norm()};
}

std::optional<double> torsion(const Eigen::Vector2d& phi, const Eigen::Vector2d& dphi, double kappa_floor) {
  const double k2 = phi.squaredNorm();
  if (k2 <= 0.0 || k2 < kappa_floor * kappa_floor) return std::nullopt;
  return (dphi.y() * phi.x() - phi.y() * dphi.x()) / k2;
}

double check_identity(const Eigen::Matrix2Xd& phi, const Eigen::Matrix2Xd& dphi, double kappa_floor) {
  if (phi.cols() != dphi.cols()) throw InvalidArgument("phi and phi' sample counts differ");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < phi.cols(); ++i) {
    const Eigen::Vector2d p = phi.col(i);
    const Eigen::Vector2d dp = dphi.col(i);
    const double kappa = p.norm();
    if (kappa < kappa_floor) continue;
    const double lhs = dp.squaredNorm();
    double rhs = 0.0;
    if (kappa > 0.0) {
      const double dkappa = p.dot(dp) / kappa;
      const double tau = *torsion(p, dp, 0.0);
      rhs = dkappa * dkappa + tau * tau * kappa * kappa;
    }
    const double scale = std::max(lhs, rhs);
    if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

Filament build_filament(const CurveSource& source, int steps, double floor_fraction) {
  if (steps < 1) throw InvalidArgument("filament needs at least one step");
  Filament fil;
  fil.source_norm = source.source_norm;
  fil.frames = integrate_frame(source.value, steps);
  const double h = fil.frames.step_size;

  fil.points.reserve(static_cast<std::size_t>(steps) + 1);
  fil.points.emplace_back(Eigen::Vector3d::Zero());
  for (int i = 0; i < steps; ++i) {
    fil.points.push_back(fil.points.back() + h * fil.frames.tangent(static_cast<std::size_t>(i)));
  }

  fil.phi.resize(2, steps);
  fil.dphi.resize(2, steps);
  fil.curvature.resize(static_cast<std::size_t>(steps));
  double kappa_max = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    fil.phi.col(i) = source.value(t);
    fil.dphi.col(i) = source.derivative(t);
    fil.curvature[static_cast<std::size_t>(i)] = fil.phi.col(i).norm();
    kappa_max = std::max(kappa_max, fil.curvature[static_cast<std::size_t>(i)]);
  }
  fil.kappa_floor = floor_fraction * kappa_max;
  fil.torsion.resize(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    fil.torsion[static_cast<std::size_t>(i)] = torsion(fil.phi.col(i), fil.dphi.col(i), fil.kappa_floor);
  }
  return fil;
}

Filament build_filament(const PlaneCurve& curve, int steps, double floor_fraction) {
  return build_filament(CurveSource::from(curve), steps, floor_fraction);
}

FilamentDiagnostics diagnose(const Filament& filament) {
  FilamentDiagnostics diag;
  const double h = filament.step_size();
  for (int i = 0; i < filament.steps(); ++i) {
    const double speed = filament.frames.tangent(static_cast<std::size_t>(i)).norm();
    diag.length += h * speed;
    diag.max_unit_speed_error = std::max(diag.max_unit_speed_error, std::abs(speed - 1.0));
    const double k = filament.curvature[static_cast<std::size_t>(i)];
    diag.total_square_curvature += h * k * k;
  }
  diag.expected_square_curvature = 2.0 * filament.source_norm * filament.source_norm;
  diag.identity_residual = check_identity(filament.phi, filament.dphi, filament.kappa_floor);
  diag.max_orthogonality_error = filament.frames.max_orthogonality_error();
  return diag;
}

}  // namespace andrews3d
