#include "andrews3d/andrews_map.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "andrews3d/errors.hpp"

namespace andrews3d {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Fractional part of the angle in turns, centred on zero.
double reduce_turns(double turns) { return turns - std::nearbyint(turns); }

}  // namespace

PhasePolicy parse_phase_policy(const std::string& name) {
  if (name == "quadratic") return PhasePolicy::quadratic;
  if (name == "none") return PhasePolicy::none;
  throw InvalidArgument("unknown phase policy '" + name + "' (expected quadratic or none)");
}

std::string to_string(PhasePolicy policy) {
  switch (policy) {
    case PhasePolicy::quadratic: return "quadratic";
    case PhasePolicy::none: return "none";
    case PhasePolicy::custom: return "custom";
  }
  return "custom";
}

Eigen::VectorXd phase_angles(Eigen::Index d, PhasePolicy policy) {
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(d);
  if (policy == PhasePolicy::quadratic) {
    for (Eigen::Index k = 1; k <= d; ++k) {
      psi(k - 1) = kTwoPi * static_cast<double>(k * k) / static_cast<double>(4 * d);
    }
  }
  return psi;
}

PlaneCurve::PlaneCurve(std::vector<double> amplitudes, std::vector<int> frequencies,
                       std::vector<double> phase_turns, double source_norm)
    : amplitude_(std::move(amplitudes)),
      frequency_(std::move(frequencies)),
      phase_turns_(std::move(phase_turns)),
      source_norm_(source_norm) {}

Eigen::Vector2d PlaneCurve::value(double t) const {
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < amplitude_.size(); ++k) {
    const double angle = kTwoPi * reduce_turns(frequency_[k] * t + phase_turns_[k]);
    p.x() += amplitude_[k] * std::cos(angle);
    p.y() += amplitude_[k] * std::sin(angle);
  }
  return p;
}

Eigen::Vector2d PlaneCurve::derivative(double t) const {
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < amplitude_.size(); ++k) {
    const double angle = kTwoPi * reduce_turns(frequency_[k] * t + phase_turns_[k]);
    const double rate = kTwoPi * frequency_[k] * amplitude_[k];
    p.x() -= rate * std::sin(angle);
    p.y() += rate * std::cos(angle);
  }
  return p;
}

AndrewsMap::AndrewsMap(Eigen::MatrixXd u_transpose, PhasePolicy policy)
    : u_transpose_(std::move(u_transpose)), policy_(policy) {
  if (policy == PhasePolicy::custom) throw InvalidArgument("custom phases need explicit frequencies and angles");
  const auto d = u_transpose_.rows();
  frequencies_.resize(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) frequencies_[static_cast<std::size_t>(k)] = static_cast<int>(k + 1);
  phases_ = phase_angles(d, policy);
  init();
}

AndrewsMap::AndrewsMap(Eigen::MatrixXd u_transpose, std::vector<int> frequencies, Eigen::VectorXd phases)
    : u_transpose_(std::move(u_transpose)),
      frequencies_(std::move(frequencies)),
      phases_(std::move(phases)),
      policy_(PhasePolicy::custom) {
  init();
}

void AndrewsMap::init() {
  const auto d = u_transpose_.rows();
  if (d < 1 || u_transpose_.cols() != d) throw InvalidArgument("U^T must be a nonempty square matrix");
  if (static_cast<Eigen::Index>(frequencies_.size()) != d || phases_.size() != d) {
    throw InvalidArgument("frequency and phase vectors must have length d");
  }
  for (int f : frequencies_) {
    if (f < 1) throw InvalidArgument("frequencies must be positive");
  }
  const double err =
      (u_transpose_ * u_transpose_.transpose() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(err < 1e-10)) throw InvalidArgument("U^T is not orthogonal");
  phase_turns_.resize(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) phase_turns_[static_cast<std::size_t>(k)] = phases_(k) / kTwoPi;
}

AndrewsMap AndrewsMap::identity(Eigen::Index d, PhasePolicy policy) {
  return AndrewsMap(Eigen::MatrixXd::Identity(d, d), policy);
}

Eigen::Matrix2Xd AndrewsMap::basis_slice(double t) const {
  const auto d = dim();
  Eigen::Matrix2Xd c(2, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double angle = kTwoPi * reduce_turns(frequencies_[kk] * t + phase_turns_[kk]);
    c(0, k) = kSqrt2 * std::cos(angle);
    c(1, k) = kSqrt2 * std::sin(angle);
  }
  return c;
}

Eigen::Matrix2Xd AndrewsMap::time_slice(double t) const { return basis_slice(t) * u_transpose_; }

Eigen::Matrix2Xd AndrewsMap::time_slice_derivative(double t) const {
  Eigen::Matrix2Xd c = basis_slice(t);
  Eigen::Matrix2Xd dc(2, c.cols());
  for (Eigen::Index k = 0; k < c.cols(); ++k) {
    const double rate = kTwoPi * frequencies_[static_cast<std::size_t>(k)];
    dc(0, k) = -rate * c(1, k);
    dc(1, k) = rate * c(0, k);
  }
  return dc * u_transpose_;
}

PlaneCurve AndrewsMap::curve(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) {
    throw InvalidArgument("data point has dimension " + std::to_string(x.size()) + ", map has " +
                          std::to_string(dim()));
  }
  const Eigen::VectorXd y = u_transpose_ * x;
  std::vector<double> amplitude(static_cast<std::size_t>(dim()));
  for (Eigen::Index k = 0; k < dim(); ++k) amplitude[static_cast<std::size_t>(k)] = kSqrt2 * y(k);
  return PlaneCurve(std::move(amplitude), frequencies_, phase_turns_, x.norm());
}

AndrewsMap build_map(const SvdFactors& factors, PhasePolicy policy) {
  const auto d = factors.dim();
  if (d < 1 || factors.u.cols() != d || factors.sigma.size() != d) throw InvalidArgument("invalid SVD factors");
  return AndrewsMap(factors.u.transpose(), policy);
}

PlaneCurveSamples evaluate_curve(const AndrewsMap& map, const Eigen::VectorXd& x, int samples) {
  if (samples < min_sample_count(map.dim())) {
    throw InvalidArgument("sample count " + std::to_string(samples) + " is below 4d+2 = " +
                          std::to_string(min_sample_count(map.dim())));
  }
  const PlaneCurve curve = map.curve(x);
  PlaneCurveSamples out;
  out.samples = samples;
  out.points.resize(2, samples);
  out.derivative_points.resize(2, samples);
  out.source_norm = curve.source_norm();
  for (int i = 0; i < samples; ++i) {
    const double t = out.time(i);
    out.points.col(i) = curve.value(t);
    out.derivative_points.col(i) = curve.derivative(t);
  }
  return out;
}

double mqv_closed_form(std::span<const double> sigma) {
  const std::size_t d = sigma.size();
  for (std::size_t k = 0; k < d; ++k) {
    if (!(sigma[k] >= 0.0)) throw InvalidArgument("singular values must be nonnegative");
    if (k + 1 < d && sigma[k] < sigma[k + 1]) throw InvalidArgument("singular values must be non-increasing");
  }
  double total = 0.0;
  double prefix = 0.0;  // sum_{k<=s} k^2
  for (std::size_t s = 1; s <= d; ++s) {
    prefix += static_cast<double>(s * s);
    const double next = s < d ? sigma[s] : 0.0;
    total += (sigma[s - 1] * sigma[s - 1] - next * next) * prefix;
  }
  return 2.0 * total;
}

double mqv_closed_form(const Eigen::VectorXd& sigma) {
  return mqv_closed_form(std::span<const double>(sigma.data(), static_cast<std::size_t>(sigma.size())));
}

namespace {

// Columns grouped by frequency; every slice carries a single harmonic.
std::map<int, std::vector<Eigen::Index>> columns_by_frequency(const AndrewsMap& map) {
  std::map<int, std::vector<Eigen::Index>> groups;
  for (Eigen::Index k = 0; k < map.dim(); ++k) groups[map.frequencies()[static_cast<std::size_t>(k)]].push_back(k);
  return groups;
}

// Row 1 at frequency m is sqrt2 Re(a e^{2 pi i m t}) with a = sum_k y_k e^{i psi_k};
// row 2 is the matching imaginary part. Each contributes m^2 |a|^2.
double qv_of_coefficients(const std::map<int, std::vector<Eigen::Index>>& groups, const Eigen::VectorXd& phases,
                          const Eigen::VectorXd& y) {
  double qv = 0.0;
  for (const auto& [m, cols] : groups) {
    std::complex<double> a = 0.0;
    for (auto k : cols) a += y(k) * std::polar(1.0, phases(k));
    qv += 2.0 * static_cast<double>(m) * m * std::norm(a);
  }
  return qv;
}

}  // namespace

double quadratic_variation(const AndrewsMap& map, const Eigen::VectorXd& x) {
  if (x.size() != map.dim()) throw InvalidArgument("data point dimension does not match map");
  return qv_of_coefficients(columns_by_frequency(map), map.phases(), map.u_transpose() * x);
}

double mqv_of_map(const AndrewsMap& map, const Dataset& ds) {
  if (ds.dim() != map.dim()) {
    throw InvalidArgument("dataset dimension " + std::to_string(ds.dim()) + " does not match map dimension " +
                          std::to_string(map.dim()));
  }
  const auto groups = columns_by_frequency(map);
  const Eigen::MatrixXd y = map.u_transpose() * ds.values;
  double total = 0.0;
  for (Eigen::Index n = 0; n < y.cols(); ++n) total += qv_of_coefficients(groups, map.phases(), y.col(n));
  return total;
}

double gram_deviation(const TimeSliceFn& slice, Eigen::Index d, int samples) {
  if (samples < min_sample_count(d)) {
    throw InvalidArgument("gram_deviation needs at least 4d+2 = " + std::to_string(min_sample_count(d)) +
                          " samples");
  }
  // Row r = j*d + k holds phi_{j,k} on the grid.
  Eigen::MatrixXd s(2 * d, samples);
  for (int i = 0; i < samples; ++i) {
    const Eigen::Matrix2Xd phi = slice(static_cast<double>(i) / samples);
    s.col(i).head(d) = phi.row(0).transpose();
    s.col(i).tail(d) = phi.row(1).transpose();
  }
  const Eigen::MatrixXd gram = (s * s.transpose()) / samples;
  const double ortho = (gram - Eigen::MatrixXd::Identity(2 * d, 2 * d)).cwiseAbs().maxCoeff();
  const double mean = (s.rowwise().sum() / samples).cwiseAbs().maxCoeff();
  return std::max(ortho, mean);
}

double gram_deviation(const AndrewsMap& map, int samples) {
  return gram_deviation([&map](double t) { return map.time_slice(t); }, map.dim(), samples);
}

SingularPair slice_singular_values(const Eigen::Matrix2Xd& slice, double scale) {
  // Closed-form eigenvectors of the 2x2 Gram matrix P = scale * slice slice^T:
  // the major axis sits at angle atan2(2b, a - c) / 2. The eigenvalues are the
  // projected sums of squares, which keeps the small one accurate near rank one.
  const double a = slice.row(0).squaredNorm();
  const double c = slice.row(1).squaredNorm();
  const double b = slice.row(0).dot(slice.row(1));
  const double angle = 0.5 * std::atan2(2.0 * b, a - c);
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  double major = 0.0;
  double minor = 0.0;
  for (Eigen::Index k = 0; k < slice.cols(); ++k) {
    const double along = cs * slice(0, k) + sn * slice(1, k);
    const double across = -sn * slice(0, k) + cs * slice(1, k);
    major += along * along;
    minor += across * across;
  }
  return {std::sqrt(scale * major), std::sqrt(scale * minor)};
}

SingularPair time_slice_singular_values(const AndrewsMap& map, double t) {
  return slice_singular_values(map.time_slice(t), 1.0 / static_cast<double>(map.dim()));
}

double tour_epsilon(int d) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  const double dd = d;
  return 4.0 / std::sqrt(dd) + 3.0 / (2.0 * dd) + 1.0 / (dd * dd);
}

}  // namespace andrews3d
