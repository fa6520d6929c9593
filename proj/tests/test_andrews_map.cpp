#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "andrews3d/andrews_map.hpp"
#include "andrews3d/errors.hpp"

using namespace andrews3d;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal(rng);
  return m;
}

Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Eigen::Index d) {
  return Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(rng, d, d)).householderQ();
}

Dataset make_dataset(Eigen::MatrixXd m) {
  Dataset ds;
  ds.values = std::move(m);
  return ds;
}

// Quadratic variation from the raw derivative by grid quadrature, rescaled by
// 1/(4 pi^2) into the Fourier-domain convention. Exact for M >= 4d + 2.
double qv_by_quadrature(const AndrewsMap& map, const Eigen::VectorXd& x) {
  const int m = min_sample_count(map.dim()) + 3;
  const PlaneCurveSamples s = evaluate_curve(map, x, m);
  return s.derivative_points.squaredNorm() / m / (4.0 * kPi * kPi);
}

double min_s_min(const AndrewsMap& map, int grid) {
  double lo = 1e300;
  for (int i = 0; i < grid; ++i) lo = std::min(lo, time_slice_singular_values(map, double(i) / grid).s_min);
  return lo;
}

}  // namespace

TEST_CASE("quadratic phases") {
  const Eigen::VectorXd psi = phase_angles(4, PhasePolicy::quadratic);
  CHECK(psi(0) == doctest::Approx(kPi / 8));
  CHECK(psi(1) == doctest::Approx(kPi / 2));
  CHECK(psi(2) == doctest::Approx(9 * kPi / 8));
  CHECK(psi(3) == doctest::Approx(2 * kPi));
  CHECK(phase_angles(7, PhasePolicy::none).isZero());
  for (int d : {1, 5, 30}) {
    const Eigen::VectorXd p = phase_angles(d, PhasePolicy::quadratic);
    for (int k = 1; k <= d; ++k) CHECK(p(k - 1) == doctest::Approx(2 * kPi * k * k / (4.0 * d)).epsilon(1e-15));
  }
}

TEST_CASE("d = 1 quadratic phase turns the circle by a quarter") {
  const AndrewsMap map = AndrewsMap::identity(1, PhasePolicy::quadratic);
  CHECK(map.phases()(0) == doctest::Approx(kPi / 2));
  const PlaneCurve c = map.curve(Eigen::VectorXd::Ones(1));
  for (double t : {0.0, 0.1, 0.37, 0.5, 0.9}) {
    const Eigen::Vector2d p = c.value(t);
    CHECK(p.x() == doctest::Approx(-kSqrt2 * std::sin(2 * kPi * t)).epsilon(1e-13));
    CHECK(p.y() == doctest::Approx(kSqrt2 * std::cos(2 * kPi * t)).epsilon(1e-13));
  }
}

TEST_CASE("build_map carries U^T and the policy") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd x = random_matrix(rng, 5, 30);
  const SvdFactors f = svd(x);
  const AndrewsMap map = build_map(f, PhasePolicy::none);
  CHECK(map.phases().isZero());
  CHECK(map.u_transpose() == f.u.transpose());
  CHECK(map.frequencies() == std::vector<int>{1, 2, 3, 4, 5});
  // The map equals Psi U^T.
  const Eigen::Matrix2Xd slice = map.time_slice(0.3);
  Eigen::Matrix2Xd psi(2, 5);
  for (int k = 1; k <= 5; ++k) {
    psi(0, k - 1) = kSqrt2 * std::cos(2 * kPi * k * 0.3);
    psi(1, k - 1) = kSqrt2 * std::sin(2 * kPi * k * 0.3);
  }
  CHECK((slice - psi * f.u.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("time slices") {
  const AndrewsMap plain = AndrewsMap::identity(5, PhasePolicy::none);
  const Eigen::Matrix2Xd s0 = plain.time_slice(0.0);
  CHECK((s0.row(0).array() - kSqrt2).abs().maxCoeff() < 1e-15);
  CHECK(s0.row(1).isZero());

  const Eigen::Matrix2Xd q = AndrewsMap::identity(2, PhasePolicy::none).time_slice(0.25);
  CHECK(std::abs(q(0, 0)) < 1e-15);
  CHECK(q(1, 0) == doctest::Approx(kSqrt2));
  CHECK(q(0, 1) == doctest::Approx(-kSqrt2));
  CHECK(std::abs(q(1, 1)) < 1e-15);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int d : {1, 3, 8, 33}) {
    const AndrewsMap map(random_orthogonal(rng, d).transpose(), PhasePolicy::quadratic);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::Matrix2Xd s = map.time_slice(unit(rng));
      double by_columns = 0.0;
      for (Eigen::Index k = 0; k < s.cols(); ++k) by_columns += s.col(k).squaredNorm();
      CHECK(s.squaredNorm() == doctest::Approx(2.0 * d).epsilon(1e-13));
      CHECK(by_columns == doctest::Approx(s.squaredNorm()).epsilon(1e-14));
    }
  }
}

TEST_CASE("evaluate_curve") {
  const AndrewsMap map = AndrewsMap::identity(3, PhasePolicy::none);
  const PlaneCurveSamples zero = evaluate_curve(map, Eigen::VectorXd::Zero(3), 14);
  CHECK(zero.points.isZero());
  CHECK(zero.derivative_points.isZero());

  const PlaneCurveSamples e1 = evaluate_curve(map, Eigen::Vector3d(1, 0, 0), 20);
  for (int i = 0; i < 20; ++i) {
    const double t = i / 20.0;
    CHECK(e1.points(0, i) == doctest::Approx(kSqrt2 * std::cos(2 * kPi * t)));
    CHECK(e1.points(1, i) == doctest::Approx(kSqrt2 * std::sin(2 * kPi * t)));
  }

  CHECK_THROWS_AS(evaluate_curve(map, Eigen::Vector3d(1, 0, 0), 13), InvalidArgument);
  CHECK_THROWS_AS(evaluate_curve(map, Eigen::Vector2d(1, 0), 14), InvalidArgument);
}

TEST_CASE("analytic derivative matches central differences") {
  std::mt19937_64 rng(6);
  const AndrewsMap map(random_orthogonal(rng, 6).transpose(), PhasePolicy::quadratic);
  const PlaneCurve c = map.curve(random_matrix(rng, 6, 1));
  const double h = 1e-5;
  for (double t : {0.0, 0.21, 0.5, 0.77}) {
    const Eigen::Vector2d fd = (c.value(t + h) - c.value(t - h)) / (2 * h);
    CHECK((fd - c.derivative(t)).norm() < 1e-6 * (1.0 + c.derivative(t).norm()));
  }
}

TEST_CASE("zero mean and isotropic isometry of sampled curves") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 20;
    const AndrewsMap map(random_orthogonal(rng, d).transpose(),
                         trial % 2 ? PhasePolicy::quadratic : PhasePolicy::none);
    const Eigen::VectorXd x = random_matrix(rng, d, 1);
    const Eigen::VectorXd y = random_matrix(rng, d, 1);
    const int m = min_sample_count(d);
    const PlaneCurveSamples sx = evaluate_curve(map, x, m);
    const PlaneCurveSamples sy = evaluate_curve(map, y, m);

    CHECK((sx.points.rowwise().sum() / m).norm() <= 1e-9 * sx.source_norm);
    CHECK(sx.points.squaredNorm() / m == doctest::Approx(2.0 * x.squaredNorm()).epsilon(1e-9));
    CHECK((sx.points - sy.points).squaredNorm() / m == doctest::Approx(2.0 * (x - y).squaredNorm()).epsilon(1e-9));

    const double a = angle(rng);
    const Eigen::Vector2d u(std::cos(a), std::sin(a));
    CHECK((u.transpose() * sx.points).squaredNorm() / m == doctest::Approx(x.squaredNorm()).epsilon(1e-9));
  }
}

TEST_CASE("mqv closed form") {
  CHECK(mqv_closed_form(Eigen::VectorXd::Ones(1)) == 2.0);
  CHECK(mqv_closed_form(Eigen::Vector3d(3, 2, 1)) == doctest::Approx(68.0).epsilon(1e-15));
  CHECK(mqv_closed_form(Eigen::Vector2d(1, 1)) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK_THROWS_AS(mqv_closed_form(Eigen::Vector2d(1, 2)), InvalidArgument);
  CHECK_THROWS_AS(mqv_closed_form(Eigen::Vector2d(1, -1)), InvalidArgument);
  // Abel summation: equals 2 sum k^2 sigma_k^2.
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd s = random_matrix(rng, 1 + trial, 1).cwiseAbs();
    std::sort(s.data(), s.data() + s.size(), std::greater<>());
    double direct = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) direct += 2.0 * double((k + 1) * (k + 1)) * s(k) * s(k);
    CHECK(mqv_closed_form(s) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("mqv_of_map on a dataset with singular values (3,2,1)") {
  std::mt19937_64 rng(13);
  const Eigen::MatrixXd q = random_orthogonal(rng, 3);
  const Eigen::MatrixXd v = Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(rng, 8, 3)).householderQ() *
                            Eigen::MatrixXd::Identity(8, 3);
  const Dataset ds = make_dataset(q * Eigen::Vector3d(3, 2, 1).asDiagonal() * v.transpose());
  const AndrewsMap map = build_map(svd(ds), PhasePolicy::quadratic);
  CHECK(mqv_of_map(map, ds) == doctest::Approx(68.0).epsilon(1e-9));

  double by_quadrature = 0.0;
  for (Eigen::Index n = 0; n < ds.size(); ++n) by_quadrature += qv_by_quadrature(map, ds.values.col(n));
  CHECK(by_quadrature == doctest::Approx(68.0).epsilon(1e-9));
}

TEST_CASE("single-harmonic quadratic variation") {
  const AndrewsMap map = AndrewsMap::identity(5, PhasePolicy::quadratic);
  for (int k = 1; k <= 5; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(5);
    e(k - 1) = 1.0;
    CHECK(quadratic_variation(map, e) == doctest::Approx(2.0 * k * k).epsilon(1e-14));
    CHECK(qv_by_quadrature(map, e) == doctest::Approx(2.0 * k * k).epsilon(1e-12));
  }
  CHECK(mqv_of_map(map, make_dataset(Eigen::MatrixXd::Zero(5, 9))) == 0.0);
  CHECK_THROWS_AS(mqv_of_map(map, make_dataset(Eigen::MatrixXd::Zero(4, 9))), InvalidArgument);
}

TEST_CASE("built maps attain the closed form; swapped frequencies do not") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 15;
    const int n = d + trial * 3;
    const Dataset ds = make_dataset(random_matrix(rng, d, n));
    const SvdFactors f = svd(ds);
    const double closed = mqv_closed_form(f.sigma);
    const AndrewsMap quad = build_map(f, PhasePolicy::quadratic);
    const AndrewsMap none = build_map(f, PhasePolicy::none);
    CHECK(mqv_of_map(quad, ds) == doctest::Approx(closed).epsilon(1e-9));
    CHECK(std::abs(mqv_of_map(quad, ds) - mqv_of_map(none, ds)) <= 1e-12 * closed);
    CHECK(std::abs(gram_deviation(quad, min_sample_count(d)) - gram_deviation(none, min_sample_count(d))) <= 1e-12);

    // Independent route: quadrature of the raw derivative.
    for (Eigen::Index c = 0; c < std::min<Eigen::Index>(n, 5); ++c) {
      CHECK(qv_by_quadrature(quad, ds.values.col(c)) ==
            doctest::Approx(quadratic_variation(quad, ds.values.col(c))).epsilon(1e-10));
    }

    const int k = trial % (d - 1);
    std::vector<int> freq(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) freq[static_cast<std::size_t>(j)] = j + 1;
    std::swap(freq[static_cast<std::size_t>(k)], freq[static_cast<std::size_t>(k + 1)]);
    const AndrewsMap swapped(f.u.transpose(), freq, Eigen::VectorXd::Zero(d));
    CHECK(gram_deviation(swapped, min_sample_count(d)) < 1e-9);
    CHECK(mqv_of_map(swapped, ds) > closed);
  }
}

TEST_CASE("gram deviation") {
  for (int d = 1; d <= 64; d += 7) {
    std::mt19937_64 rng(static_cast<unsigned>(d));
    const AndrewsMap map(random_orthogonal(rng, d).transpose(), PhasePolicy::quadratic);
    CHECK(gram_deviation(map, min_sample_count(d)) < 1e-9);
  }
  CHECK(gram_deviation(AndrewsMap::identity(1, PhasePolicy::none), 6) < 1e-15);
  CHECK_THROWS_AS(gram_deviation(AndrewsMap::identity(2, PhasePolicy::none), 9), InvalidArgument);

  // Negative control: the phase rotates only the first row.
  const AndrewsMap map = AndrewsMap::identity(4, PhasePolicy::quadratic);
  const TimeSliceFn corrupted = [&](double t) {
    Eigen::Matrix2Xd s(2, 4);
    for (int k = 1; k <= 4; ++k) {
      const double a = 2 * kPi * k * t;
      s(0, k - 1) = kSqrt2 * std::cos(a + map.phases()(k - 1));
      s(1, k - 1) = kSqrt2 * std::sin(a);
    }
    return s;
  };
  CHECK(gram_deviation(corrupted, 4, 18) > 1e-3);
}

TEST_CASE("time-slice singular values") {
  const auto flat = time_slice_singular_values(AndrewsMap::identity(4, PhasePolicy::none), 0.0);
  CHECK(flat.s_max == doctest::Approx(kSqrt2).epsilon(1e-15));
  CHECK(flat.s_min == doctest::Approx(0.0));

  const double eps = tour_epsilon(64);
  const AndrewsMap q64 = AndrewsMap::identity(64, PhasePolicy::quadratic);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sv = time_slice_singular_values(q64, unit(rng));
    CHECK(sv.s_min >= std::sqrt(1 - eps));
    CHECK(sv.s_max <= std::sqrt(1 + eps));
  }

  // Trace identity and agreement with a direct SVD on arbitrary maps.
  for (int d : {1, 2, 5, 17}) {
    const AndrewsMap map(random_orthogonal(rng, d).transpose(), PhasePolicy::quadratic);
    for (int trial = 0; trial < 20; ++trial) {
      const double t = unit(rng);
      const auto sv = time_slice_singular_values(map, t);
      CHECK(sv.s_max * sv.s_max + sv.s_min * sv.s_min == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(sv.s_max >= sv.s_min);
      const Eigen::VectorXd direct =
          Eigen::JacobiSVD<Eigen::MatrixXd>(map.time_slice(t) / std::sqrt(double(d))).singularValues();
      CHECK(std::abs(sv.s_max - direct(0)) < 1e-12);
      CHECK(std::abs(sv.s_min - (direct.size() > 1 ? direct(1) : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("unphased maps degenerate; quadratic phases do not") {
  for (int d : {4, 8, 16}) CHECK(min_s_min(AndrewsMap::identity(d, PhasePolicy::none), 4096) < 0.05);
  CHECK(min_s_min(AndrewsMap::identity(64, PhasePolicy::quadratic), 4096) > std::sqrt(1 - tour_epsilon(64)));
}

TEST_CASE("tour epsilon") {
  CHECK(tour_epsilon(4) == doctest::Approx(2.4375).epsilon(1e-15));
  CHECK(tour_epsilon(25) == doctest::Approx(0.8616).epsilon(1e-12));
  CHECK(tour_epsilon(64) == doctest::Approx(0.5237).epsilon(1e-4));
  CHECK(tour_epsilon(18) >= 1.0);
  CHECK(tour_epsilon(19) < 1.0);
  CHECK(tour_epsilon(1 << 30) < 2e-4);
  CHECK_THROWS_AS(tour_epsilon(0), InvalidArgument);
}

TEST_CASE("invalid maps are rejected") {
  CHECK_THROWS_AS(AndrewsMap(Eigen::MatrixXd::Ones(2, 2), PhasePolicy::none), InvalidArgument);
  CHECK_THROWS_AS(AndrewsMap(Eigen::MatrixXd::Identity(2, 2), PhasePolicy::custom), InvalidArgument);
  CHECK_THROWS_AS(AndrewsMap(Eigen::MatrixXd::Identity(2, 2), {0, 1}, Eigen::VectorXd::Zero(2)), InvalidArgument);
  CHECK_THROWS_AS(parse_phase_policy("cubic"), InvalidArgument);
}
