#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "andrews3d/errors.hpp"
#include "andrews3d/spectral.hpp"

using namespace andrews3d;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal(rng);
  return m;
}

double orthogonality_error(const Eigen::MatrixXd& q) {
  return (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

void check_factors(const Eigen::MatrixXd& x, const SvdFactors& f) {
  CHECK(orthogonality_error(f.u) < 1e-10);
  CHECK(orthogonality_error(f.v) < 1e-10);
  for (Eigen::Index k = 0; k + 1 < f.sigma.size(); ++k) CHECK(f.sigma(k) >= f.sigma(k + 1));
  CHECK(f.sigma.minCoeff() >= 0.0);
  const Eigen::MatrixXd rebuilt = f.u * f.sigma.asDiagonal() * f.v.transpose();
  CHECK((x - rebuilt).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + x.cwiseAbs().maxCoeff()));
  // Sign convention: the largest-magnitude entry of every column of U is positive.
  for (Eigen::Index j = 0; j < f.u.cols(); ++j) {
    Eigen::Index pivot;
    f.u.col(j).cwiseAbs().maxCoeff(&pivot);
    CHECK(f.u(pivot, j) > 0.0);
  }
  // Tie partition covers [0, d) with ordered, disjoint ranges.
  std::size_t next = 0;
  for (const auto& r : f.ties) {
    CHECK(r.first == next);
    CHECK(r.last >= r.first);
    next = r.last + 1;
  }
  CHECK(next == static_cast<std::size_t>(f.sigma.size()));
}

}  // namespace

TEST_CASE("identity matrix has one tie block") {
  const SvdFactors f = svd(Eigen::MatrixXd::Identity(3, 3));
  CHECK((f.sigma - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE(f.ties.size() == 1);
  CHECK(f.ties[0] == TieRange{0, 2});
  CHECK(format_ties(f.ties) == "[1,3]");
}

TEST_CASE("diagonal matrix") {
  const Eigen::MatrixXd x = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const SvdFactors f = svd(x);
  CHECK((f.sigma - Eigen::Vector3d(3, 2, 1)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.u - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(f.ties.size() == 3);
  check_factors(x, f);
}

TEST_CASE("random 4x50 reconstruction") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd x = random_matrix(rng, 4, 50);
  check_factors(x, svd(x));
}

TEST_CASE("reconstruction and orthogonality on 100 random shapes") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = std::uniform_int_distribution<int>(2, 32)(rng);
    const int n = std::uniform_int_distribution<int>(d, 200)(rng);
    const Eigen::MatrixXd x = random_matrix(rng, d, n);
    check_factors(x, svd(x));
  }
}

TEST_CASE("rank-deficient input still yields a full orthogonal U") {
  std::mt19937_64 rng(8);
  Eigen::MatrixXd x = random_matrix(rng, 5, 20);
  x.row(3) = x.row(0) + x.row(1);
  x.row(4).setZero();
  const SvdFactors f = svd(x);
  check_factors(x, f);
  CHECK(f.sigma(4) < 1e-12);
  CHECK(f.u.rows() == 5);
  CHECK(f.u.cols() == 5);
}

TEST_CASE("singular values are invariant under orthogonal transforms") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 10;
    const Eigen::MatrixXd x = random_matrix(rng, d, d + 7);
    const Eigen::MatrixXd w = Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(rng, d, d)).householderQ();
    CHECK((svd(w * x).sigma - svd(x).sigma).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("svd preconditions") {
  CHECK_THROWS_AS(svd(Eigen::MatrixXd::Ones(3, 2)), InvalidArgument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 3);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(svd(bad), InvalidArgument);
}

TEST_CASE("svd is deterministic") {
  std::mt19937_64 rng(99);
  const Eigen::MatrixXd x = random_matrix(rng, 6, 40);
  const SvdFactors a = svd(x);
  const SvdFactors b = svd(x);
  CHECK(a.u == b.u);
  CHECK(a.sigma == b.sigma);
  CHECK(a.v == b.v);
}

TEST_CASE("group_ties") {
  const std::vector<double> exact{5, 5, 2};
  CHECK(group_ties(exact, 1e-9) == std::vector<TieRange>{{0, 1}, {2, 2}});
  const std::vector<double> distinct{3, 2, 1};
  CHECK(group_ties(distinct, 1e-9) == std::vector<TieRange>{{0, 0}, {1, 1}, {2, 2}});
  const std::vector<double> near{1 + 5e-10, 1, 0.5};
  CHECK(group_ties(near, 1e-9) == std::vector<TieRange>{{0, 1}, {2, 2}});
  const std::vector<double> outside{1 + 2e-9, 1, 0.5};
  CHECK(group_ties(outside, 1e-9).size() == 3);
  // Chaining: each step is within tolerance even though the ends are not.
  const std::vector<double> chain{1 + 1.6e-9, 1 + 0.8e-9, 1};
  CHECK(group_ties(chain, 1e-9) == std::vector<TieRange>{{0, 2}});
  CHECK(group_ties(std::vector<double>{}, 1e-9).empty());
  // Small singular values use an absolute floor of rel_tol.
  const std::vector<double> tiny{1e-3, 1e-3 - 5e-10};
  CHECK(group_ties(tiny, 1e-9).size() == 1);
}
