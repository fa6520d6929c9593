#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "andrews3d/dataset.hpp"

namespace andrews3d {

/// Inclusive 0-based index range of singular values that are tied.
struct TieRange {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last - first + 1; }
  bool operator==(const TieRange&) const = default;
};

inline constexpr double kDefaultTieTolerance = 1e-9;

/// X = U diag(sigma) V^T with full square U and thin V.
struct SvdFactors {
  Eigen::MatrixXd u;      // d x d, orthogonal
  Eigen::VectorXd sigma;  // length d, non-increasing
  Eigen::MatrixXd v;      // N x d, orthonormal columns
  std::vector<TieRange> ties;

  Eigen::Index dim() const { return u.rows(); }
};

/// Requires d <= N and finite entries. Column signs are fixed so that the
/// largest-magnitude entry of every column of U is positive (lowest row wins
/// ties), which makes the result reproducible.
SvdFactors svd(const Eigen::MatrixXd& x, double tie_rel_tol = kDefaultTieTolerance);
SvdFactors svd(const Dataset& ds, double tie_rel_tol = kDefaultTieTolerance);

/// Maximal runs with sigma[k] - sigma[k+1] <= rel_tol * max(sigma[0], 1).
std::vector<TieRange> group_ties(std::span<const double> sigma, double rel_tol = kDefaultTieTolerance);

/// "[1,2],[3,3]" using 1-based indices.
std::string format_ties(const std::vector<TieRange>& ties);

}  // namespace andrews3d
