#include "andrews3d/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "andrews3d/errors.hpp"

namespace andrews3d {

std::vector<TieRange> group_ties(std::span<const double> sigma, double rel_tol) {
  std::vector<TieRange> ties;
  if (sigma.empty()) return ties;
  if (rel_tol < 0.0) throw InvalidArgument("tie tolerance must be nonnegative");
  const double gap = rel_tol * std::max(sigma.front(), 1.0);
  TieRange run{0, 0};
  for (std::size_t k = 0; k + 1 < sigma.size(); ++k) {
    if (sigma[k] - sigma[k + 1] <= gap) {
      run.last = k + 1;
    } else {
      ties.push_back(run);
      run = {k + 1, k + 1};
    }
  }
  ties.push_back(run);
  return ties;
}

SvdFactors svd(const Eigen::MatrixXd& x, double tie_rel_tol) {
  const auto d = x.rows();
  const auto n = x.cols();
  if (d < 1 || n < 1) throw InvalidArgument("svd of an empty matrix");
  if (d > n) {
    throw InvalidArgument("svd requires d <= N (got d=" + std::to_string(d) + ", N=" + std::to_string(n) + ")");
  }
  if (!x.allFinite()) throw InvalidArgument("svd input has non-finite entries");

  Eigen::JacobiSVD<Eigen::MatrixXd> solver(x, Eigen::ComputeFullU | Eigen::ComputeThinV);

  SvdFactors f;
  f.u = solver.matrixU();
  f.sigma = solver.singularValues();
  f.v = solver.matrixV();

  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double a = std::abs(f.u(i, j));
      if (a > best) {
        best = a;
        pivot = i;
      }
    }
    if (f.u(pivot, j) < 0.0) {
      f.u.col(j) *= -1.0;
      f.v.col(j) *= -1.0;
    }
  }

  f.ties = group_ties(std::span<const double>(f.sigma.data(), static_cast<std::size_t>(f.sigma.size())),
                      tie_rel_tol);
  return f;
}

SvdFactors svd(const Dataset& ds, double tie_rel_tol) {
  ds.validate();
  return svd(ds.values, tie_rel_tol);
}

std::string format_ties(const std::vector<TieRange>& ties) {
  std::string out;
  for (const auto& r : ties) {
    if (!out.empty()) out += ',';
    out += '[' + std::to_string(r.first + 1) + ',' + std::to_string(r.last + 1) + ']';
  }
  return out;
}

}  // namespace andrews3d
