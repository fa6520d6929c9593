#include "andrews3d/validation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "andrews3d/andrews_map.hpp"
#include "andrews3d/bishop.hpp"
#include "andrews3d/errors.hpp"
#include "andrews3d/gauss_sum.hpp"
#include "andrews3d/pipeline.hpp"
#include "andrews3d/spectral.hpp"

namespace andrews3d {
namespace {

using Rng = std::mt19937_64;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(const char* format, double a) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), format, a);
  return buf;
}

std::string fmt2(const char* format, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

Dataset dataset_from(Eigen::MatrixXd values) {
  Dataset ds;
  ds.values = std::move(values);
  return ds;
}

// ---- andrews ---------------------------------------------------------------

void check_optimality(Rng& rng, std::vector<CheckOutcome>& out) {
  double worst = 0.0;
  double smallest_excess = std::numeric_limits<double>::infinity();
  bool swap_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = uniform_int(rng, 2, 16);
    const int n = uniform_int(rng, d, 100);
    const Dataset ds = dataset_from(gaussian_matrix(rng, d, n));
    const SvdFactors f = svd(ds);
    const double closed = mqv_closed_form(f.sigma);
    const double got = mqv_of_map(build_map(f, PhasePolicy::quadratic), ds);
    worst = std::max(worst, std::abs(got - closed) / closed);

    for (Eigen::Index k = 0; k + 1 < d; ++k) {
      if (f.sigma(k) - f.sigma(k + 1) <= 1e-9 * f.sigma(0)) continue;
      std::vector<int> freq(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) freq[static_cast<std::size_t>(j)] = j + 1;
      std::swap(freq[static_cast<std::size_t>(k)], freq[static_cast<std::size_t>(k + 1)]);
      const AndrewsMap swapped(f.u.transpose(), freq, Eigen::VectorXd::Zero(d));
      const double excess = (mqv_of_map(swapped, ds) - closed) / closed;
      smallest_excess = std::min(smallest_excess, excess);
      swap_ok = swap_ok && excess > 0.0;
      break;
    }
  }
  out.push_back({"andrews/mqv_optimality", worst <= 1e-9, fmt("max rel err %.2e over 50 datasets", worst)});
  out.push_back({"andrews/frequency_swap_increases_mqv", swap_ok,
                 fmt("min relative excess %.3e", smallest_excess)});
}

void check_isometry(Rng& rng, const std::vector<int>& dims, std::vector<CheckOutcome>& out) {
  double worst_gram = 0.0;
  for (int d : dims) {
    const SvdFactors f = svd(gaussian_matrix(rng, d, d + 5));
    worst_gram = std::max(worst_gram, gram_deviation(build_map(f, PhasePolicy::quadratic), min_sample_count(d)));
    worst_gram = std::max(worst_gram, gram_deviation(AndrewsMap::identity(d, PhasePolicy::none), min_sample_count(d)));
  }
  out.push_back({"andrews/gram_deviation", worst_gram < 1e-9, fmt("max %.2e at M=4d+2", worst_gram)});

  double worst = 0.0;
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = dims[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(dims.size()) - 1))];
    const AndrewsMap map = build_map(svd(gaussian_matrix(rng, d, d + 3)), PhasePolicy::quadratic);
    const Eigen::VectorXd x = gaussian_matrix(rng, d, 1);
    const double a = angle(rng);
    const Eigen::Vector2d u(std::cos(a), std::sin(a));
    const int m = min_sample_count(d);
    const PlaneCurveSamples s = evaluate_curve(map, x, m);
    const double quad = (u.transpose() * s.points).squaredNorm() / m;
    worst = std::max(worst, std::abs(quad - x.squaredNorm()) / x.squaredNorm());
  }
  out.push_back({"andrews/directional_isometry", worst < 1e-9, fmt("max rel err %.2e over 100 (x,u)", worst)});
}

void check_tour(const std::vector<int>& dims, std::vector<CheckOutcome>& out) {
  constexpr int kTimes = 10000;
  for (int d : dims) {
    const double eps = tour_epsilon(d);
    if (eps >= 1.0) continue;
    const AndrewsMap map = AndrewsMap::identity(d, PhasePolicy::quadratic);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < kTimes; ++i) {
      const auto sv = time_slice_singular_values(map, static_cast<double>(i) / kTimes);
      lo = std::min(lo, sv.s_min);
      hi = std::max(hi, sv.s_max);
    }
    const bool ok = lo >= std::sqrt(1.0 - eps) && hi <= std::sqrt(1.0 + eps);
    out.push_back({"andrews/tour_interval_d" + std::to_string(d), ok,
                   fmt2("singular values in [%.4f, %.4f]", lo, hi) +
                       fmt2(" within [%.4f, %.4f]", std::sqrt(1.0 - eps), std::sqrt(1.0 + eps))});
  }
  const AndrewsMap baseline = AndrewsMap::identity(4, PhasePolicy::none);
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kTimes; ++i) {
    lo = std::min(lo, time_slice_singular_values(baseline, static_cast<double>(i) / kTimes).s_min);
  }
  out.push_back({"andrews/unphased_baseline_degenerates_d4", lo < 0.05, fmt("min s_min %.3e", lo)});
}

void check_phase_invariance(Rng& rng, std::vector<CheckOutcome>& out) {
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int d = uniform_int(rng, 2, 16);
    const Dataset ds = dataset_from(gaussian_matrix(rng, d, uniform_int(rng, d, 60)));
    const SvdFactors f = svd(ds);
    const AndrewsMap q = build_map(f, PhasePolicy::quadratic);
    const AndrewsMap z = build_map(f, PhasePolicy::none);
    const double a = mqv_of_map(q, ds);
    const double b = mqv_of_map(z, ds);
    worst = std::max(worst, std::abs(a - b) / std::max(a, 1.0));
    worst = std::max(worst, std::abs(gram_deviation(q, min_sample_count(d)) - gram_deviation(z, min_sample_count(d))));
  }
  out.push_back({"andrews/phase_invariance", worst <= 1e-12, fmt("max difference %.2e", worst)});
}

// ---- gauss -----------------------------------------------------------------

void check_gauss_bound(const std::vector<int>& dims, std::vector<CheckOutcome>& out) {
  for (int d : dims) {
    try {
      const GaussSumReport r = verify_bound(d, 4096);
      out.push_back({"gauss/bound_d" + std::to_string(d), r.max_ratio <= 1.0, fmt("max_ratio %.4f", r.max_ratio)});
      const double root = std::sqrt(static_cast<double>(d));
      out.push_back({"gauss/max_at_least_sqrt_d_d" + std::to_string(d), r.max_magnitude >= root,
                     fmt2("max |S| %.3f vs sqrt(d) %.3f", r.max_magnitude, root)});
    } catch (const ValidationError& e) {
      out.push_back({"gauss/bound_d" + std::to_string(d), false, e.what()});
    }
  }
}

void check_perturbation(Rng& rng, std::vector<CheckOutcome>& out) {
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = uniform_int(rng, 1, 32);
    std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
    double mass = 0.0;
    for (auto& zk : z) {
      zk = {normal(rng), normal(rng)};
      mass += std::norm(zk);
    }
    for (auto& zk : z) zk *= std::sqrt(2.0 / mass);
    const SingularPair formula = perturb_singular_values(z);

    Eigen::MatrixXd m(2, n);
    for (int k = 0; k < n; ++k) {
      m(0, k) = z[static_cast<std::size_t>(k)].real();
      m(1, k) = z[static_cast<std::size_t>(k)].imag();
    }
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
    const double smin = s.size() > 1 ? s(1) : 0.0;
    worst = std::max({worst, std::abs(formula.s_max - s(0)), std::abs(formula.s_min - smin)});
  }
  out.push_back({"gauss/perturbation_lemma_vs_svd", worst < 1e-10, fmt("max abs err %.2e over 1000 tuples", worst)});
}

void check_slice_reduction(Rng& rng, std::vector<CheckOutcome>& out) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_sv = 0.0;
  double worst_sum = 0.0;
  for (int d : {1, 3, 16, 25, 64, 128}) {
    const AndrewsMap map = AndrewsMap::identity(d, PhasePolicy::quadratic);
    for (int trial = 0; trial < 20; ++trial) {
      const double t = unit(rng);
      const Eigen::Matrix2Xd slice = map.time_slice(t);
      std::vector<std::complex<double>> z(static_cast<std::size_t>(d));
      std::complex<double> square_sum = 0.0;
      for (int k = 0; k < d; ++k) {
        const std::complex<double> zk(slice(0, k) / std::numbers::sqrt2, slice(1, k) / std::numbers::sqrt2);
        square_sum += zk * zk;
        z[static_cast<std::size_t>(k)] = std::sqrt(2.0 / d) * zk;
      }
      const SingularPair a = time_slice_singular_values(map, t);
      const SingularPair b = perturb_singular_values(z);
      worst_sv = std::max({worst_sv, std::abs(a.s_max - b.s_max), std::abs(a.s_min - b.s_min)});
      double theta = 2.0 * t;
      theta -= std::floor(theta);
      worst_sum = std::max(worst_sum, std::abs(gauss_sum(d, 1.0 / d, theta) - square_sum));
    }
  }
  out.push_back({"gauss/slice_values_match_lemma", worst_sv < 1e-10, fmt("max abs err %.2e", worst_sv)});
  out.push_back({"gauss/column_squares_are_gauss_sum", worst_sum < 1e-10, fmt("max abs err %.2e", worst_sum)});
}

// ---- bishop ----------------------------------------------------------------

double tangent_error(const FrameTrajectory& traj, const std::function<Eigen::Vector3d(double)>& exact) {
  double err = 0.0;
  for (std::size_t i = 0; i < traj.frames.size(); ++i) {
    err = std::max(err, (traj.tangent(i) - exact(static_cast<double>(i) * traj.step_size)).cwiseAbs().maxCoeff());
  }
  return err;
}

std::string order_detail(const std::vector<int>& steps, const std::vector<double>& errors) {
  std::string s;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) s += ' ';
    s += "M=" + std::to_string(steps[i]) + fmt(":%.2e", errors[i]);
  }
  return s;
}

void check_order(const std::string& name, const std::vector<int>& steps, const std::vector<double>& errors,
                 double max_ortho, std::vector<CheckOutcome>& out) {
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < errors.size(); ++i) min_ratio = std::min(min_ratio, errors[i - 1] / errors[i]);
  const double order = std::log2(min_ratio);
  out.push_back({name, min_ratio >= 6.5 && order >= 2.7,
                 fmt2("min ratio %.3f, observed order %.3f; ", min_ratio, order) + order_detail(steps, errors)});
  out.push_back({name + "_orthogonality", max_ortho < 1e-10, fmt("max |FF^T - I| %.2e", max_ortho)});
}

void check_bishop(Rng& rng, unsigned threads, std::vector<CheckOutcome>& out) {
  const std::vector<int> steps{64, 128, 256, 512};

  // Constant generator: analytic circle T(t) = (cos 2 pi t, sin 2 pi t, 0).
  {
    std::vector<double> errors;
    double ortho = 0.0;
    for (int m : steps) {
      const auto traj = integrate_frame([](double) { return Eigen::Vector2d(kTwoPi, 0.0); }, m);
      errors.push_back(tangent_error(traj, [](double t) {
        return Eigen::Vector3d(std::cos(kTwoPi * t), std::sin(kTwoPi * t), 0.0);
      }));
      ortho = std::max(ortho, traj.max_orthogonality_error());
    }
    check_order("bishop/circle_order", steps, errors, ortho, out);
  }

  // Time-varying generator from an Andrews curve, against a fine-step reference.
  {
    const AndrewsMap map = AndrewsMap::identity(3, PhasePolicy::quadratic);
    const PlaneCurve curve = map.curve(Eigen::Vector3d(1.2, -0.7, 0.4));
    const PlaneFn phi = [&curve](double t) { return curve.value(t); };
    constexpr int kReference = 16384;
    const auto ref = integrate_frame(phi, kReference);
    std::vector<double> errors;
    double ortho = ref.max_orthogonality_error();
    for (int m : steps) {
      const auto traj = integrate_frame(phi, m);
      const int stride = kReference / m;
      double err = 0.0;
      for (int i = 0; i <= m; ++i) {
        err = std::max(err, (traj.tangent(static_cast<std::size_t>(i)) -
                             ref.tangent(static_cast<std::size_t>(i * stride))).cwiseAbs().maxCoeff());
      }
      errors.push_back(err);
      ortho = std::max(ortho, traj.max_orthogonality_error());
    }
    check_order("bishop/andrews_curve_order", steps, errors, ortho, out);
  }

  // Filament invariants on an Iris-sized synthetic dataset.
  {
    const Dataset raw = dataset_from(gaussian_matrix(rng, 4, 150));
    PipelineOptions opt;
    opt.samples = 1024;
    opt.threads = threads;
    opt.gauss_theta_samples = 64;
    const FilamentRun run = run_filaments(raw, opt);
    for (const auto& c : run.andrews.report.checks) {
      if (c.name.rfind("filament", 0) == 0 || c.name.rfind("total_square", 0) == 0 ||
          c.name.rfind("curvature", 0) == 0 || c.name.rfind("frame", 0) == 0) {
        out.push_back({"bishop/" + c.name, c.passed, c.detail});
      }
    }
  }
}

std::vector<int> dims_or(const std::vector<int>& requested, std::vector<int> fallback) {
  return requested.empty() ? fallback : requested;
}

}  // namespace

std::vector<CheckOutcome> run_validation(const ValidationOptions& options) {
  const auto& suite = options.suite;
  if (suite != "all" && suite != "andrews" && suite != "bishop" && suite != "gauss") {
    throw InvalidArgument("unknown suite '" + suite + "' (expected all, andrews, bishop or gauss)");
  }
  for (int d : options.d_list) {
    if (d < 1) throw InvalidArgument("--d-list entries must be positive");
  }
  Rng rng(options.seed);
  std::vector<CheckOutcome> out;
  if (suite == "all" || suite == "andrews") {
    std::vector<int> all_dims(64);
    for (int d = 1; d <= 64; ++d) all_dims[static_cast<std::size_t>(d - 1)] = d;
    check_optimality(rng, out);
    check_isometry(rng, dims_or(options.d_list, all_dims), out);
    check_tour(dims_or(options.d_list, {25, 64, 128}), out);
    check_phase_invariance(rng, out);
  }
  if (suite == "all" || suite == "gauss") {
    check_gauss_bound(dims_or(options.d_list, {1, 16, 256, 4096}), out);
    check_perturbation(rng, out);
    check_slice_reduction(rng, out);
  }
  if (suite == "all" || suite == "bishop") {
    check_bishop(rng, options.threads, out);
  }
  return out;
}

std::string format_validation_table(const std::vector<CheckOutcome>& checks) {
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::string s;
  std::size_t failed = 0;
  for (const auto& c : checks) {
    s += c.passed ? "PASS  " : "FAIL  ";
    s += c.name;
    s.append(width - c.name.size() + 2, ' ');
    s += c.detail;
    s += '\n';
    if (!c.passed) ++failed;
  }
  s += std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " checks passed\n";
  return s;
}

}  // namespace andrews3d
