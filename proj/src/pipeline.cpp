#include "andrews3d/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "andrews3d/errors.hpp"
#include "andrews3d/gauss_sum.hpp"
#include "andrews3d/parallel.hpp"
#include "number_format.hpp"

namespace andrews3d {
namespace {

bool close_rel(double a, double b, double tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * scale || scale < std::numeric_limits<double>::min();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

void add_check(RunReport& r, std::string name, bool ok, std::string detail) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

}  // namespace

AndrewsRun run_andrews(const Dataset& raw, const PipelineOptions& options) {
  Dataset data = standardize(raw, options.standardize, options.constant_rows);
  const auto d = data.dim();
  const int samples = options.samples > 0 ? options.samples : default_sample_count(d);
  if (samples < min_sample_count(d)) {
    throw InvalidArgument("--samples " + std::to_string(samples) + " is below the 4d+2 rule (d=" +
                          std::to_string(d) + " needs at least " + std::to_string(min_sample_count(d)) + ")");
  }
  SvdFactors factors = svd(data);
  AndrewsMap map = build_map(factors, options.phases);

  std::vector<PlaneCurveSamples> curves(static_cast<std::size_t>(data.size()));
  parallel_for(curves.size(), options.threads, [&](std::size_t n) {
    curves[n] = evaluate_curve(map, data.values.col(static_cast<Eigen::Index>(n)), samples);
  });

  RunReport r;
  r.tool_version = kToolVersion;
  r.d = static_cast<long>(d);
  r.n = static_cast<long>(data.size());
  r.standardization = to_string(data.standardization.policy);
  r.std_convention = to_string(data.standardization.convention);
  r.label_count = distinct_labels(data.labels).size();
  r.phase_policy = to_string(options.phases);
  r.epsilon = tour_epsilon(static_cast<int>(d));
  r.epsilon_vacuous = r.epsilon >= 1.0;
  r.tie_partition = format_ties(factors.ties);
  r.singular_values.assign(factors.sigma.data(), factors.sigma.data() + factors.sigma.size());
  r.samples = samples;

  r.mqv = mqv_of_map(map, data);
  r.mqv_closed_form = mqv_closed_form(factors.sigma);
  add_check(r, "mqv_equals_closed_form", close_rel(r.mqv, r.mqv_closed_form, 1e-9),
            "mqv=" + detail::format_number(r.mqv, 12) + " closed_form=" + detail::format_number(r.mqv_closed_form, 12));

  r.gram_deviation = gram_deviation(map, samples);
  add_check(r, "gram_deviation", r.gram_deviation < 1e-9, sci(r.gram_deviation));

  r.slice_s_min = std::numeric_limits<double>::infinity();
  r.slice_s_max = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto sv = time_slice_singular_values(map, static_cast<double>(i) / samples);
    r.slice_s_min = std::min(r.slice_s_min, sv.s_min);
    r.slice_s_max = std::max(r.slice_s_max, sv.s_max);
  }
  if (options.phases == PhasePolicy::quadratic && !r.epsilon_vacuous) {
    const bool ok = r.slice_s_min >= std::sqrt(1.0 - r.epsilon) && r.slice_s_max <= std::sqrt(1.0 + r.epsilon);
    add_check(r, "slice_singular_value_interval", ok,
              "[" + sci(r.slice_s_min) + ", " + sci(r.slice_s_max) + "] eps=" + sci(r.epsilon));
  }

  r.gauss_theta_samples = options.gauss_theta_samples;
  try {
    const auto g = verify_bound(static_cast<int>(d), options.gauss_theta_samples);
    r.gauss_max_ratio = g.max_ratio;
    r.gauss_max_magnitude = g.max_magnitude;
    add_check(r, "gauss_sum_bound", true, "max_ratio=" + sci(g.max_ratio));
  } catch (const ValidationError& e) {
    add_check(r, "gauss_sum_bound", false, e.what());
  }

  double worst_norm = 0.0;
  double worst_mean = 0.0;
  for (const auto& c : curves) {
    const double quad = c.points.squaredNorm() / c.samples;
    const double expected = 2.0 * c.source_norm * c.source_norm;
    if (expected > 0.0) worst_norm = std::max(worst_norm, std::abs(quad - expected) / expected);
    const double mean = (c.points.rowwise().sum() / c.samples).norm();
    if (c.source_norm > 0.0) worst_mean = std::max(worst_mean, mean / c.source_norm);
  }
  add_check(r, "curve_l2_norm_is_2_norm_x_squared", worst_norm < 1e-9, sci(worst_norm));
  add_check(r, "curve_zero_mean", worst_mean < 1e-9, sci(worst_mean));

  return AndrewsRun{std::move(data), std::move(factors), std::move(map), std::move(curves), std::move(r)};
}

FilamentRun run_filaments(const Dataset& raw, const PipelineOptions& options) {
  FilamentRun out{run_andrews(raw, options), {}};
  auto& run = out.andrews;
  const int steps = options.steps > 0 ? options.steps : run.report.samples;
  if (steps < min_sample_count(run.data.dim())) {
    throw InvalidArgument("--steps " + std::to_string(steps) + " is below the 4d+2 rule (needs at least " +
                          std::to_string(min_sample_count(run.data.dim())) + ")");
  }

  out.filaments.resize(static_cast<std::size_t>(run.data.size()));
  std::vector<FilamentDiagnostics> diags(out.filaments.size());
  parallel_for(out.filaments.size(), options.threads, [&](std::size_t n) {
    const PlaneCurve curve = run.map.curve(run.data.values.col(static_cast<Eigen::Index>(n)));
    out.filaments[n] = build_filament(curve, steps);
    diags[n] = diagnose(out.filaments[n]);
  });

  auto& r = run.report;
  r.steps = steps;
  double worst_length = 0.0;
  double worst_curv = 0.0;
  double worst_identity = 0.0;
  double worst_ortho = 0.0;
  for (std::size_t n = 0; n < diags.size(); ++n) {
    const auto& g = diags[n];
    r.filaments.push_back({n, g.length, g.total_square_curvature, g.expected_square_curvature, g.identity_residual,
                           g.max_orthogonality_error});
    worst_length = std::max(worst_length, std::abs(g.length - 1.0));
    if (g.expected_square_curvature > 0.0) {
      worst_curv = std::max(worst_curv, std::abs(g.total_square_curvature - g.expected_square_curvature) /
                                            g.expected_square_curvature);
    }
    worst_identity = std::max(worst_identity, g.identity_residual);
    worst_ortho = std::max(worst_ortho, g.max_orthogonality_error);
  }
  add_check(r, "filament_length_is_1", worst_length < 1e-12, sci(worst_length));
  add_check(r, "total_square_curvature_is_2_norm_x_squared", worst_curv < 1e-6, sci(worst_curv));
  add_check(r, "curvature_torsion_identity", worst_identity < 1e-6, sci(worst_identity));
  add_check(r, "frame_orthogonality", worst_ortho < 1e-10, sci(worst_ortho));
  return out;
}

bool all_checks_passed(const RunReport& report) {
  return std::all_of(report.checks.begin(), report.checks.end(), [](const CheckOutcome& c) { return c.passed; });
}

}  // namespace andrews3d
