#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "andrews3d/andrews_map.hpp"
#include "andrews3d/bishop.hpp"
#include "andrews3d/dataset.hpp"
#include "andrews3d/export.hpp"
#include "andrews3d/spectral.hpp"

namespace andrews3d {

inline constexpr const char* kToolVersion = "1.0.0";

struct PipelineOptions {
  StandardizePolicy standardize = StandardizePolicy::zscore;
  ConstantRowPolicy constant_rows = ConstantRowPolicy::error;
  PhasePolicy phases = PhasePolicy::quadratic;
  int samples = 0;  // 0 selects max(1024, 4d + 2)
  int steps = 0;    // 0 selects `samples`
  unsigned threads = 1;
  int gauss_theta_samples = 1024;
};

/// Everything computed for the plane curves of a dataset.
struct AndrewsRun {
  Dataset data;
  SvdFactors factors;
  AndrewsMap map;
  std::vector<PlaneCurveSamples> curves;
  RunReport report;
};

struct FilamentRun {
  AndrewsRun andrews;
  std::vector<Filament> filaments;
};

/// Standardizes, factors and builds the map, samples every curve, and fills
/// the report metrics plus in-line invariant checks. Throws InvalidArgument
/// when the sample count is below 4d + 2.
AndrewsRun run_andrews(const Dataset& raw, const PipelineOptions& options);

/// run_andrews() followed by one filament per data point.
FilamentRun run_filaments(const Dataset& raw, const PipelineOptions& options);

/// True when every in-line check in the report passed.
bool all_checks_passed(const RunReport& report);

}  // namespace andrews3d
