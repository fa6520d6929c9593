#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "andrews3d/andrews_map.hpp"
#include "andrews3d/bishop.hpp"

namespace andrews3d {

using Rgb = std::array<std::uint8_t, 3>;

/// Categorical palette used for labelled geometry; label i (in order of first
/// appearance) gets entry i mod 10, unlabelled data gets entry 0.
inline constexpr std::array<Rgb, 10> kPalette{{
    {31, 119, 180},
    {255, 127, 14},
    {44, 160, 44},
    {214, 39, 40},
    {148, 103, 189},
    {140, 86, 75},
    {227, 119, 194},
    {127, 127, 127},
    {188, 189, 34},
    {23, 190, 207},
}};

/// Palette index per item; all zero when labels is empty.
std::vector<std::size_t> palette_indices(std::span<const std::string> labels, std::size_t count);

/// ASCII PLY: one vertex per filament point (x, y, z float; red, green, blue
/// uchar) and one edge per consecutive pair within a filament.
void write_ply(std::span<const Filament> filaments, std::span<const std::string> labels, std::ostream& out);
void write_ply(std::span<const Filament> filaments, std::span<const std::string> labels,
               const std::filesystem::path& path);

inline constexpr int kCurvesSchemaVersion = 1;

void write_curves_json(std::span<const PlaneCurveSamples> curves, std::span<const std::string> labels, int d,
                       std::ostream& out);
void write_curves_json(std::span<const PlaneCurveSamples> curves, std::span<const std::string> labels, int d,
                       const std::filesystem::path& path);
void write_curves_json(std::span<const Filament> filaments, std::span<const std::string> labels, int d,
                       std::ostream& out);
void write_curves_json(std::span<const Filament> filaments, std::span<const std::string> labels, int d,
                       const std::filesystem::path& path);

struct CurvesDocument {
  int schema_version = 0;
  std::string kind;  // "andrews" or "filament"
  int d = 0;
  int n = 0;
  int samples = 0;
  struct Curve {
    std::optional<std::string> label;
    std::vector<std::vector<double>> points;
  };
  std::vector<Curve> curves;
};

CurvesDocument read_curves_json(std::istream& in);
CurvesDocument read_curves_json(const std::filesystem::path& path);

struct FilamentSummary {
  std::size_t index = 0;
  double length = 0.0;
  double total_square_curvature = 0.0;
  double expected_square_curvature = 0.0;
  double identity_residual = 0.0;
  double max_orthogonality_error = 0.0;
};

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunReport {
  std::string tool_version;
  std::string created_at;
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;

  // dataset
  long d = 0;
  long n = 0;
  std::string standardization;
  std::string std_convention;
  std::size_t label_count = 0;

  // map
  std::string phase_policy;
  double epsilon = 0.0;
  bool epsilon_vacuous = true;
  std::string tie_partition;
  std::vector<double> singular_values;

  // metrics
  int samples = 0;
  double mqv = 0.0;
  double mqv_closed_form = 0.0;
  double gram_deviation = 0.0;
  double slice_s_min = 0.0;
  double slice_s_max = 0.0;
  int gauss_theta_samples = 0;
  double gauss_max_ratio = 0.0;
  double gauss_max_magnitude = 0.0;

  // filaments
  int steps = 0;
  std::vector<FilamentSummary> filaments;

  std::vector<CheckOutcome> checks;
};

/// Pretty-printed JSON with a fixed key order.
std::string report_to_json(const RunReport& report);
void write_report(const RunReport& report, const std::filesystem::path& path);

}  // namespace andrews3d
