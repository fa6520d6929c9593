#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace andrews3d {

enum class StandardizePolicy { none, center, zscore };
enum class ConstantRowPolicy { error, zero };

/// Divisor used for the per-feature standard deviation.
enum class StdConvention { population, sample };

/// What standardize() did to each feature row. The original values are
/// recovered exactly as mean[k] + scale[k] * value.
struct Standardization {
  StandardizePolicy policy = StandardizePolicy::none;
  StdConvention convention = StdConvention::population;
  std::vector<double> mean;
  std::vector<double> scale;
  std::vector<bool> constant_row;
};

/// Column-major data: `values` is d x N, one column per data point.
struct Dataset {
  Eigen::MatrixXd values;
  std::vector<std::string> labels;         // empty, or one per column
  std::vector<std::string> feature_names;  // empty, or one per row
  Standardization standardization;

  Eigen::Index dim() const { return values.rows(); }
  Eigen::Index size() const { return values.cols(); }
  bool has_labels() const { return !labels.empty(); }

  /// Throws InvalidArgument when a type invariant is broken.
  void validate() const;
};

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
  /// Header name, or a 0-based column index written as a decimal string.
  std::optional<std::string> label_column;
};

Dataset parse_csv(std::istream& in, const CsvOptions& options);
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);

Dataset standardize(const Dataset& ds, StandardizePolicy policy,
                    ConstantRowPolicy constant_rows = ConstantRowPolicy::error,
                    StdConvention convention = StdConvention::population);

/// Undo the recorded standardization.
Eigen::MatrixXd destandardize(const Dataset& ds);

StandardizePolicy parse_standardize_policy(const std::string& name);
std::string to_string(StandardizePolicy policy);
std::string to_string(StdConvention convention);

/// Row-per-point CSV echo of the dataset (header, feature values, label).
void write_csv(const Dataset& ds, std::ostream& out, char delimiter = ',');
void write_csv(const Dataset& ds, const std::filesystem::path& path, char delimiter = ',');

/// Distinct labels in order of first appearance.
std::vector<std::string> distinct_labels(const std::vector<std::string>& labels);

}  // namespace andrews3d
