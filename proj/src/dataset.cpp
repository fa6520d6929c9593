#include "andrews3d/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "andrews3d/errors.hpp"
#include "number_format.hpp"

namespace andrews3d {
namespace {

// Splits CSV text into records. Quoted fields may contain the delimiter,
// doubled quotes and line breaks.
std::vector<std::vector<std::string>> read_records(std::istream& in, char delim) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool quoted_field = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
    quoted_field = false;
  };
  auto end_record = [&] {
    // A line holding nothing at all is skipped rather than read as one empty cell.
    if (record.empty() && !field_started && field.empty()) return;
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
      quoted_field = true;
    } else if (c == delim) {
      field_started = true;
      end_field();
    } else if (c == '\r') {
      if (in.peek() != '\n') {
        end_record();
        ++line;
      }
    } else if (c == '\n') {
      end_record();
      ++line;
    } else {
      if (quoted_field) {
        throw ParseError("unexpected character after closing quote on line " + std::to_string(line));
      }
      field_started = true;
      field += c;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field");
  end_record();
  return records;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::size_t resolve_label_column(const std::string& column, const std::vector<std::string>& header,
                                 std::size_t width) {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (trim(header[j]) == trim(column)) return j;
  }
  std::size_t index = 0;
  const auto t = trim(column);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), index);
  if (ec == std::errc{} && ptr == t.data() + t.size() && index < width) return index;
  throw InvalidArgument("label column '" + column + "' not found");
}

}  // namespace

void Dataset::validate() const {
  if (values.rows() < 1 || values.cols() < 1) throw InvalidArgument("dataset must have d >= 1 and N >= 1");
  if (!values.allFinite()) throw InvalidArgument("dataset contains non-finite values");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != values.cols()) {
    throw InvalidArgument("label count does not match number of data points");
  }
  if (!feature_names.empty() && static_cast<Eigen::Index>(feature_names.size()) != values.rows()) {
    throw InvalidArgument("feature name count does not match dimension");
  }
}

Dataset parse_csv(std::istream& in, const CsvOptions& options) {
  auto records = read_records(in, options.delimiter);

  std::vector<std::string> header;
  if (options.has_header && !records.empty()) {
    header = std::move(records.front());
    records.erase(records.begin());
  }
  if (records.empty()) throw ParseError("empty table");

  const std::size_t width = records.front().size();
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw ParseError("ragged rows: data row " + std::to_string(r + 1) + " has " +
                       std::to_string(records[r].size()) + " fields, expected " + std::to_string(width));
    }
  }
  if (!header.empty() && header.size() != width) {
    throw ParseError("header has " + std::to_string(header.size()) + " fields, data rows have " +
                     std::to_string(width));
  }

  std::optional<std::size_t> label_col;
  if (options.label_column) label_col = resolve_label_column(*options.label_column, header, width);

  std::vector<std::size_t> feature_cols;
  for (std::size_t j = 0; j < width; ++j) {
    if (j != label_col) feature_cols.push_back(j);
  }
  if (feature_cols.empty()) throw ParseError("table has no feature columns");

  Dataset ds;
  const auto d = static_cast<Eigen::Index>(feature_cols.size());
  const auto n = static_cast<Eigen::Index>(records.size());
  ds.values.resize(d, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const auto& rec = records[static_cast<std::size_t>(col)];
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto j = feature_cols[static_cast<std::size_t>(k)];
      const auto value = parse_number(rec[j]);
      if (!value) {
        throw ParseError("non-numeric value '" + rec[j] + "' at data row " + std::to_string(col + 1) +
                         ", column " + std::to_string(j + 1));
      }
      ds.values(k, col) = *value;
    }
    if (label_col) ds.labels.emplace_back(trim(rec[*label_col]));
  }
  if (!header.empty()) {
    for (auto j : feature_cols) ds.feature_names.emplace_back(trim(header[j]));
  }
  ds.standardization.policy = StandardizePolicy::none;
  ds.standardization.mean.assign(static_cast<std::size_t>(d), 0.0);
  ds.standardization.scale.assign(static_cast<std::size_t>(d), 1.0);
  ds.standardization.constant_row.assign(static_cast<std::size_t>(d), false);
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_csv(in, options);
}

Dataset standardize(const Dataset& ds, StandardizePolicy policy, ConstantRowPolicy constant_rows,
                    StdConvention convention) {
  ds.validate();
  Dataset out = ds;
  const auto d = ds.dim();
  const auto n = ds.size();
  auto& rec = out.standardization;
  const Standardization prior = ds.standardization;
  rec.policy = policy;
  rec.convention = convention;
  rec.mean.assign(static_cast<std::size_t>(d), 0.0);
  rec.scale.assign(static_cast<std::size_t>(d), 1.0);
  rec.constant_row.assign(static_cast<std::size_t>(d), false);

  if (policy != StandardizePolicy::none) {
    if (policy == StandardizePolicy::zscore && convention == StdConvention::sample && n < 2) {
      throw InvalidArgument("sample standard deviation needs at least two data points");
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      auto row = out.values.row(k);
      const double mean = row.mean();
      row.array() -= mean;
      const auto kk = static_cast<std::size_t>(k);
      rec.mean[kk] = mean;
      if (policy == StandardizePolicy::zscore) {
        const double divisor = convention == StdConvention::population ? double(n) : double(n - 1);
        const double sd = std::sqrt(row.squaredNorm() / divisor);
        const double magnitude = ds.values.row(k).cwiseAbs().maxCoeff();
        if (sd <= 1e-14 * std::max(magnitude, 1e-300) || sd == 0.0) {
          if (constant_rows == ConstantRowPolicy::error) {
            throw InvalidArgument("feature row " + std::to_string(k + 1) + " is constant; cannot z-score");
          }
          row.setZero();
          rec.constant_row[kk] = true;
        } else {
          row /= sd;
          rec.scale[kk] = sd;
        }
      }
    }
  }

  // Fold the earlier record in: raw = m0 + s0 * (m1 + s1 * z).
  if (prior.policy != StandardizePolicy::none && prior.mean.size() == static_cast<std::size_t>(d)) {
    for (std::size_t k = 0; k < rec.mean.size(); ++k) {
      rec.mean[k] = prior.mean[k] + prior.scale[k] * rec.mean[k];
      rec.scale[k] = prior.scale[k] * rec.scale[k];
    }
    if (policy == StandardizePolicy::none) rec.policy = prior.policy;
  }
  return out;
}

Eigen::MatrixXd destandardize(const Dataset& ds) {
  Eigen::MatrixXd raw = ds.values;
  const auto& rec = ds.standardization;
  if (rec.mean.size() != static_cast<std::size_t>(ds.dim())) return raw;
  for (Eigen::Index k = 0; k < raw.rows(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    raw.row(k) = (raw.row(k).array() * rec.scale[kk] + rec.mean[kk]).matrix();
  }
  return raw;
}

StandardizePolicy parse_standardize_policy(const std::string& name) {
  if (name == "none") return StandardizePolicy::none;
  if (name == "center") return StandardizePolicy::center;
  if (name == "zscore") return StandardizePolicy::zscore;
  throw InvalidArgument("unknown standardization policy '" + name + "'");
}

std::string to_string(StandardizePolicy policy) {
  switch (policy) {
    case StandardizePolicy::none: return "none";
    case StandardizePolicy::center: return "center";
    case StandardizePolicy::zscore: return "zscore";
  }
  return "none";
}

std::string to_string(StdConvention convention) {
  return convention == StdConvention::population ? "population" : "sample";
}

namespace {
std::string quote_if_needed(const std::string& s, char delim) {
  if (s.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}
}  // namespace

void write_csv(const Dataset& ds, std::ostream& out, char delimiter) {
  ds.validate();
  std::string line;
  for (Eigen::Index k = 0; k < ds.dim(); ++k) {
    if (k) line += delimiter;
    line += ds.feature_names.empty() ? "x" + std::to_string(k + 1)
                                     : quote_if_needed(ds.feature_names[static_cast<std::size_t>(k)], delimiter);
  }
  if (ds.has_labels()) line += std::string{delimiter} + "label";
  out << line << '\n';
  for (Eigen::Index n = 0; n < ds.size(); ++n) {
    line.clear();
    for (Eigen::Index k = 0; k < ds.dim(); ++k) {
      if (k) line += delimiter;
      detail::append_number(line, ds.values(k, n));
    }
    if (ds.has_labels()) {
      line += delimiter;
      line += quote_if_needed(ds.labels[static_cast<std::size_t>(n)], delimiter);
    }
    out << line << '\n';
  }
}

void write_csv(const Dataset& ds, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_csv(ds, out, delimiter);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<std::string> distinct_labels(const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (seen.insert(l).second) out.push_back(l);
  }
  return out;
}

}  // namespace andrews3d
