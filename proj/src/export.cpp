#include "andrews3d/export.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "andrews3d/errors.hpp"
#include "number_format.hpp"

namespace andrews3d {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void append_json_string(std::string& out, const std::string& s) {
  out += nlohmann::json(s).dump();
}

template <typename PointFn>
void write_curves(std::ostream& out, const char* kind, int d, std::size_t count, int samples,
                  std::span<const std::string> labels, PointFn&& emit_points) {
  if (count == 0) throw InvalidArgument("no curves to write");
  if (!labels.empty() && labels.size() != count) throw InvalidArgument("label count does not match curve count");
  std::string buf;
  buf += "{\"schema_version\":" + std::to_string(kCurvesSchemaVersion) + ",\"kind\":\"" + kind +
         "\",\"d\":" + std::to_string(d) + ",\"n\":" + std::to_string(count) +
         ",\"samples\":" + std::to_string(samples) + ",\"curves\":[";
  out << buf;
  for (std::size_t c = 0; c < count; ++c) {
    buf.clear();
    if (c) buf += ',';
    buf += "\n{\"label\":";
    if (labels.empty()) {
      buf += "null";
    } else {
      append_json_string(buf, labels[c]);
    }
    buf += ",\"points\":[";
    emit_points(c, buf);
    buf += "]}";
    out << buf;
  }
  out << "\n]}\n";
}

}  // namespace

std::vector<std::size_t> palette_indices(std::span<const std::string> labels, std::size_t count) {
  std::vector<std::size_t> idx(count, 0);
  if (labels.empty()) return idx;
  if (labels.size() != count) throw InvalidArgument("label count does not match item count");
  std::unordered_map<std::string, std::size_t> order;
  for (std::size_t i = 0; i < count; ++i) {
    auto [it, inserted] = order.try_emplace(labels[i], order.size());
    idx[i] = it->second % kPalette.size();
  }
  return idx;
}

void write_ply(std::span<const Filament> filaments, std::span<const std::string> labels, std::ostream& out) {
  if (filaments.empty()) throw InvalidArgument("write_ply: no filaments");
  const std::size_t per = filaments.front().points.size();
  for (const auto& f : filaments) {
    if (f.points.size() != per) throw InvalidArgument("write_ply: filaments have different step counts");
  }
  const auto colors = palette_indices(labels, filaments.size());
  const std::size_t vertices = per * filaments.size();
  const std::size_t edges = (per - 1) * filaments.size();

  out << "ply\nformat ascii 1.0\ncomment andrews3d filaments\n"
      << "element vertex " << vertices << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "element edge " << edges << "\n"
      << "property int vertex1\nproperty int vertex2\n"
      << "end_header\n";

  std::string line;
  for (std::size_t f = 0; f < filaments.size(); ++f) {
    const Rgb& rgb = kPalette[colors[f]];
    const std::string color = ' ' + std::to_string(rgb[0]) + ' ' + std::to_string(rgb[1]) + ' ' +
                              std::to_string(rgb[2]) + '\n';
    for (const auto& p : filaments[f].points) {
      line.clear();
      for (int k = 0; k < 3; ++k) {
        if (k) line += ' ';
        detail::append_number(line, static_cast<double>(static_cast<float>(p(k))), 9);
      }
      line += color;
      out << line;
    }
  }
  for (std::size_t f = 0; f < filaments.size(); ++f) {
    const std::size_t base = f * per;
    for (std::size_t i = 0; i + 1 < per; ++i) out << base + i << ' ' << base + i + 1 << '\n';
  }
}

void write_ply(std::span<const Filament> filaments, std::span<const std::string> labels,
               const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_ply(filaments, labels, out);
  finish(out, path);
}

void write_curves_json(std::span<const PlaneCurveSamples> curves, std::span<const std::string> labels, int d,
                       std::ostream& out) {
  const int samples = curves.empty() ? 0 : curves.front().samples;
  for (const auto& c : curves) {
    if (c.samples != samples) throw InvalidArgument("curves have different sample counts");
  }
  write_curves(out, "andrews", d, curves.size(), samples, labels, [&](std::size_t c, std::string& buf) {
    const auto& pts = curves[c].points;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      if (i) buf += ',';
      buf += '[';
      detail::append_number(buf, pts(0, i));
      buf += ',';
      detail::append_number(buf, pts(1, i));
      buf += ']';
    }
  });
}

void write_curves_json(std::span<const Filament> filaments, std::span<const std::string> labels, int d,
                       std::ostream& out) {
  const int samples = filaments.empty() ? 0 : static_cast<int>(filaments.front().points.size());
  for (const auto& f : filaments) {
    if (static_cast<int>(f.points.size()) != samples) throw InvalidArgument("filaments have different step counts");
  }
  write_curves(out, "filament", d, filaments.size(), samples, labels, [&](std::size_t c, std::string& buf) {
    bool first = true;
    for (const auto& p : filaments[c].points) {
      if (!first) buf += ',';
      first = false;
      buf += '[';
      for (int k = 0; k < 3; ++k) {
        if (k) buf += ',';
        detail::append_number(buf, p(k));
      }
      buf += ']';
    }
  });
}

void write_curves_json(std::span<const PlaneCurveSamples> curves, std::span<const std::string> labels, int d,
                       const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_curves_json(curves, labels, d, out);
  finish(out, path);
}

void write_curves_json(std::span<const Filament> filaments, std::span<const std::string> labels, int d,
                       const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_curves_json(filaments, labels, d, out);
  finish(out, path);
}

CurvesDocument read_curves_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid curves JSON: ") + e.what());
  }
  try {
    CurvesDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    doc.kind = j.at("kind").get<std::string>();
    doc.d = j.at("d").get<int>();
    doc.n = j.at("n").get<int>();
    doc.samples = j.at("samples").get<int>();
    for (const auto& c : j.at("curves")) {
      CurvesDocument::Curve curve;
      if (!c.at("label").is_null()) curve.label = c.at("label").get<std::string>();
      curve.points = c.at("points").get<std::vector<std::vector<double>>>();
      doc.curves.push_back(std::move(curve));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("curves JSON does not match the schema: ") + e.what());
  }
}

CurvesDocument read_curves_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_curves_json(in);
}

std::string report_to_json(const RunReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = 1;
  j["tool"] = {{"name", "andrews3d"}, {"version", r.tool_version}};
  j["timestamps"] = {{"created_at", r.created_at}};
  j["command"] = r.command;

  ordered_json config = ordered_json::object();
  for (const auto& [key, value] : r.config) config[key] = value;
  j["config"] = config;

  j["dataset"] = {{"d", r.d},
                  {"n", r.n},
                  {"standardization", r.standardization},
                  {"std_convention", r.std_convention},
                  {"label_count", r.label_count}};
  j["map"] = {{"phase_policy", r.phase_policy},
              {"epsilon", r.epsilon},
              {"epsilon_vacuous", r.epsilon_vacuous},
              {"tie_partition", r.tie_partition},
              {"singular_values", r.singular_values}};
  j["metrics"] = {{"samples", r.samples},
                  {"mqv", r.mqv},
                  {"mqv_closed_form", r.mqv_closed_form},
                  {"gram_deviation", r.gram_deviation},
                  {"slice_singular_value_min", r.slice_s_min},
                  {"slice_singular_value_max", r.slice_s_max},
                  {"gauss_theta_samples", r.gauss_theta_samples},
                  {"gauss_max_magnitude", r.gauss_max_magnitude},
                  {"gauss_max_ratio", r.gauss_max_ratio}};

  ordered_json fils = ordered_json::array();
  for (const auto& f : r.filaments) {
    fils.push_back({{"index", f.index},
                    {"length", f.length},
                    {"total_square_curvature", f.total_square_curvature},
                    {"expected_square_curvature", f.expected_square_curvature},
                    {"identity_residual", f.identity_residual},
                    {"max_orthogonality_error", f.max_orthogonality_error}});
  }
  j["filaments"] = {{"steps", r.steps}, {"count", r.filaments.size()}, {"items", fils}};

  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

void write_report(const RunReport& report, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << report_to_json(report);
  finish(out, path);
}

}  // namespace andrews3d
