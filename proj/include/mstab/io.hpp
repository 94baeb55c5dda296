#pragma once

// CSV paths, SVG quick-look plots and JSON reports.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mstab/errors.hpp"
#include "mstab/measure.hpp"
#include "mstab/verification.hpp"

namespace mstab::io {

using json = nlohmann::json;

/// 17 significant digits round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

inline std::string csv_text(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size()) throw DomainError("CSV columns differ in length");
  std::string s = "t,value\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    s += format_double(t[k]);
    s += ',';
    s += format_double(v[k]);
    s += '\n';
  }
  return s;
}

inline void write_csv(const std::filesystem::path& path, std::span<const double> t,
                      std::span<const double> v) {
  auto out = open_for_write(path);
  out << csv_text(t, v);
  finish(out, path);
}

struct CsvColumns {
  std::vector<double> t;
  std::vector<double> value;
};

inline CsvColumns read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "t,value") throw IoError("missing CSV header in " + path.string());
  CsvColumns c;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed CSV row: " + line);
    c.t.push_back(std::stod(line.substr(0, comma)));
    c.value.push_back(std::stod(line.substr(comma + 1)));
  }
  return c;
}

inline std::string escape_xml(const std::string& s) {
  std::string o;
  for (char ch : s) {
    switch (ch) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += ch;
    }
  }
  return o;
}

/// Axes, a title and one polyline of (t, value).
inline std::string svg_text(std::span<const double> t, std::span<const double> v,
                            const std::string& title) {
  if (t.size() != v.size()) throw DomainError("SVG columns differ in length");
  constexpr double W = 800, H = 400, M = 40;
  double t0 = 0, t1 = 1, v0 = -1, v1 = 1;
  if (!t.empty()) {
    t0 = *std::min_element(t.begin(), t.end());
    t1 = *std::max_element(t.begin(), t.end());
    v0 = *std::min_element(v.begin(), v.end());
    v1 = *std::max_element(v.begin(), v.end());
  }
  if (t1 == t0) t1 = t0 + 1;
  if (v1 == v0) {
    v0 -= 1;
    v1 += 1;
  }
  auto px = [&](double x) { return M + (x - t0) / (t1 - t0) * (W - 2 * M); };
  auto py = [&](double y) { return H - M - (y - v0) / (v1 - v0) * (H - 2 * M); };
  char buf[192];
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" viewBox=\"0 0 800 400\">\n"
    << "<rect width=\"800\" height=\"400\" fill=\"white\"/>\n"
    << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << escape_xml(title) << "</text>\n"
    << "<line x1=\"40\" y1=\"360\" x2=\"760\" y2=\"360\" stroke=\"black\"/>\n"
    << "<line x1=\"40\" y1=\"40\" x2=\"40\" y2=\"360\" stroke=\"black\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"40\" y=\"376\" font-family=\"sans-serif\" font-size=\"10\">%.4g</text>\n", t0);
  o << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"760\" y=\"376\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">%.4g</text>\n", t1);
  o << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"36\" y=\"44\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">%.4g</text>\n", v1);
  o << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"36\" y=\"360\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">%.4g</text>\n", v0);
  o << buf;
  o << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"0.8\" points=\"";
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", k ? " " : "", px(t[k]), py(v[k]));
    o << buf;
  }
  o << "\"/>\n</svg>\n";
  return o.str();
}

inline void write_svg(const std::filesystem::path& path, std::span<const double> t,
                      std::span<const double> v, const std::string& title) {
  auto out = open_for_write(path);
  out << svg_text(t, v, title);
  finish(out, path);
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

inline json to_json(const SeriesDraw& d) {
  return json{{"gammas", d.gammas}, {"points", d.points}, {"signs", d.signs}, {"seed", d.seed}};
}

inline json to_json(const ScalingReport& r) {
  return json{{"u", r.u},
              {"h", r.h},
              {"t_probe", r.t_probe},
              {"radii", r.radii},
              {"ks_by_radius", r.ks_by_radius},
              {"ks_p", r.ks_p_by_radius},
              {"iqr_by_radius", r.iqr_by_radius},
              {"fitted_exponent", r.fitted_exponent},
              {"reference_alpha", r.reference_alpha},
              {"reference_scale", r.reference_scale},
              {"n_paths", r.n_paths},
              {"warnings", r.warnings}};
}

inline json to_json(const ConditionReport& r) {
  return json{{"u", r.u},
              {"epsilon", r.epsilon},
              {"condition_estimates", r.estimates},
              {"verdicts", r.verdicts},
              {"required", r.required}};
}

}  // namespace mstab::io
