#pragma once

// Output formats: CSV tables with '#' metadata lines and self-contained SVG
// line plots. Both are deterministic byte-for-byte for a given input.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qcorr/linalg.hpp"

#ifndef QCORR_BUILD_ID
#define QCORR_BUILD_ID "untracked"
#endif

namespace qcorr {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row) {
    if (row.size() != columns.size())
      throw NumericalError("table row width does not match the column count");
    rows.push_back(std::move(row));
  }
  std::size_t column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw ConfigError("table has no column named '" + std::string(name) + "'");
  }
};

struct CsvMeta {
  std::string scenario;
  std::string time_unit;
  std::uint64_t config_hash = 0;
};

inline void write_csv(std::ostream& os, const Table& table, const CsvMeta& meta) {
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(meta.config_hash));
  os << "# scenario: " << meta.scenario << "\n";
  os << "# config_hash: " << hash << "\n";
  os << "# build: " << QCORR_BUILD_ID << "\n";
  if (!meta.time_unit.empty()) os << "# time_unit: " << meta.time_unit << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_g(row[i]);
    os << "\n";
  }
}

inline void write_csv_file(const std::string& path, const Table& table,
                           const CsvMeta& meta) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  write_csv(os, table, meta);
  if (!os) throw ConfigError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// SVG line plot
// ---------------------------------------------------------------------------

struct SvgSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::size_t x_column = 0;
  std::vector<std::size_t> y_columns;  // empty: every column except x
};

namespace detail {

inline double nice_step(double range, int target_ticks) {
  if (!(range > 0.0)) return 1.0;
  const double raw = range / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag + 1e-12 * mag) return m * mag;
  return 10.0 * mag;
}

inline std::string trim_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace detail

inline void write_svg(std::ostream& os, const Table& table, const SvgSpec& spec) {
  if (table.rows.empty()) throw ConfigError("cannot plot an empty table");
  std::vector<std::size_t> ys = spec.y_columns;
  if (ys.empty())
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      if (i != spec.x_column) ys.push_back(i);
  if (ys.empty()) throw ConfigError("plot needs at least one y column");

  const double width = 880, height = 560;
  const double ml = 72, mr = 168, mt = 48, mb = 56;
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& row : table.rows) {
    x_min = std::min(x_min, row[spec.x_column]);
    x_max = std::max(x_max, row[spec.x_column]);
    for (std::size_t c : ys) {
      y_min = std::min(y_min, row[c]);
      y_max = std::max(y_max, row[c]);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) y_max = y_min + 1.0;
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;
  auto px = [&](double x) {
    return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr);
  };
  auto py = [&](double y) {
    return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " "
     << height << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
     << "font-size=\"17\">" << spec.title << "</text>\n";

  // axes box
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
     << "\" height=\"" << height - mt - mb
     << "\" fill=\"none\" stroke=\"#333\"/>\n";

  const double xs = detail::nice_step(x_max - x_min, 6);
  for (double v = std::ceil(x_min / xs) * xs; v <= x_max + 1e-9 * xs; v += xs) {
    os << "<line x1=\"" << px(v) << "\" y1=\"" << mt << "\" x2=\"" << px(v)
       << "\" y2=\"" << height - mb << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << px(v) << "\" y=\"" << height - mb + 18
       << "\" text-anchor=\"middle\">" << detail::trim_tick(v) << "</text>\n";
  }
  const double yss = detail::nice_step(y_max - y_min, 6);
  for (double v = std::ceil(y_min / yss) * yss; v <= y_max + 1e-9 * yss; v += yss) {
    os << "<line x1=\"" << ml << "\" y1=\"" << py(v) << "\" x2=\"" << width - mr
       << "\" y2=\"" << py(v) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << py(v) + 4
       << "\" text-anchor=\"end\">" << detail::trim_tick(v) << "</text>\n";
  }
  os << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\">" << spec.x_label << "</text>\n";
  os << "<text x=\"20\" y=\"" << (mt + height - mb) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << (mt + height - mb) / 2 << ")\">" << spec.y_label << "</text>\n";

  for (std::size_t k = 0; k < ys.size(); ++k) {
    const char* color = palette[k % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.6\" points=\"";
    for (const auto& row : table.rows)
      os << detail::trim_tick(px(row[spec.x_column])) << ","
         << detail::trim_tick(py(row[ys[k]])) << " ";
    os << "\"/>\n";
    const double ly = mt + 18 + 20 * static_cast<double>(k);
    os << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << width - mr + 34 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << width - mr + 40 << "\" y=\"" << ly << "\">"
       << table.columns[ys[k]] << "</text>\n";
  }
  os << "</svg>\n";
}

inline void write_svg_file(const std::string& path, const Table& table,
                           const SvgSpec& spec) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  write_svg(os, table, spec);
  if (!os) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace qcorr
