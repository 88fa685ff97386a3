#pragma once

// Run configuration and file writers for the command-line tool.
//
// Every file carries the full RunConfig and the library version: CSV as a
// `#` preamble, JSON as a leading "meta" object. Floats use the shortest
// round-trip decimal, lines end in LF, so equal configs give equal bytes.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "smm/error.hpp"
#include "smm/format.hpp"
#include "smm/version.hpp"

namespace smm::cli {

enum class Format { Csv, Json };

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct RunConfig {
  std::string subcommand;
  std::string compound = "3";
  std::string compound_file;
  std::optional<int> two_s;
  std::optional<double> bx;
  double by = 0.0;
  Range bz_range{-4.0, 4.0};
  Range bx_range{-3.0, 3.0};
  Range r3_range{-1.0, 0.2};
  std::optional<Range> range1;
  std::optional<Range> range2;
  std::optional<std::vector<double>> r_params;
  std::string plane = "bz,r3";
  int grid1 = 200;
  int grid2 = 200;
  std::vector<double> temps{0.01};
  double d_increment = 0.001;
  std::string axis = "bz";
  std::string export_id;
  std::string out;
  Format format = Format::Csv;
  bool plot_script = false;
  unsigned threads = 0;

  /// key/value pairs in a fixed order, for file headers.
  std::vector<std::pair<std::string, std::string>> describe() const {
    auto range = [](const Range& r) { return format_double(r.lo) + "," + format_double(r.hi); };
    auto list = [](const std::vector<double>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
      return s;
    };
    return {
        {"subcommand", subcommand},
        {"compound", compound},
        {"compound_file", compound_file},
        {"two_s", two_s ? std::to_string(*two_s) : ""},
        {"bx", bx ? format_double(*bx) : ""},
        {"by", format_double(by)},
        {"bz_range", range(bz_range)},
        {"bx_range", range(bx_range)},
        {"r3_range", range(r3_range)},
        {"range1", range1 ? range(*range1) : ""},
        {"range2", range2 ? range(*range2) : ""},
        {"r_params", r_params ? list(*r_params) : ""},
        {"plane", plane},
        {"grid", std::to_string(grid1) + "x" + std::to_string(grid2)},
        {"temps", list(temps)},
        {"d_increment", format_double(d_increment)},
        {"axis", axis},
        {"export", export_id},
        {"format", format == Format::Csv ? "csv" : "json"},
        {"plot_script", plot_script ? "true" : "false"},
    };
  }

  void validate() const {
    auto check = [](const Range& r, const char* name) {
      if (!(r.lo < r.hi)) throw InvalidInput(std::string("--") + name + ": need lo < hi");
    };
    check(bz_range, "bz-range");
    check(bx_range, "bx-range");
    check(r3_range, "r3-range");
    if (range1) check(*range1, "range1");
    if (range2) check(*range2, "range2");
    if (grid1 < 2 || grid2 < 2) throw InvalidInput("--grid: resolution must be at least 2");
    for (double t : temps)
      if (!(t > 0.0)) throw InvalidInput("--temps: temperatures must be > 0");
    if (!(d_increment > 0.0)) throw InvalidInput("--d-increment: must be > 0");
    if (r_params && r_params->size() != 5) throw InvalidInput("--r-params: expected five values r1,r2,r3,r4,r5");
    if (two_s && *two_s < 1) throw InvalidInput("--two-s: must be >= 1");
  }
};

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-oriented result: a header row and rows of cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

/// RFC 4180 quoting for text cells that need it.
inline std::string csv_field(const Cell& c) {
  std::string s = cell_text(c);
  if (!std::holds_alternative<std::string>(c) || s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

inline void write_csv(std::ostream& os, const RunConfig& cfg, const Table& t,
                      const std::vector<std::string>& notes = {}) {
  os << "# smm " << kVersion << '\n';
  for (const auto& [k, v] : cfg.describe()) os << "# " << k << " = " << v << '\n';
  for (const auto& n : notes) os << "# " << n << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
}

inline nlohmann::ordered_json to_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

inline void write_json(std::ostream& os, const RunConfig& cfg, const Table& t,
                       const std::vector<std::string>& notes = {}) {
  nlohmann::ordered_json j;
  j["meta"]["version"] = kVersion;
  for (const auto& [k, v] : cfg.describe()) j["meta"]["config"][k] = v;
  j["meta"]["notes"] = notes;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(to_json(c));
    j["rows"].push_back(std::move(r));
  }
  os << j.dump(1) << '\n';
}

inline void write_table(const std::filesystem::path& path, const RunConfig& cfg, const Table& t,
                        const std::vector<std::string>& notes = {}) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open output file '" + path.string() + "'");
  if (cfg.format == Format::Csv)
    write_csv(os, cfg, t, notes);
  else
    write_json(os, cfg, t, notes);
  if (!os) throw InvalidInput("failed writing output file '" + path.string() + "'");
}

/// `out` with `suffix` inserted before the extension: a/b.csv + "_x" -> a/b_x.csv.
inline std::filesystem::path with_suffix(const std::filesystem::path& out, const std::string& suffix) {
  auto p = out;
  p.replace_filename(out.stem().string() + suffix + out.extension().string());
  return p;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open output file '" + path.string() + "'");
  os << text;
}

}  // namespace smm::cli
