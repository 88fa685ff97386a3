#pragma once

// Built-in anisotropy parameter sets and a flat key-value compound format:
//
//   # comment
//   id = 3
//   two_s = 10
//   d = -0.636
//   e = 0.0446
//   b40 = 2.3e-05
//   comment = free text up to end of line
//
// Energies in kelvin. Missing anisotropy keys default to 0.

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "smm/error.hpp"
#include "smm/format.hpp"
#include "smm/spin.hpp"

namespace smm {

struct Compound {
  std::string id;
  SpinSystem spin{10};
  AnisotropyParams aniso;
  std::string source;

  friend bool operator==(const Compound&, const Compound&) = default;
};

inline const std::vector<Compound>& builtin_catalog() {
  static const std::vector<Compound> catalog = [] {
    const SpinSystem s5(10);
    const std::string fe4 = "Fe4 tetrairon(III) family, HFEPR (gregoli2009a)";
    auto row = [&](std::string id, double d, double e, double b40_e5, std::string extra = {}) {
      Compound c{std::move(id), s5, AnisotropyParams{d, e, b40_e5 * 1e-5, 0, 0, 0}, fe4};
      if (!extra.empty()) c.source += "; " + extra;
      return c;
    };
    std::vector<Compound> v{
        row("1(1)", -0.6, 0.022, 1.87),
        row("1(2)", -0.626, 0.013, 1.3),
        row("2", -0.646, 0.043, 3.45),
        row("3", -0.636, 0.0446, 2.3),
        row("4", -0.593, 0.0086, 2.59),
        row("5", -0.64, 0.0, 1.439),
        row("6", -0.624, 0.0288, 1.439),
        row("7", -0.623, 0.02, 2.16),
        row("8", -0.601, 0.033, 1.15),
        row("9", -0.591, 0.0143, 1.58),
        row("10", -0.588, 0.0115, 3.45),
        row("11", -0.388, 0.0, 0.0, "b40 is only bounded, b40 < 0.719e-5 K; stored as 0"),
        row("12", -0.296, 0.0143, -1.58),
    };
    Compound trig = v[3];
    trig.id = "3-trigonal";
    trig.aniso.b43 = 0.01;
    trig.source += "; trigonal variant with b43 = 0.01 K";
    v.push_back(trig);
    v.push_back({"i", SpinSystem(20), AnisotropyParams{-0.292, 0.046, 0.0, 0.0, 0.0, -2.9e-5},
                 "Fe8 (wernsdorfer2000a)"});
    v.push_back({"ii", SpinSystem(20), AnisotropyParams{-0.676, 0.0, 0.251e-4, 0.0, 0.0, -1.18e-4},
                 "Mn12 acetate (hill1998a)"});
    v.push_back({"iii", SpinSystem(19), AnisotropyParams{-0.73, 0.129, 3.31e-4, 0.0, 0.0, 0.0},
                 "Fe6 (nehrkorn2021a)"});
    return v;
  }();
  return catalog;
}

namespace detail {

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Catalog entry by id; unknown ids are rejected with the closest id suggested.
inline const Compound& find_compound(std::string_view id,
                                     const std::vector<Compound>& catalog = builtin_catalog()) {
  for (const auto& c : catalog)
    if (c.id == id) return c;
  std::string best;
  std::size_t best_d = static_cast<std::size_t>(-1);
  for (const auto& c : catalog) {
    const auto d = detail::edit_distance(id, c.id);
    if (d < best_d) {
      best_d = d;
      best = c.id;
    }
  }
  throw InvalidInput("unknown compound '" + std::string(id) + "'" +
                     (best.empty() ? std::string() : "; did you mean '" + best + "'?"));
}

inline std::string serialize_compound(const Compound& c) {
  std::ostringstream os;
  os << "id = " << c.id << '\n';
  os << "two_s = " << c.spin.two_s() << '\n';
  os << "d = " << format_double(c.aniso.d) << '\n';
  os << "e = " << format_double(c.aniso.e) << '\n';
  os << "b40 = " << format_double(c.aniso.b40) << '\n';
  os << "b42 = " << format_double(c.aniso.b42) << '\n';
  os << "b43 = " << format_double(c.aniso.b43) << '\n';
  os << "b44 = " << format_double(c.aniso.b44) << '\n';
  if (!c.source.empty()) os << "comment = " << c.source << '\n';
  return os.str();
}

inline Compound load_compound(std::string_view document) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= document.size()) {
    const auto nl = document.find('\n', pos);
    const auto raw = document.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? document.size() + 1 : nl + 1;
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidInput("compound line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    static constexpr std::string_view kKeys[] = {"id", "two_s", "d", "e", "b40", "b42", "b43", "b44", "comment"};
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
      throw InvalidInput("compound line " + std::to_string(line_no) + ": unknown key '" + key +
                         "' (allowed: id, two_s, d, e, b40, b42, b43, b44, comment)");
    if (!kv.emplace(key, value).second)
      throw InvalidInput("compound line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }

  auto it = kv.find("id");
  if (it == kv.end() || it->second.empty()) throw InvalidInput("compound: missing field 'id'");
  const std::string id = it->second;
  it = kv.find("two_s");
  if (it == kv.end()) throw InvalidInput("compound: missing field 'two_s'");
  const int two_s = parse_int(it->second, "two_s");
  if (two_s < 1) throw InvalidInput("field 'two_s': must be >= 1, got " + std::to_string(two_s));

  auto num = [&](std::string_view key) {
    const auto f = kv.find(key);
    return f == kv.end() ? 0.0 : parse_double(f->second, key);
  };
  Compound c{id, SpinSystem(two_s),
             AnisotropyParams{num("d"), num("e"), num("b40"), num("b42"), num("b43"), num("b44")}, ""};
  if (const auto f = kv.find("comment"); f != kv.end()) c.source = f->second;
  return c;
}

inline Compound load_compound(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return load_compound(os.str());
}

}  // namespace smm
