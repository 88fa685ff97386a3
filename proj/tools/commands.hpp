#pragma once

// Subcommand implementations. Each returns the paths it wrote.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "io.hpp"
#include "smm/smm.hpp"

namespace smm::cli {

namespace fs = std::filesystem;

inline Compound resolve_compound(const RunConfig& cfg) {
  if (!cfg.compound_file.empty()) {
    std::ifstream in(cfg.compound_file);
    if (!in) throw InvalidInput("cannot read compound file '" + cfg.compound_file + "'");
    return load_compound(in);
  }
  return find_compound(cfg.compound);
}

inline SpinSystem resolve_spin(const RunConfig& cfg, const Compound& c) {
  return cfg.two_s ? SpinSystem(*cfg.two_s) : c.spin;
}

/// Field of the quantum Hamiltonian at a given bz.
inline FieldVector field_at(const RunConfig& cfg, double bz) { return {cfg.bx.value_or(0.0), cfg.by, bz}; }

/// Semiclassical parameters: --r-params wins, else the compound reduced at zero field.
/// --bx overrides r1 either way.
inline ReducedParams resolve_reduced(const RunConfig& cfg, const Compound& c) {
  ReducedParams rp;
  if (cfg.r_params) {
    const auto& r = *cfg.r_params;
    rp = ReducedParams::direct(resolve_spin(cfg, c), r[0], r[1], r[2], r[3], r[4]);
  } else {
    if (cfg.by != 0.0) throw InvalidInput("--by must be 0 for semiclassical commands");
    rp = reduce_params(resolve_spin(cfg, c), c.aniso, {});
  }
  if (cfg.bx) rp.r1 = *cfg.bx;
  return rp;
}

inline fs::path require_out(const RunConfig& cfg) {
  if (cfg.out.empty()) throw InvalidInput("--out is required for '" + cfg.subcommand + "'");
  return cfg.out;
}

inline fs::path plot_path(const fs::path& out) {
  auto p = out;
  p.replace_extension(".gp");
  return p;
}

inline std::string gnuplot_preamble(const RunConfig& cfg, const fs::path& data) {
  std::ostringstream os;
  os << "# gnuplot script generated by smm " << kVersion << "\n";
  if (cfg.format == Format::Json) os << "# data file is JSON; re-run with --format csv to plot directly\n";
  os << "set datafile separator ','\n";
  os << "set datafile commentschars '#'\n";
  os << "set key autotitle columnhead\n";
  os << "data = '" << data.filename().string() << "'\n";
  return os.str();
}

inline std::vector<fs::path> cmd_spectrum(const RunConfig& cfg) {
  const auto out = require_out(cfg);
  const auto c = resolve_compound(cfg);
  const auto spin = resolve_spin(cfg, c);
  const int n = cfg.grid1;

  Table t;
  t.columns.push_back("bz");
  for (int k = 0; k < spin.dim(); ++k) t.columns.push_back("E" + std::to_string(k));
  t.rows.resize(static_cast<std::size_t>(n));
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t i) {
        const double bz = cfg.bz_range.lo + (cfg.bz_range.hi - cfg.bz_range.lo) * static_cast<double>(i) / (n - 1);
        const auto spec = eigh(build_hamiltonian(spin, c.aniso, field_at(cfg, bz)));
        auto& row = t.rows[i];
        row.push_back(bz);
        for (double e : spec.eigenvalues) row.push_back(e);
      },
      cfg.threads);
  write_table(out, cfg, t);
  std::vector<fs::path> written{out};

  // Crossing values of the semiclassical separatrices along the same bz range.
  const auto side = with_suffix(out, "_crossings");
  Table x;
  x.columns = {"kind", "bz"};
  std::vector<std::string> notes;
  if (cfg.by == 0.0 || cfg.r_params) {
    SweepOptions opt;
    opt.separatrix.threads = cfg.threads;
    const auto cr = sweep_crossings(resolve_reduced(cfg, c), kAxisBz, {cfg.bz_range.lo, cfg.bz_range.hi}, opt);
    for (double v : cr.bifurcation) x.rows.push_back({std::string("bifurcation"), v});
    for (double v : cr.maxwell_minima) x.rows.push_back({std::string("maxwell_minima"), v});
    for (double v : cr.maxwell_maxima) x.rows.push_back({std::string("maxwell_maxima"), v});
    notes.push_back("crossings bracketed to 1e-4 K");
  } else {
    notes.push_back("crossings need by = 0; none computed");
  }
  write_table(side, cfg, x, notes);
  written.push_back(side);

  if (cfg.plot_script) {
    std::ostringstream os;
    os << gnuplot_preamble(cfg, out);
    os << "set xlabel 'mu_B B_z / k_B [K]'\nset ylabel 'E / k_B [K]'\nunset key\n";
    os << "plot for [i=2:" << spin.dim() + 1 << "] data using 1:i with lines lc rgb 'black'\n";
    write_text(plot_path(out), os.str());
    written.push_back(plot_path(out));
  }
  return written;
}

inline std::vector<fs::path> cmd_separatrix(const RunConfig& cfg) {
  const auto out = require_out(cfg);
  const auto c = resolve_compound(cfg);
  const auto comma = cfg.plane.find(',');
  if (comma == std::string::npos) throw InvalidInput("--plane: expected 'axis1,axis2', e.g. bz,r3");
  const auto name1 = cfg.plane.substr(0, comma);
  const auto name2 = cfg.plane.substr(comma + 1);

  auto default_range = [&](const std::string& name, const std::optional<Range>& explicit_range) -> AxisRange {
    if (explicit_range) return {explicit_range->lo, explicit_range->hi};
    if (name == "bz" || name == "r2") return {cfg.bz_range.lo, cfg.bz_range.hi};
    if (name == "bx" || name == "r1") return {cfg.bx_range.lo, cfg.bx_range.hi};
    if (name == "r3") return {cfg.r3_range.lo, cfg.r3_range.hi};
    throw InvalidInput("--plane axis '" + name + "' needs an explicit --range1/--range2");
  };

  PlaneSpec plane;
  plane.axis1 = parse_axis(name1);
  plane.axis2 = parse_axis(name2);
  plane.range1 = default_range(name1, cfg.range1);
  plane.range2 = default_range(name2, cfg.range2);
  plane.resolution1 = cfg.grid1;
  plane.resolution2 = cfg.grid2;
  plane.fixed = resolve_reduced(cfg, c);

  SeparatrixOptions opt;
  opt.threads = cfg.threads;
  const auto set = classify_cell_edges(plane, opt);

  Table t;
  t.columns = {"kind", "line", "index", name1, name2};
  auto emit = [&](const char* kind, const std::vector<Polyline>& lines) {
    for (std::size_t l = 0; l < lines.size(); ++l)
      for (std::size_t k = 0; k < lines[l].size(); ++k)
        t.rows.push_back({std::string(kind), static_cast<std::int64_t>(l), static_cast<std::int64_t>(k),
                          lines[l][k][0], lines[l][k][1]});
  };
  emit("bifurcation", set.bifurcation);
  emit("maxwell_minima", set.maxwell_minima);
  emit("maxwell_maxima", set.maxwell_maxima);
  std::vector<std::string> notes{"flagged flat grid nodes: " + std::to_string(set.flagged_nodes.size())};
  write_table(out, cfg, t, notes);
  std::vector<fs::path> written{out};

  if (cfg.plot_script) {
    std::ostringstream os;
    os << gnuplot_preamble(cfg, out);
    os << "set xlabel '" << name1 << "'\nset ylabel '" << name2 << "'\nunset key\n";
    os << "plot data using ((strcol(1) eq 'bifurcation') ? $4 : NaN):5 with points pt 7 ps 0.3 lc rgb 'dark-green', \\\n"
       << "     data using ((strcol(1) eq 'maxwell_minima') ? $4 : NaN):5 with points pt 7 ps 0.3 lc rgb 'red', \\\n"
       << "     data using ((strcol(1) eq 'maxwell_maxima') ? $4 : NaN):5 with points pt 7 ps 0.3 lc rgb 'dark-red'\n";
    write_text(plot_path(out), os.str());
    written.push_back(plot_path(out));
  }
  return written;
}

inline FieldPlane field_plane(const RunConfig& cfg) {
  FieldPlane p;
  p.bz_lo = cfg.bz_range.lo;
  p.bz_hi = cfg.bz_range.hi;
  p.bx_lo = cfg.bx_range.lo;
  p.bx_hi = cfg.bx_range.hi;
  p.n_bz = cfg.grid1;
  p.n_bx = cfg.grid2;
  p.by = cfg.by;
  return p;
}

inline Table grid_table(const FieldGrid& g, const std::string& value_name) {
  Table t;
  t.columns = {"bz", "bx", value_name};
  for (int i = 0; i < g.plane.n_bz; ++i)
    for (int j = 0; j < g.plane.n_bx; ++j) t.rows.push_back({g.plane.bz(i), g.plane.bx(j), g.value(i, j)});
  return t;
}

inline std::string density_script(const RunConfig& cfg, const fs::path& data, const std::string& label) {
  std::ostringstream os;
  os << gnuplot_preamble(cfg, data);
  os << "set xlabel 'mu_B B_z / k_B [K]'\nset ylabel 'mu_B B_x / k_B [K]'\n";
  os << "set cblabel '" << label << "'\nset view map\nunset key\n";
  os << "plot data using 1:2:3 with image\n";
  return os.str();
}

inline std::vector<fs::path> cmd_fidelity_map(const RunConfig& cfg) {
  const auto out = require_out(cfg);
  const auto c = resolve_compound(cfg);
  const auto map = fidelity_map(resolve_spin(cfg, c), c.aniso, field_plane(cfg), cfg.d_increment,
                                parse_field_axis(cfg.axis), cfg.threads);
  write_table(out, cfg, grid_table(map, "fidelity"));
  std::vector<fs::path> written{out};
  if (cfg.plot_script) {
    write_text(plot_path(out), density_script(cfg, out, "fidelity"));
    written.push_back(plot_path(out));
  }
  return written;
}

inline std::vector<fs::path> cmd_heatcap_map(const RunConfig& cfg) {
  const auto out = require_out(cfg);
  const auto c = resolve_compound(cfg);
  const auto maps = heatcap_maps(resolve_spin(cfg, c), c.aniso, field_plane(cfg), cfg.temps, cfg.threads);
  std::vector<fs::path> written;
  for (std::size_t q = 0; q < maps.size(); ++q) {
    const auto path = with_suffix(out, "_t" + format_double(cfg.temps[q]));
    write_table(path, cfg, grid_table(maps[q], "c"), {"temperature = " + format_double(cfg.temps[q]) + " K"});
    written.push_back(path);
    if (cfg.plot_script) {
      write_text(plot_path(path), density_script(cfg, path, "C / k_B"));
      written.push_back(plot_path(path));
    }
  }
  return written;
}

inline std::vector<fs::path> cmd_potential(const RunConfig& cfg) {
  const auto out = require_out(cfg);
  const auto c = resolve_compound(cfg);
  const auto rp = resolve_reduced(cfg, c);
  const bool angular = !cfg.r_params;
  const int n = cfg.grid1;

  // Polar angle theta in [0, pi]; "plus" is phi = 0, "minus" is phi = pi.
  Table t;
  t.columns = {"theta", "v_reduced_plus", "v_reduced_minus"};
  if (angular) {
    t.columns.push_back("v_angular_phi0");
    t.columns.push_back("v_angular_phipi");
  }
  const FieldVector f{rp.r1, 0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    const double th = std::numbers::pi * i / (n - 1);
    std::vector<Cell> row{th, potential_reduced(th, rp, Branch::Plus), potential_reduced(th, rp, Branch::Minus)};
    if (angular) {
      row.push_back(potential_angular(th, 0.0, rp.spin, c.aniso, f));
      row.push_back(potential_angular(th, std::numbers::pi, rp.spin, c.aniso, f));
    }
    t.rows.push_back(std::move(row));
  }
  write_table(out, cfg, t, {"reduced potential at bz = r2 = " + format_double(rp.r2) + " K"});
  std::vector<fs::path> written{out};

  const auto land = landscape(rp);
  Table cp;
  cp.columns = {"theta", "branch", "kind", "value", "second_derivative"};
  for (const auto& p : land.points)
    cp.rows.push_back({polar_angle(p.theta), std::string(branch_of(p.theta) == Branch::Plus ? "plus" : "minus"),
                       std::string(to_string(p.kind)), p.value, p.second_derivative});
  const auto side = with_suffix(out, "_critical");
  write_table(side, cfg, cp, {land.flat ? "landscape is flat" : "critical points of both branches"});
  written.push_back(side);

  if (cfg.plot_script) {
    std::ostringstream os;
    os << gnuplot_preamble(cfg, out);
    os << "set xlabel 'theta'\nset ylabel 'V / k_B [K]'\n";
    os << "plot data using 1:2 with lines, data using 1:3 with lines\n";
    write_text(plot_path(out), os.str());
    written.push_back(plot_path(out));
  }
  return written;
}

inline std::vector<fs::path> cmd_compounds(const RunConfig& cfg, std::ostream& stdout_stream) {
  if (!cfg.export_id.empty()) {
    const auto text = serialize_compound(find_compound(cfg.export_id));
    if (cfg.out.empty()) {
      stdout_stream << text;
      return {};
    }
    write_text(cfg.out, text);
    return {cfg.out};
  }
  Table t;
  t.columns = {"id", "two_s", "d", "e", "b40", "b42", "b43", "b44", "source"};
  for (const auto& c : builtin_catalog())
    t.rows.push_back({c.id, static_cast<std::int64_t>(c.spin.two_s()), c.aniso.d, c.aniso.e, c.aniso.b40,
                      c.aniso.b42, c.aniso.b43, c.aniso.b44, c.source});
  if (cfg.out.empty()) {
    if (cfg.format == Format::Csv)
      write_csv(stdout_stream, cfg, t);
    else
      write_json(stdout_stream, cfg, t);
    return {};
  }
  write_table(cfg.out, cfg, t);
  return {cfg.out};
}

inline std::vector<fs::path> dispatch(const RunConfig& cfg, std::ostream& stdout_stream) {
  cfg.validate();
  if (cfg.subcommand == "spectrum") return cmd_spectrum(cfg);
  if (cfg.subcommand == "separatrix") return cmd_separatrix(cfg);
  if (cfg.subcommand == "fidelity-map") return cmd_fidelity_map(cfg);
  if (cfg.subcommand == "heatcap-map") return cmd_heatcap_map(cfg);
  if (cfg.subcommand == "potential") return cmd_potential(cfg);
  if (cfg.subcommand == "compounds") return cmd_compounds(cfg, stdout_stream);
  throw InvalidInput("unknown subcommand '" + cfg.subcommand + "'");
}

}  // namespace smm::cli
