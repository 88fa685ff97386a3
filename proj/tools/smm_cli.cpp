// smm: spectra, separatrices, fidelity and heat-capacity maps for
// single-molecule magnet spin Hamiltonians.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

smm::cli::Range to_range(const std::vector<double>& v) { return {v.at(0), v.at(1)}; }

void parse_grid(const std::string& s, smm::cli::RunConfig& cfg) {
  const auto x = s.find('x');
  if (x == std::string::npos) {
    cfg.grid1 = cfg.grid2 = smm::parse_int(s, "grid");
  } else {
    cfg.grid1 = smm::parse_int(s.substr(0, x), "grid");
    cfg.grid2 = smm::parse_int(s.substr(x + 1), "grid");
  }
}

}  // namespace

int main(int argc, char** argv) {
  smm::cli::RunConfig cfg;
  CLI::App app{"Spin Hamiltonian spectra, catastrophe separatrices and QPT observables"};
  app.set_version_flag("--version", std::string(smm::kVersion));
  app.require_subcommand(1);

  std::vector<double> bz_range, bx_range, r3_range, range1, range2, r_params, temps;
  std::string grid, format = "csv";
  int two_s = 0;
  double bx = 0.0;

  app.add_option("--compound", cfg.compound, "Built-in compound id (see 'compounds')")->capture_default_str();
  app.add_option("--compound-file", cfg.compound_file, "Compound file (key = value format)");
  app.add_option("--two-s", two_s, "Override 2S of the spin");
  app.add_option("--bx", bx, "Transverse field mu_B Bx / k_B [K]; overrides r1");
  app.add_option("--by", cfg.by, "Field mu_B By / k_B [K] (quantum commands only)");
  app.add_option("--bz-range", bz_range, "lo,hi in K")->delimiter(',')->expected(2);
  app.add_option("--bx-range", bx_range, "lo,hi in K")->delimiter(',')->expected(2);
  app.add_option("--r3-range", r3_range, "lo,hi in K")->delimiter(',')->expected(2);
  app.add_option("--range1", range1, "lo,hi for the first separatrix axis")->delimiter(',')->expected(2);
  app.add_option("--range2", range2, "lo,hi for the second separatrix axis")->delimiter(',')->expected(2);
  app.add_option("--r-params", r_params, "r1,r2,r3,r4,r5 in K (direct semiclassical input)")
      ->delimiter(',')
      ->expected(5);
  app.add_option("--plane", cfg.plane, "Separatrix plane axes, e.g. bz,r3 or bz,bx")->capture_default_str();
  app.add_option("--grid", grid, "Resolution N or NxM (default 200x200)");
  app.add_option("--temps", temps, "Temperatures in K, comma separated")->delimiter(',');
  app.add_option("--d-increment", cfg.d_increment, "Fidelity increment d [K]")->capture_default_str();
  app.add_option("--axis", cfg.axis, "Fidelity scan axis: bx, by or bz")->capture_default_str();
  app.add_option("--out", cfg.out, "Output file");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_flag("--plot-script", cfg.plot_script, "Also write a gnuplot script next to the data");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

  for (const char* name : {"spectrum", "separatrix", "fidelity-map", "heatcap-map", "potential", "compounds"})
    app.add_subcommand(name)->fallthrough();
  app.get_subcommand("spectrum")->description("Eigenvalues along a bz sweep plus separatrix crossings");
  app.get_subcommand("separatrix")->description("Bifurcation and Maxwell polylines in a parameter plane");
  app.get_subcommand("fidelity-map")->description("Ground-state fidelity over a (bz, bx) grid");
  app.get_subcommand("heatcap-map")->description("Heat capacity over a (bz, bx) grid, one file per temperature");
  app.get_subcommand("potential")->description("Semiclassical potential curves and critical points");
  auto* compounds = app.get_subcommand("compounds");
  compounds->description("List the built-in catalog or export one entry");
  compounds->add_option("--export", cfg.export_id, "Write this compound in file format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (app.count("--two-s")) cfg.two_s = two_s;
    if (app.count("--bx")) cfg.bx = bx;
    if (!bz_range.empty()) cfg.bz_range = to_range(bz_range);
    if (!bx_range.empty()) cfg.bx_range = to_range(bx_range);
    if (!r3_range.empty()) cfg.r3_range = to_range(r3_range);
    if (!range1.empty()) cfg.range1 = to_range(range1);
    if (!range2.empty()) cfg.range2 = to_range(range2);
    if (!r_params.empty()) cfg.r_params = r_params;
    if (!temps.empty()) cfg.temps = temps;
    if (!grid.empty()) parse_grid(grid, cfg);
    cfg.format = format == "json" ? smm::cli::Format::Json : smm::cli::Format::Csv;

    const auto written = smm::cli::dispatch(cfg, std::cout);
    for (const auto& p : written) std::cerr << "wrote " << p.string() << '\n';
    return 0;
  } catch (const smm::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const smm::ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
