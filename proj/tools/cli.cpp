#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "jostlab/error.hpp"
#include "jostlab/jost.hpp"
#include "jostlab/potentials.hpp"
#include "jostlab/spectral.hpp"
#include "jostlab/verification.hpp"
#include "table.hpp"

namespace jostlab::cli {
namespace {

// Raised for failures that belong to the numerical stage of a command.
struct StageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string potential_path;
  int l = 0;
  double tol = 1e-10;
  std::string out_path;
  std::string format;

  double kmin = 0.0, kmax = 0.0;
  int n = 0;
  double emin = 0.0;
  double e_re = 0.0, e_im = 0.0;
  std::string sheet = "I";
  EnergyRegion region;
  int nx = 40, ny = 40;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Format output_format(const RunConfig& cfg) {
  if (cfg.format == "json") return Format::json;
  if (cfg.format == "csv") return Format::csv;
  return std::filesystem::path(cfg.out_path).extension() == ".json" ? Format::json : Format::csv;
}

Sheet parse_sheet(const std::string& s) {
  if (s == "I" || s == "1") return Sheet::I;
  if (s == "II" || s == "2") return Sheet::II;
  throw DomainError("--sheet must be I or II");
}

void check_common(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw DomainError("--tol must be positive");
  if (cfg.l < 0 || cfg.l > kMaxL) throw DomainError("--l must lie in [0, " + std::to_string(kMaxL) + "]");
}

void emit(const RunConfig& cfg, const Table& table, const std::string& stage) {
  if (const std::string bad = first_non_finite(table); !bad.empty()) {
    throw StageFailure(stage + ": non-finite value in column " + bad);
  }
  write_table(table, output_format(cfg), cfg.out_path);
}

Table roots_table(const std::vector<SpectralRoot>& roots) {
  Table t{{"energy_re", "energy_im", "sheet", "kind", "residual"}, {}};
  for (const auto& r : roots) {
    t.rows.push_back({r.energy.E.real(), r.energy.E.imag(), std::string(to_string(r.energy.sheet)),
                      std::string(to_string(r.kind)), r.residual});
  }
  return t;
}

std::string run_phase_shifts(const RunConfig& cfg, const PotentialSpec& spec) {
  if (cfg.n < 1) throw DomainError("--n must be at least 1");
  if (!(cfg.kmin > 0.0) || !(cfg.kmax >= cfg.kmin) || (cfg.n > 1 && !(cfg.kmax > cfg.kmin))) {
    throw DomainError("need 0 < kmin < kmax");
  }
  std::vector<double> ks(cfg.n);
  for (int i = 0; i < cfg.n; ++i) ks[i] = cfg.n == 1 ? cfg.kmin : cfg.kmin + (cfg.kmax - cfg.kmin) * i / (cfg.n - 1);
  const auto rows = phase_shift_scan(cfg.l, spec, ks, cfg.tol);
  Table t{{"k", "E", "delta", "abs_S"}, {}};
  for (const auto& r : rows) {
    if (r.pole) throw StageFailure("phase-shifts: S has a pole at k = " + fmt(r.k));
    t.rows.push_back({r.k, r.E, r.delta, r.abs_S});
  }
  emit(cfg, t, "phase-shifts");
  return "phase-shifts: " + std::to_string(rows.size()) + " rows, delta(kmax) = " + fmt(rows.back().delta);
}

std::string run_jost(const RunConfig& cfg, const PotentialSpec& spec) {
  const RiemannEnergy energy{Complex{cfg.e_re, cfg.e_im}, parse_sheet(cfg.sheet)};
  const JostPair p = jost_pair(cfg.l, energy, spec, cfg.tol);
  const bool pole = is_pole(p);
  const Complex s = pole ? Complex{NAN, NAN} : s_matrix(p);
  if (pole) throw StageFailure("jost: F_in vanishes at this energy (pole of S)");
  Table t{{"E", "sheet", "k", "f_in", "f_out", "F_in", "F_out", "S", "R"}, {}};
  t.rows.push_back({energy.E, std::string(to_string(energy.sheet)), p.k_used, p.f_in, p.f_out, p.F_in, p.F_out, s, p.R});
  emit(cfg, t, "jost");
  return "jost: |S| = " + fmt(std::abs(s)) + " at R = " + fmt(p.R);
}

SpectralOptions spectral_options(const RunConfig& cfg) {
  SpectralOptions o;
  o.root_tol = cfg.tol;
  o.ode_tol = std::min(1e-12, cfg.tol);
  return o;
}

std::string run_bound_states(const RunConfig& cfg, const PotentialSpec& spec) {
  const auto roots = find_bound_states(cfg.l, spec, cfg.emin, spectral_options(cfg));
  for (const auto& r : roots) {
    if (!r.converged) throw StageFailure("bound-states: root near E = " + fmt(r.energy.E.real()) + " did not converge");
  }
  emit(cfg, roots_table(roots), "bound-states");
  return "bound-states: " + std::to_string(roots.size()) + " found in [" + fmt(cfg.emin) + ", 0)";
}

std::string run_resonances(const RunConfig& cfg, const PotentialSpec& spec) {
  const ResonanceSearch search = find_resonances(cfg.l, spec, cfg.region, cfg.nx, cfg.ny, spectral_options(cfg));
  emit(cfg, roots_table(search.roots), "resonances");
  std::string line = "resonances: " + std::to_string(search.roots.size()) + " found, winding number " +
                     std::to_string(search.winding_number);
  if (search.coarse_grid_warning) line += " (warning: grid too coarse to resolve all enclosed zeros)";
  return line;
}

std::string run_scan(const RunConfig& cfg, const PotentialSpec& spec) {
  const ScanGrid grid =
      pole_scan_grid(cfg.l, spec, cfg.region, cfg.nx, cfg.ny, parse_sheet(cfg.sheet), std::min(1e-12, cfg.tol));
  Table t{{"E", "abs_f_in", "arg_f_in"}, {}};
  for (const auto& s : grid.samples) t.rows.push_back({s.E, s.abs_f_in, s.arg_f_in});
  emit(cfg, t, "scan");
  return "scan: " + std::to_string(grid.samples.size()) + " samples on sheet " + std::string(to_string(grid.sheet));
}

std::string run_verify(const RunConfig& cfg, const PotentialSpec& spec) {
  const VerificationReport report = run_verification(cfg.l, spec, cfg.tol);
  if (output_format(cfg) == Format::json) {
    std::ofstream out(cfg.out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + cfg.out_path);
    out << to_json(report);
    if (!out) throw std::runtime_error("cannot write output file: " + cfg.out_path);
  } else {
    Table t{{"name", "value", "threshold", "comparison", "pass"}, {}};
    for (const auto& c : report.checks) {
      t.rows.push_back({c.name, c.value, c.threshold, std::string(c.at_least ? ">=" : "<="),
                        std::string(c.pass ? "true" : "false")});
    }
    write_table(t, Format::csv, cfg.out_path);
  }
  for (const auto& c : report.checks) {
    if (!c.pass) throw StageFailure("verify: check " + c.name + " failed (value " + fmt(c.value) + ")");
  }
  std::string line = "verify: " + std::to_string(report.checks.size()) + " checks passed";
  if (!report.certified_class) line += " (outside the certified class; loop checks skipped)";
  return line;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jost functions, S-matrix, phase shifts and poles for radial potentials", "jostlab"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--potential", cfg.potential_path, "potential config file")->required();
    sub->add_option("--l", cfg.l, "angular momentum")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "numerical tolerance")->capture_default_str();
    sub->add_option("--out", cfg.out_path, "output file")->required();
    sub->add_option("--format", cfg.format, "csv or json (default from the --out extension)")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto region = [&](CLI::App* sub) {
    sub->add_option("--re-min", cfg.region.re_min)->required();
    sub->add_option("--re-max", cfg.region.re_max)->required();
    sub->add_option("--im-min", cfg.region.im_min)->required();
    sub->add_option("--im-max", cfg.region.im_max)->required();
    sub->add_option("--nx", cfg.nx, "grid points along Re E")->capture_default_str();
    sub->add_option("--ny", cfg.ny, "grid points along Im E")->capture_default_str();
  };

  using Runner = std::function<std::string(const RunConfig&, const PotentialSpec&)>;
  std::vector<std::pair<CLI::App*, Runner>> commands;

  auto* ps = app.add_subcommand("phase-shifts", "phase shifts on a uniform k grid");
  common(ps);
  ps->add_option("--kmin", cfg.kmin)->required();
  ps->add_option("--kmax", cfg.kmax)->required();
  ps->add_option("--n", cfg.n, "number of k points")->required();
  commands.emplace_back(ps, run_phase_shifts);

  auto* jo = app.add_subcommand("jost", "Jost functions and S at one energy");
  common(jo);
  jo->add_option("--e-re", cfg.e_re)->required();
  jo->add_option("--e-im", cfg.e_im)->capture_default_str();
  jo->add_option("--sheet", cfg.sheet, "I or II")->capture_default_str();
  commands.emplace_back(jo, run_jost);

  auto* bs = app.add_subcommand("bound-states", "bound states on [emin, 0)");
  common(bs);
  bs->add_option("--emin", cfg.emin)->required();
  commands.emplace_back(bs, run_bound_states);

  auto* rs = app.add_subcommand("resonances", "second-sheet zeros of F_in in a rectangle");
  common(rs);
  region(rs);
  commands.emplace_back(rs, run_resonances);

  auto* sc = app.add_subcommand("scan", "|F_in| and arg F_in on a rectangle");
  common(sc);
  region(sc);
  sc->add_option("--sheet", cfg.sheet, "I or II")->capture_default_str();
  commands.emplace_back(sc, run_scan);

  auto* ve = app.add_subcommand("verify", "analyticity and consistency checks");
  common(ve);
  commands.emplace_back(ve, run_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  for (const auto& [sub, run] : commands) {
    if (!sub->parsed()) continue;
    const std::string stage = sub->get_name();
    try {
      check_common(cfg);
      if (!std::filesystem::is_regular_file(cfg.potential_path)) {
        throw DomainError("potential file not found: " + cfg.potential_path);
      }
      const PotentialSpec spec = load_spec(cfg.potential_path);
      out << run(cfg, spec) << '\n';
      return kExitOk;
    } catch (const StageFailure& e) {
      err << "numerical failure: " << e.what() << '\n';
      return kExitNumerical;
    } catch (const NumericalError& e) {
      err << "numerical failure in " << stage << ": " << e.what() << '\n';
      return kExitNumerical;
    } catch (const DomainError& e) {
      err << "error: " << e.what() << "\n\n" << sub->help();
      return kExitConfig;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  return kExitConfig;
}

}  // namespace jostlab::cli
