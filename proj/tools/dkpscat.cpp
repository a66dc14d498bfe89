// dkpscat: step-potential scattering for spin-0 and spin-1 bosons in the
// Duffin-Kemmer-Petiau first-order formalism, with Dirac and Klein-Gordon
// contrast solvers and 1D wave-packet evolution.
//
// Subcommands: dump-rep, verify-algebra, currents, scatter, sweep, evolve,
// plot-data.  Exit codes: 0 ok, 1 runtime error, 2 usage error.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "dkp/runio.hpp"

namespace fs = std::filesystem;

namespace {

// config file values first, command line flags override
void merge_flag(dkp::ParamMap& map, const std::string& key,
                const std::optional<std::string>& value) {
  if (value) map[key] = *value;
}

struct CommonOpts {
  std::string runs_dir = "runs";
  std::optional<std::string> config;
};

dkp::ParamMap load_config(const CommonOpts& c) {
  if (!c.config) return {};
  return dkp::parse_config_file(*c.config);
}

int finish(const dkp::RunResult& res) {
  std::cout << "run directory: " << res.dir.string() << "\n";
  for (const auto& [path, hash] : res.manifest.outputs)
    std::cout << "  output: " << path << " (" << hash << ")\n";
  if (res.manifest.status_code != 0) {
    std::cerr << "error: " << res.manifest.status_message << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Duffin-Kemmer-Petiau step scattering toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--runs-dir", common.runs_dir, "directory for run outputs");

  // ---- dump-rep ----
  auto* dump = app.add_subcommand("dump-rep", "write one representation as text");
  std::string dump_rep = "spin0";
  dump->add_option("--rep", dump_rep, "spin0 or spin1");

  // ---- verify-algebra ----
  auto* verify = app.add_subcommand("verify-algebra",
                                    "check every representation identity");

  // ---- currents ----
  auto* cur = app.add_subcommand("currents", "print (j, S) for a plane wave");
  std::optional<std::string> cur_particle, cur_k0, cur_mass, cur_A, cur_dir;
  cur->add_option("--particle", cur_particle, "spin0|spin1|photon");
  cur->add_option("--k0", cur_k0, "frequency");
  cur->add_option("--mass", cur_mass, "rest mass");
  cur->add_option("--A", cur_A, "scalar amplitude");
  cur->add_option("--direction", cur_dir, "+x or -x");

  // ---- scatter ----
  auto* sc = app.add_subcommand("scatter", "closed-form step scattering");
  std::optional<std::string> sc_particle, sc_k0, sc_mass, sc_V, sc_eps, sc_ratio,
      sc_branch, sc_current, sc_config;
  sc->add_option("--particle", sc_particle, "spin0|spin1|photon|dirac|kg");
  sc->add_option("--k0", sc_k0, "conserved frequency");
  sc->add_option("--mass", sc_mass, "rest mass");
  sc->add_option("--V", sc_V, "step height (minimal coupling)");
  sc->add_option("--eps", sc_eps, "barrier parameter of the spin-1 step");
  sc->add_option("--ratio", sc_ratio, "wavenumber ratio k'/k (or index n)");
  sc->add_option("--branch", sc_branch, "pos|neg region-2 wavenumber sign");
  sc->add_option("--current", sc_current, "S|j|poynting");
  sc->add_option("--config", sc_config, "key = value file, flags override");

  // ---- sweep ----
  auto* sw = app.add_subcommand("sweep", "parameter sweep to CSV");
  std::optional<std::string> sw_particle, sw_k0, sw_mass, sw_V, sw_eps, sw_ratio,
      sw_branch, sw_config;
  std::string sw_param, sw_out;
  double sw_from = 0.0, sw_to = 1.0;
  int sw_steps = 2;
  sw->add_option("--particle", sw_particle, "spin0|spin1|photon|dirac|kg");
  sw->add_option("--k0", sw_k0, "conserved frequency");
  sw->add_option("--mass", sw_mass, "rest mass");
  sw->add_option("--V", sw_V, "step height");
  sw->add_option("--eps", sw_eps, "barrier parameter");
  sw->add_option("--ratio", sw_ratio, "wavenumber ratio");
  sw->add_option("--branch", sw_branch, "pos|neg");
  sw->add_option("--param", sw_param, "V|eps|ratio|k0|mass")->required();
  sw->add_option("--from", sw_from, "sweep start")->required();
  sw->add_option("--to", sw_to, "sweep end")->required();
  sw->add_option("--steps", sw_steps, "grid points (>= 2)")->required();
  sw->add_option("--out", sw_out, "copy the sweep CSV to this path");
  sw->add_option("--config", sw_config, "key = value file, flags override");

  // ---- evolve ----
  auto* ev = app.add_subcommand("evolve", "1D wave-packet scattering run");
  std::string ev_particle, ev_config;
  std::vector<std::string> ev_sets;
  ev->add_option("--particle", ev_particle, "spin0|photon|dkp-free")->required();
  ev->add_option("--config", ev_config, "flat key = value configuration")->required();
  ev->add_option("--set", ev_sets, "override config entries, key=value");

  // ---- plot-data ----
  auto* pl = app.add_subcommand("plot-data", "tidy CSV from a finished run");
  std::string pl_run, pl_kind, pl_out;
  pl->add_option("--run", pl_run, "run directory")->required();
  pl->add_option("--kind", pl_kind, "R_vs_param|snapshot_heatline|flux_vs_time|x_mean_vs_time")
      ->required();
  pl->add_option("--out", pl_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const fs::path runs_root = common.runs_dir;

    if (dump->parsed()) {
      dkp::ParamMap map{{"rep", dump_rep}};
      const auto res = dkp::run_and_persist("dump-rep", map, runs_root);
      std::cout << dkp::dump_representation(
          dump_rep == "spin1" ? dkp::Rep::Spin1 : dkp::Rep::Spin0);
      return finish(res);
    }

    if (verify->parsed()) {
      const auto res = dkp::run_and_persist("verify-algebra", {}, runs_root);
      std::cout << dkp::algebra_report_json();
      return finish(res);
    }

    if (cur->parsed()) {
      dkp::ParamMap map;
      merge_flag(map, "particle", cur_particle);
      merge_flag(map, "k0", cur_k0);
      merge_flag(map, "mass", cur_mass);
      merge_flag(map, "A", cur_A);
      merge_flag(map, "direction", cur_dir);
      const auto res = dkp::run_and_persist("currents", map, runs_root);
      if (res.manifest.status_code == 0) {
        std::ifstream in(res.dir / "currents.json");
        std::cout << in.rdbuf();
      }
      return finish(res);
    }

    if (sc->parsed()) {
      CommonOpts c = common;
      c.config = sc_config;
      dkp::ParamMap map = load_config(c);
      dkp::validate_keys(map, dkp::scatter_keys(), "scatter config file");
      merge_flag(map, "particle", sc_particle);
      merge_flag(map, "k0", sc_k0);
      merge_flag(map, "mass", sc_mass);
      merge_flag(map, "V", sc_V);
      merge_flag(map, "eps", sc_eps);
      merge_flag(map, "ratio", sc_ratio);
      merge_flag(map, "branch", sc_branch);
      merge_flag(map, "current", sc_current);
      // a flag-supplied barrier replaces the config one
      if (sc_V) { map.erase("eps"); map.erase("ratio"); map["V"] = *sc_V; }
      if (sc_eps) { map.erase("V"); map.erase("ratio"); map["eps"] = *sc_eps; }
      if (sc_ratio) { map.erase("V"); map.erase("eps"); map["ratio"] = *sc_ratio; }
      const auto res = dkp::run_and_persist("scatter", map, runs_root);
      if (res.manifest.status_code == 0) {
        std::ifstream in(res.dir / "summary.json");
        std::cout << in.rdbuf();
      }
      return finish(res);
    }

    if (sw->parsed()) {
      CommonOpts c = common;
      c.config = sw_config;
      dkp::ParamMap map = load_config(c);
      merge_flag(map, "particle", sw_particle);
      merge_flag(map, "k0", sw_k0);
      merge_flag(map, "mass", sw_mass);
      merge_flag(map, "V", sw_V);
      merge_flag(map, "eps", sw_eps);
      merge_flag(map, "ratio", sw_ratio);
      merge_flag(map, "branch", sw_branch);
      map["param"] = sw_param;
      map["from"] = dkp::format_double(sw_from);
      map["to"] = dkp::format_double(sw_to);
      map["steps"] = std::to_string(sw_steps);
      const auto res = dkp::run_and_persist("sweep", map, runs_root);
      if (res.manifest.status_code == 0 && !sw_out.empty())
        fs::copy_file(res.dir / "sweep.csv", sw_out,
                      fs::copy_options::overwrite_existing);
      return finish(res);
    }

    if (ev->parsed()) {
      dkp::ParamMap map = dkp::parse_config_file(ev_config);
      for (const auto& kv : ev_sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw dkp::UsageError("--set needs key=value, got: " + kv);
        map[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      map["particle"] = ev_particle;
      const auto res = dkp::run_and_persist("evolve", map, runs_root);
      if (res.manifest.status_code == 0) {
        std::ifstream in(res.dir / "summary.json");
        std::cout << in.rdbuf();
      }
      return finish(res);
    }

    if (pl->parsed()) {
      dkp::emit_plot_data(pl_run, pl_kind, pl_out);
      std::cout << "wrote " << pl_out << "\n";
      return 0;
    }
  } catch (const dkp::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const dkp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
