#include "app.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "commands.hpp"
#include "config.hpp"

namespace jtm::cli {
namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out_dir;
  bool print_schema = false;
};

Config load_with_overrides(const std::string& path, const Globals& g) {
  Config cfg = load_config(path);
  if (g.seed) cfg.mc.seed = *g.seed;
  if (g.workers) cfg.mc.workers = *g.workers;
  if (g.out_dir) cfg.output = *g.out_dir;
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regime-switching jump market: simulation, optimal policies and Monte Carlo checks",
               "jtm"};
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Monte Carlo seed (overrides mc.seed)");
  app.add_option("--workers", g.workers, "worker threads, 0 = all cores (overrides mc.workers)");
  app.add_option("--out-dir", g.out_dir, "output directory (overrides output)");
  app.add_flag("--print-schema", g.print_schema, "print the config schema and exit");

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "YAML config file")->required();
  };

  SimulateOptions sim;
  std::string sim_grid;
  auto* simulate = app.add_subcommand("simulate", "write sample paths (path_id,t,regime,X,S,V)");
  add_config(simulate);
  simulate->add_option("--paths", sim.paths, "number of paths")->capture_default_str();
  simulate->add_option("--grid", sim.grid, "grid spacing, default T/100");
  simulate->add_option("--out", sim.out, "output CSV, default <out-dir>/simulate.csv");

  SolveOptions solve;
  std::string utility;
  auto* solve_cmd = app.add_subcommand("solve", "solve the optimality conditions");
  add_config(solve_cmd);
  solve_cmd->add_option("--utility", utility, "log or power (overrides utility.kind)")
      ->check(CLI::IsMember({"log", "power"}));
  solve_cmd->add_option("--alpha", solve.alpha, "power utility exponent (overrides utility.alpha)");

  FigureOptions fig;
  std::string range = "0:1:0";
  auto* figure = app.add_subcommand("figure-data", "tabulate g curves or the optimal fraction against mu");
  add_config(figure);
  figure->add_option("--figure", fig.figure, "g-curves or pi-vs-mu")
      ->check(CLI::IsMember({"g-curves", "pi-vs-mu"}))
      ->capture_default_str();
  figure->add_option("--range", range, "a:b:n, n equally spaced points")->required();
  figure->add_option("--out", fig.out, "output CSV");

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "compare closed forms with Monte Carlo");
  add_config(verify);
  verify->add_option("--suite", ver.suite, "moments, martingale, budget, value or all")
      ->check(CLI::IsMember({"moments", "martingale", "budget", "value", "all"}))
      ->capture_default_str();

  auto* schema = app.add_subcommand("print-schema", "print the config schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (g.print_schema || schema->parsed()) {
      out << config_schema();
      return kOk;
    }
    if (simulate->parsed()) {
      return cmd_simulate(load_with_overrides(config_path, g), sim, out);
    }
    if (solve_cmd->parsed()) {
      if (!utility.empty()) solve.utility = utility == "log" ? UtilityKind::Log : UtilityKind::Power;
      return cmd_solve(load_with_overrides(config_path, g), solve, out);
    }
    if (figure->parsed()) {
      fig.range = parse_range(range);
      return cmd_figure_data(load_with_overrides(config_path, g), fig, out);
    }
    if (verify->parsed()) {
      return cmd_verify(load_with_overrides(config_path, g), ver, out);
    }
    err << app.help();
    return kValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const NoRootError& e) {
    err << "error: " << e.what() << "\n  bracket [" << format_double(e.lo()) << ", "
        << format_double(e.hi()) << "], f = [" << format_double(e.f_lo()) << ", "
        << format_double(e.f_hi()) << "]\n";
    return kNumerical;
  } catch (const PathError& e) {
    err << "error: path " << e.path_index() << " (seed " << e.seed() << "): " << e.what() << '\n';
    return kNumerical;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const ModelViolation& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const ReproducibilityError& e) {
    err << "error: " << e.what() << '\n';
    return kVerification;
  }
}

}  // namespace jtm::cli
