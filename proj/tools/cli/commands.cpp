#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>

#include "csv.hpp"
#include "jtm/estimator.hpp"
#include "jtm/measure_change.hpp"
#include "jtm/monte_carlo.hpp"
#include "jtm/optimal_policy.hpp"
#include "jtm/telegraph_moments.hpp"

namespace jtm::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSeMultiple = 4.0;
constexpr double kPathwiseTol = 1e-12;

std::filesystem::path output_file(const Config& cfg, const std::string& explicit_path,
                                  const std::string& name) {
  if (!explicit_path.empty()) return explicit_path;
  return std::filesystem::path(cfg.output) / name;
}

std::string num(double v) { return format_double(v); }

std::string short_num(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(8) << v;
  return os.str();
}

Policy optimal_policy(const Config& cfg) {
  if (cfg.utility == UtilityKind::Log) return solve_log(cfg.market).policy(cfg.market, cfg.x0);
  return solve_power(cfg.market, cfg.alpha).policy(cfg.market, cfg.x0);
}

Estimate mc(const Config& cfg, Functional f, std::size_t initial) {
  return run(cfg.market, McJob{std::move(f), cfg.mc.n_paths, initial, cfg.mc.seed, cfg.mc.workers});
}

Check mc_check(const std::string& suite, const std::string& name, std::size_t initial, double t,
               double closed, const Estimate& e) {
  const double tol = kSeMultiple * e.std_error;
  return Check{suite, name, initial, t, closed, e.mean, e.std_error, tol,
               std::abs(e.mean - closed) <= tol};
}

std::vector<double> check_times(double horizon) {
  if (horizon == 0.0) return {0.0};
  return {horizon / 10.0, horizon / 2.0, horizon};
}

void moments_suite(const Config& cfg, std::vector<Check>& out, std::vector<std::string>& notes) {
  const MarketParams& p = cfg.market;
  const TelegraphSpec spec = return_spec(p, false);
  std::optional<TelegraphSpec> spec_exp;
  try {
    spec_exp = return_spec(p, true);
  } catch (const NumericalError& e) {
    notes.push_back(std::string("exp_moment rows skipped: ") + e.what());
  }
  for (double t : check_times(p.horizon())) {
    for (std::size_t i : {0u, 1u}) {
      out.push_back(mc_check("moments", "mean", i, t, mean(spec, t, i), mc(cfg, fn::TelegraphMean{t}, i)));
      if (spec_exp) {
        out.push_back(mc_check("moments", "exp_moment", i, t, exp_moment(*spec_exp, t, i),
                               mc(cfg, fn::ExpMoment{t}, i)));
      }
    }
  }
}

void martingale_suite(const Config& cfg, std::vector<Check>& out) {
  const MarketParams& p = cfg.market;
  const double T = p.horizon();
  const auto log_sol = solve_log(p);
  std::vector<std::pair<std::string, TiltSpec>> tilts{
      {"z_terminal_log_tilt", TiltSpec::log(p, log_sol.pi_bar)}};
  if (cfg.utility == UtilityKind::Power) {
    const auto psol = solve_power(p, cfg.alpha);
    tilts.emplace_back("z_terminal_power_tilt", TiltSpec::power(p, psol.pi_bar, cfg.alpha));
  }
  const std::vector<std::pair<std::string, MarkSet>> sets{
      {"compensator(-inf,0]", MarkSet{-std::numeric_limits<double>::infinity(), 0.0}},
      {"compensator(0,inf]", MarkSet{0.0, std::numeric_limits<double>::infinity()}},
      {"compensator(-0.5,0.5]", MarkSet{-0.5, 0.5}}};
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.push_back(mc_check("martingale", "compensated_jumps", i, T, 0.0,
                           mc(cfg, fn::CompensatedJumpMean{T}, i)));
    for (const auto& [name, tilt] : tilts) {
      out.push_back(mc_check("martingale", name, i, T, 1.0, mc(cfg, fn::ZTerminal{tilt}, i)));
    }
    for (const auto& [name, set] : sets) {
      out.push_back(mc_check("martingale", name, i, T, 0.0, mc(cfg, fn::CompensatorResidual{set, T}, i)));
    }
  }
}

void budget_suite(const Config& cfg, std::vector<Check>& out) {
  const MarketParams& p = cfg.market;
  const double T = p.horizon();
  const auto sol = solve_log(p);
  const TiltSpec tilt = TiltSpec::log(p, sol.pi_bar);
  const Policy policy = sol.policy(p, cfg.x0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto gaps = sample_values(cfg.mc.n_paths, cfg.mc.seed, cfg.mc.workers, [&](std::uint64_t k) {
      return budget_gap_on_path(p, tilt, policy, cfg.x0, simulate_regime_path(p, i, cfg.mc.seed, k));
    });
    double worst = 0.0;
    for (double g : gaps) worst = std::max(worst, std::abs(g));
    out.push_back(Check{"budget", "log_optimal_max_abs_gap", i, T, 0.0, worst, kNaN, kPathwiseTol,
                        worst <= kPathwiseTol});
  }
  if (cfg.utility == UtilityKind::Power) {
    const auto psol = solve_power(p, cfg.alpha);
    const MarketParams q = consistent_market(p, psol);
    const TiltSpec ptilt = TiltSpec::power(q, psol.pi_bar, cfg.alpha);
    const Policy ppolicy = psol.policy(q, cfg.x0);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Estimate e = run(q, McJob{fn::BudgetGap{ptilt, ppolicy, cfg.x0}, cfg.mc.n_paths, i,
                                      cfg.mc.seed, cfg.mc.workers});
      out.push_back(mc_check("budget", "power_optimal_mean_gap", i, T, 0.0, e));
    }
  }
}

void value_suite(const Config& cfg, std::vector<Check>& out) {
  const MarketParams& p = cfg.market;
  const double T = p.horizon();
  const auto sol = solve_log(p);
  const Policy policy = sol.policy(p, cfg.x0);
  for (std::size_t i : {0u, 1u}) {
    out.push_back(mc_check("value", "log_value", i, T, log_value_two_regime(p, sol, cfg.x0, i),
                           mc(cfg, fn::UtilityLog{policy, cfg.x0}, i)));
  }
  if (cfg.utility == UtilityKind::Power) {
    const auto psol = solve_power(p, cfg.alpha);
    const Policy no_consumption(p, psol.pi_bar);
    for (std::size_t i : {0u, 1u}) {
      out.push_back(mc_check("value", "power_value", i, T,
                             power_value_two_regime(p, psol, cfg.x0, i),
                             mc(cfg, fn::UtilityPower{no_consumption, cfg.x0, cfg.alpha}, i)));
    }
  }
}

}  // namespace

std::vector<double> Range::points() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  return out;
}

Range parse_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ValidationError("--range: expected a:b:n, got '" + text + "'");
  auto parse = [&](std::string_view s, auto& v) {
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
      throw ValidationError("--range: cannot parse '" + std::string(s) + "' in '" + text + "'");
    }
  };
  const std::string_view all(text);
  Range r;
  parse(all.substr(0, c1), r.a);
  parse(all.substr(c1 + 1, c2 - c1 - 1), r.b);
  parse(all.substr(c2 + 1), r.n);
  if (!std::isfinite(r.a) || !std::isfinite(r.b)) throw ValidationError("--range: a and b must be finite");
  return r;
}

int cmd_simulate(const Config& cfg, const SimulateOptions& opt, std::ostream& report) {
  const MarketParams& p = cfg.market;
  const double T = p.horizon();
  const double dt = opt.grid.value_or(T > 0.0 ? T / 100.0 : 1.0);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("--grid must be finite and > 0");
  if (T / dt > 1e7) throw ValidationError("--grid gives more than 1e7 points per path");
  if (opt.paths == 0) throw ValidationError("--paths must be >= 1");

  std::vector<double> grid;
  for (std::uint64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t >= T) break;
    grid.push_back(t);
  }
  grid.push_back(T);

  const Policy policy = optimal_policy(cfg);
  std::vector<double> drift;
  for (const auto& reg : p.regimes()) drift.push_back(reg.mu);
  const auto jump = [&p](std::size_t i, double y) { return p.regime(i).jump_map(y); };

  const auto path_file = output_file(cfg, opt.out, "simulate.csv");
  auto file = open_output(path_file);
  CsvWriter csv(file, {"path_id", "t", "regime", "X", "S", "V"});
  std::uint64_t rows = 0;
  for (std::uint64_t id = 0; id < opt.paths; ++id) {
    const RegimePath path = simulate_regime_path(p, cfg.initial_regime, cfg.mc.seed, id);
    auto emit = [&](double t, std::size_t regime, Limit side) {
      csv.row({id, t, regime, path_telegraph(path, t, drift, jump, side),
               price_value(p, path, t, cfg.s0, side),
               wealth_with_consumption(p, path, policy, t, cfg.x0, side)});
      ++rows;
    };
    std::size_t g = 0;
    for (const JumpEvent& ev : path.events) {
      for (; g < grid.size() && grid[g] < ev.time; ++g) emit(grid[g], path.state_at(grid[g]), Limit::Right);
      for (; g < grid.size() && grid[g] == ev.time; ++g) {
      }
      emit(ev.time, ev.from, Limit::Left);
      emit(ev.time, ev.to, Limit::Right);
    }
    for (; g < grid.size(); ++g) emit(grid[g], path.state_at(grid[g]), Limit::Right);
  }
  if (!file) throw IoError("write to " + path_file.string() + " failed");
  report << "simulate: " << opt.paths << " path(s), " << rows << " rows -> " << path_file.string()
         << '\n';
  return kOk;
}

int cmd_solve(const Config& cfg, const SolveOptions& opt, std::ostream& report) {
  const MarketParams& p = cfg.market;
  const UtilityKind kind = opt.utility.value_or(cfg.utility);
  const std::size_t m = p.size();
  const double T = p.horizon();

  if (kind == UtilityKind::Log) {
    const auto sol = solve_log(p);
    const auto path_file = output_file(cfg, "", "solve_log.csv");
    auto file = open_output(path_file);
    CsvWriter csv(file, {"regime", "mu", "pi_bar", "g_residual", "bracket_lo", "bracket_hi",
                         "g_lo", "g_hi", "value"});
    report << "log utility, x0 = " << num(cfg.x0) << ", T = " << num(T) << '\n';
    for (std::size_t i = 0; i < m; ++i) {
      const double value = m == 2 ? log_value_two_regime(p, sol, cfg.x0, i) : kNaN;
      report << "  regime " << i << ": pi_bar = " << num(sol.pi_bar[i])
             << "  |g(pi_bar)| = " << num(sol.g_residual[i]) << "  bracket [" << num(sol.bracket[i].lo)
             << ", " << num(sol.bracket[i].hi) << "]\n";
      if (m == 2) report << "    theta_" << i << "(x0) = " << num(value) << '\n';
      csv.row({i, p.regime(i).mu, sol.pi_bar[i], sol.g_residual[i], sol.bracket[i].lo,
               sol.bracket[i].hi, sol.bracket_g_lo[i], sol.bracket_g_hi[i], value});
    }
    report << "  consumption: c_t = x0 * V_t(x=1, no consumption) / (T + 1), x0/(T+1) = "
           << num(cfg.x0 / (T + 1.0)) << '\n';
    report << "  table -> " << path_file.string() << '\n';
    return kOk;
  }

  const double alpha = opt.alpha.value_or(cfg.alpha);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("--alpha must lie in (0, 1)");
  const auto sol = solve_power(p, alpha);
  const Policy policy = sol.policy(p, cfg.x0);
  const auto path_file = output_file(cfg, "", "solve_power.csv");
  auto file = open_output(path_file);
  CsvWriter csv(file, {"regime", "pi_bar", "mu_configured", "mu_consistent", "res3", "res4",
                       "res3_configured", "consumption_log_drift", "value", "consistent"});
  report << "power utility, alpha = " << num(alpha) << ", x0 = " << num(cfg.x0) << ", T = " << num(T)
         << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    const double value = m == 2 ? power_value_two_regime(p, sol, cfg.x0, i) : kNaN;
    const double drift = policy.power_consumption_drift()[i];
    report << "  regime " << i << ": pi_bar = " << num(sol.pi_bar[i]) << "  mu configured = "
           << num(p.regime(i).mu) << "  mu consistent = " << num(sol.mu_consistent[i]) << '\n'
           << "    residuals at mu consistent: " << num(sol.res3[i]) << ", " << num(sol.res4[i])
           << "  drift residual at configured mu: " << num(sol.res3_configured[i]) << '\n'
           << "    consumption log-drift (lambda/alpha)(1 - Phi) = " << num(drift) << '\n';
    if (m == 2) report << "    theta_" << i << "(x0) = " << num(value) << '\n';
    csv.row({i, sol.pi_bar[i], p.regime(i).mu, sol.mu_consistent[i], sol.res3[i], sol.res4[i],
             sol.res3_configured[i], drift, value, sol.consistent ? 1 : 0});
  }
  report << "  consumption: c_t = x0/(T+1) * exp(int drift ds) * prod(1 + pi_bar f(Y)), x0/(T+1) = "
         << num(cfg.x0 / (T + 1.0)) << '\n';
  if (!sol.consistent) {
    report << "  INCONSISTENT: configured mu differs from mu consistent; pi_bar is optimal only "
              "for the consistent drifts\n";
  }
  report << "  table -> " << path_file.string() << '\n';
  return kOk;
}

int cmd_figure_data(const Config& cfg, const FigureOptions& opt, std::ostream& report) {
  const MarketParams& p = cfg.market;
  const auto grid = opt.range.points();
  if (opt.figure == "g-curves") {
    const auto path_file = output_file(cfg, opt.out, "figure_g_curves.csv");
    auto file = open_output(path_file);
    CsvWriter csv(file, {"regime", "pi", "g", "diagnostic"});
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Interval dom = p.fraction_domain(i);
      for (double pi : grid) {
        if (!dom.contains(pi)) {
          csv.row({i, pi, kNaN, "outside fraction domain"});
          continue;
        }
        try {
          csv.row({i, pi, g_log(p, i, pi), ""});
        } catch (const NumericalError& e) {
          csv.row({i, pi, kNaN, e.what()});
        }
      }
    }
    report << "figure-data g-curves: " << grid.size() << " points per regime -> "
           << path_file.string() << '\n';
    return kOk;
  }
  if (opt.figure == "pi-vs-mu") {
    const auto path_file = output_file(cfg, opt.out, "figure_pi_vs_mu.csv");
    auto file = open_output(path_file);
    CsvWriter csv(file, {"regime", "mu", "pi_bar", "diagnostic"});
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (double mu : grid) {
        try {
          csv.row({i, mu, solve_log_regime(p.with_drift(i, mu), i).root, ""});
        } catch (const NumericalError& e) {
          csv.row({i, mu, kNaN, e.what()});
        }
      }
    }
    report << "figure-data pi-vs-mu: " << grid.size() << " points per regime -> "
           << path_file.string() << '\n';
    return kOk;
  }
  throw ValidationError("--figure must be g-curves or pi-vs-mu, got '" + opt.figure + "'");
}

std::vector<Check> run_suite(const Config& cfg, const std::string& suite,
                             std::vector<std::string>* notes) {
  static const std::vector<std::string> names{"moments", "martingale", "budget", "value", "all"};
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw ValidationError("--suite must be moments, martingale, budget, value or all");
  }
  std::vector<Check> out;
  std::vector<std::string> ignored;
  const bool all = suite == "all";
  if (all || suite == "moments") moments_suite(cfg, out, notes ? *notes : ignored);
  if (all || suite == "martingale") martingale_suite(cfg, out);
  if (all || suite == "budget") budget_suite(cfg, out);
  if (all || suite == "value") value_suite(cfg, out);
  return out;
}

int cmd_verify(const Config& cfg, const VerifyOptions& opt, std::ostream& report) {
  std::vector<std::string> notes;
  const std::vector<Check> checks = run_suite(cfg, opt.suite, &notes);

  const auto path_file = output_file(cfg, "", "verify_" + opt.suite + ".csv");
  auto file = open_output(path_file);
  CsvWriter csv(file, {"suite", "check", "initial", "t", "closed_form", "estimate", "std_error",
                       "se_multiple", "tolerance", "status"});
  report << "verify " << opt.suite << ": n_paths = " << cfg.mc.n_paths << ", seed = " << cfg.mc.seed
         << '\n';
  report << std::left << std::setw(11) << "suite" << std::setw(26) << "check" << std::setw(4) << "i"
         << std::setw(10) << "t" << std::setw(16) << "closed" << std::setw(16) << "estimate"
         << std::setw(14) << "std_error" << std::setw(14) << "z" << "status\n";
  int failed = 0;
  for (const Check& c : checks) {
    const double z = c.std_error > 0.0 ? (c.estimate - c.closed) / c.std_error : kNaN;
    const char* status = c.pass ? "PASS" : "FAIL";
    failed += c.pass ? 0 : 1;
    csv.row({c.suite, c.name, c.initial, c.t, c.closed, c.estimate, c.std_error, z, c.tolerance, status});
    report << std::setw(11) << c.suite << std::setw(26) << c.name << std::setw(4) << c.initial
           << std::setw(10) << short_num(c.t) << std::setw(16) << short_num(c.closed) << std::setw(16)
           << short_num(c.estimate) << std::setw(14) << short_num(c.std_error) << std::setw(14)
           << short_num(z) << status << '\n';
  }
  for (const auto& n : notes) report << "note: " << n << '\n';
  report << "table -> " << path_file.string() << '\n';
  if (failed > 0) {
    report << failed << " of " << checks.size() << " checks FAILED\n";
    for (const Check& c : checks) {
      if (!c.pass) {
        report << "FAILED " << c.suite << '/' << c.name << " initial=" << c.initial
               << " t=" << num(c.t) << " closed=" << num(c.closed) << " estimate=" << num(c.estimate)
               << " tolerance=" << num(c.tolerance) << '\n';
      }
    }
    return kVerification;
  }
  report << "all " << checks.size() << " checks passed\n";
  return kOk;
}

}  // namespace jtm::cli
