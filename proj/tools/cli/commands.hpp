#ifndef JTM_CLI_COMMANDS_HPP
#define JTM_CLI_COMMANDS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace jtm::cli {

enum ExitCode : int {
  kOk = 0,
  kIoFailure = 1,
  kValidation = 2,
  kNumerical = 3,
  kVerification = 4,
};

struct SimulateOptions {
  std::uint64_t paths = 1;
  std::optional<double> grid;  // default T/100
  std::string out;             // default <output>/simulate.csv
};

struct SolveOptions {
  std::optional<UtilityKind> utility;
  std::optional<double> alpha;
};

struct Range {
  double a = 0.0, b = 0.0;
  std::size_t n = 0;
  std::vector<double> points() const;
};

/// "a:b:n"
Range parse_range(const std::string& text);

struct FigureOptions {
  std::string figure = "g-curves";  // g-curves | pi-vs-mu
  Range range;
  std::string out;
};

struct VerifyOptions {
  std::string suite = "all";  // moments | martingale | budget | value | all
};

/// One verification row. Monte Carlo rows pass when |estimate - closed| is
/// within 4 standard errors; pathwise rows compare the largest absolute
/// deviation with a fixed tolerance.
struct Check {
  std::string suite;
  std::string name;
  std::size_t initial = 0;
  double t = 0.0;
  double closed = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

int cmd_simulate(const Config& cfg, const SimulateOptions& opt, std::ostream& report);
int cmd_solve(const Config& cfg, const SolveOptions& opt, std::ostream& report);
int cmd_figure_data(const Config& cfg, const FigureOptions& opt, std::ostream& report);
int cmd_verify(const Config& cfg, const VerifyOptions& opt, std::ostream& report);

std::vector<Check> run_suite(const Config& cfg, const std::string& suite,
                             std::vector<std::string>* notes = nullptr);

}  // namespace jtm::cli

#endif
