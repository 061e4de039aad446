#ifndef JTM_CLI_CONFIG_HPP
#define JTM_CLI_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <string>

#include "jtm/errors.hpp"
#include "jtm/market.hpp"

namespace jtm::cli {

/// A config problem, reported as "<file>:<line>:<col>: <field>: <message>".
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Output file or directory could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

enum class UtilityKind { Log, Power };

struct McSettings {
  std::uint64_t n_paths = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

struct Config {
  std::string source;
  MarketParams market;
  double s0 = 1.0;
  std::size_t initial_regime = 0;
  UtilityKind utility = UtilityKind::Log;
  double alpha = 0.5;
  double x0 = 1.0;
  McSettings mc{};
  std::string output = "out";
};

Config load_config(const std::string& path);
Config parse_config(const std::string& text, const std::string& source);

/// Annotated example documenting every key.
const std::string& config_schema();

}  // namespace jtm::cli

#endif
