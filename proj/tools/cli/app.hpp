#ifndef JTM_CLI_APP_HPP
#define JTM_CLI_APP_HPP

#include <ostream>

namespace jtm::cli {

/// Parses arguments, runs one subcommand and maps failures to exit codes:
/// 0 ok, 1 I/O, 2 validation, 3 numerical, 4 verification.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jtm::cli

#endif
