// cli.hpp: argument parsing and dispatch for the adamfind command line.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace adamfind::cli {

enum class Subcommand {
  Generate,
  FindRoot,
  Sweep,
  VerifyLimits,
  VerifyDeviation,
  VerifyBounds,
  Export,
};

std::string_view to_string(Subcommand sub);

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct CliInvocation {
  Subcommand subcommand = Subcommand::Generate;
  std::optional<std::string> config_path;

  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n;
  std::vector<double> epsilon;
  std::optional<std::uint64_t> trials;
  std::string out;
  unsigned threads = 1;
  /// Add wall-clock time to the JSON summary (off keeps files reproducible).
  bool timing = false;
  std::optional<double> eta;
  std::optional<double> ratio;
  std::optional<std::string> experiment_kind;

  std::string format;
  std::string method = "packet";
  std::optional<std::uint64_t> k;
  std::string in;
  std::vector<std::uint64_t> vertices;
  std::vector<double> levels;
  std::optional<std::uint64_t> reference_draws;
};

/// Parsing stopped before dispatch: help was printed (code 0) or the
/// arguments were rejected (code 2).
struct ParseExit {
  int code = kExitUsage;
};

using ParseResult = std::variant<CliInvocation, ParseExit>;

/// args excludes the program name. Help and diagnostics go to out / err.
ParseResult parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs the command. 0 on success, 1 on runtime failure, 2 on invalid
/// argument combinations detected after parsing.
int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err);

/// parse + dispatch.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adamfind::cli
