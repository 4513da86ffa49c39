#pragma once

// Command-line front end: argument parsing, dispatch and result documents.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardyp/experiments.hpp"
#include "hardyp/io.hpp"

namespace hardyp::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2, kResource = 3 };

enum class OutputFormat { Json, Jsonl, Csv };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Command {
  std::string subcommand;
  /// Every option of the subcommand with its resolved text value, defaults
  /// included; the seed is always concrete.
  std::map<std::string, std::string> values;
  std::set<std::string> flags;
  std::string output = "-";
  OutputFormat format = OutputFormat::Jsonl;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool timing = false;

  /// Arguments that reproduce this command exactly, subcommand first.
  std::vector<std::string> resolved_argv() const;
};

/// Throws UsageError naming the offending parameter. The first element of
/// args is the subcommand; the program name is not included.
Command parse(const std::vector<std::string>& args);

/// Help text for the whole tool.
std::string usage();

struct Execution {
  Json command_echo;
  std::vector<ExperimentRecord> records;
  Json summary;  // null when the command has none
  std::vector<std::string> warnings;
  std::optional<double> wall_time;
  int exit_code = kOk;
};

/// Runs a parsed command. Library errors propagate as exceptions.
Execution execute(const Command& cmd);

std::string render(const Execution& ex, OutputFormat format);

/// parse + execute + atomic write; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace hardyp::cli
