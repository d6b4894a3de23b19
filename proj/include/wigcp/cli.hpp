#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace wigcp {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitNonConvergence = 3 };

/// Entry point of the `wigcp` executable; args exclude the program name.
/// Results go to `out` (or --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

using Cell = std::variant<std::string, double, std::int64_t, bool>;

/// One run: its resolved configuration, a table and summary fields.
struct Record {
  std::string command;
  std::vector<std::pair<std::string, Cell>> config;
  std::vector<std::string> argv;  // canonical arguments that reproduce the run
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
};

/// %.17g for finite doubles; "nan", "inf", "-inf" otherwise.
std::string format_number(double x);

std::string render_csv(const Record& r);
std::string render_json(const Record& r);

}  // namespace wigcp
