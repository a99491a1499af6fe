#ifndef BJW_CLI_HPP_
#define BJW_CLI_HPP_

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bjw/state.hpp"

namespace bjw::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kNumericFailure = 2 };

/// One report row: ordered (column, value) pairs.
using Record = std::vector<std::pair<std::string, std::string>>;

std::string csv_escape(const std::string& field);
/// Header from the first record; every record must share its columns.
void write_csv(std::ostream& os, const std::vector<Record>& rows);
/// Inverse of write_csv. Throws std::invalid_argument on malformed input.
std::vector<Record> read_csv(std::istream& is);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

struct Jump {
  double x = 0.0;
  State state;
};

/// Fully resolved configuration (defaults expanded).
struct Config {
  std::string command;
  std::string suite;  // verify only
  double eta = 0.0;
  std::optional<State> ul;
  std::optional<State> ur;
  double a = 0.25;
  double eps = 1e-2;
  int samples = 0;  // 0: suite default
  unsigned long long seed = 7;
  double radius = 0.9;
  double tol = 1e-12;
  int sample_points = 0;  // riemann profile points
  double delta = 1e-3;
  double t_end = 10.0;
  int max_events = 1000;
  double tol_event = 1e-12;
  std::vector<Jump> jumps;
  std::string out;
  std::string trajectory;
  std::string format;  // csv, json, tsv or table
  std::string scenario;

  std::string to_json() const;
};

/// Thrown for bad flags, scenario files or parameters (exit code 1).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Merges a scenario document into cfg. Keys are checked against the schema;
/// unknown keys and a schema_version other than "1" are rejected.
void apply_scenario_json(const std::string& text, Config& cfg);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bjw::cli

#endif  // BJW_CLI_HPP_
