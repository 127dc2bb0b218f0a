#pragma once

// Subcommand dispatch shared by the command-line tool and the Python module.

#include <iosfwd>
#include <string>
#include <vector>

#include "ddelta/serialize.hpp"

namespace ddelta {

struct Config {
  double tol = 1e-9;
  Rect rect{-5, 5, -20, 20};
  std::vector<double> lambda_schedule{0.04, 0.02, 0.01, 0.005};
  int grid = 512;
  std::string format = "json";  // json | text
  unsigned seed = 0;
};

/// Fields absent from j keep their values in base. Throws SchemaViolation.
Config config_from_json(const Json& j, const Config& base = {});
Json to_json(const Config& c);
/// Reads the file named by DDELTA_CONFIG, if set.
Config load_config();

const std::vector<std::string>& subcommands();

/// Runs one subcommand on a JSON payload of its arguments. Throws Error.
Json run_subcommand(const std::string& name, const Config& config, const Json& payload);

/// run_subcommand with reporting: the result (or an error object) goes to out
/// in the configured format, diagnostics to err. Returns the exit status.
int dispatch(const std::string& name, const Config& config, const Json& payload, std::ostream& out,
             std::ostream& err);

/// Trajectory as "x,re,im" lines with a header.
std::string trajectory_csv(const Trajectory& t);

}  // namespace ddelta
