#pragma once

#include <diracint/integrator.hpp>
#include <diracint/types.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace diracint::cli {

/// Exit codes of the command line front end.
enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3, kIoError = 4 };

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    std::string model_id;
    Scheme scheme = Scheme::Minus;
    double h = 0.0;
    long n_steps = 0;  // number of time intervals; the CSV gets n_steps + 1 data rows
    Vec q0;
    std::optional<Vec> q1;  // exactly one of q1 / v0
    std::optional<Vec> v0;
    std::map<std::string, double> param_overrides;
    std::string out_path;
    bool diagnostics_on = true;
    double tol = 1e-12;
    int max_iters = 50;
    std::vector<double> sweep_h;  // extra step sizes, each run written to its own file
    bool dump_config = false;
};

/// Parses flags, optionally seeded from a `key = value` file (# comments,
/// comma-separated vectors, unknown keys rejected); flags override file
/// values. Throws ConfigError with the offending key on bad input.
RunConfig parse_config(const std::vector<std::string>& argv);
RunConfig parse_config(int argc, const char* const* argv);

/// Reads a config file into key/value pairs, preserving order.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Effective-config dump in the config file format; parsing it reproduces
/// an identical RunConfig.
std::string dump_config(const RunConfig& config);

/// Runs the configured trajectory, writes the CSV, prints a summary to out,
/// returns an ExitCode. Solver and I/O failures are reported, not thrown.
int run_and_emit(const RunConfig& config, std::ostream& out, std::ostream& err);

/// CSV writer used by run_and_emit; exposed for tests. Values are written in
/// shortest round-trip decimal form.
void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& names,
               int num_constraints, bool diagnostics_on);

/// Full front end: parse + run + emit, mapping failures to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diracint::cli
