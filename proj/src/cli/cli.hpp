#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pta::cli {

enum ExitCode : int {
  kSuccess = 0,
  kError = 1,
  kInfeasible = 2,
  kIterationBudget = 3,
};

struct RunConfig {
  double tol = 1e-10;
  std::size_t max_iters = 100000;
  std::string start = "bracket_mid";  // bracket_mid | ones | perron | file
  std::string start_file;
  std::uint64_t seed = 0;
  std::string trace;  // CSV path, empty for none
  std::string format = "json";  // json | csv
  std::size_t trials = 1000;
};

// Raw flag values for `app`; each builder picks what it needs. Vector and
// matrix arguments are JSON literals or paths to JSON files.
struct AppParams {
  std::optional<std::string> beta;
  std::optional<std::string> gross_return;
  std::optional<double> gamma;
  std::optional<double> rho;
  std::optional<double> alpha;
  std::optional<std::string> consumption;
  std::optional<std::string> chain;
  std::optional<double> s;
  std::optional<std::string> q;
  std::optional<double> savings;
  std::optional<double> theta;
  std::optional<std::string> technology;
};

int cmd_check(const std::string& path, const RunConfig& cfg, std::ostream& out);
int cmd_solve(const std::string& path, const RunConfig& cfg, std::ostream& out);
int cmd_props(const std::string& path, const RunConfig& cfg, std::ostream& out);
int cmd_app(const std::string& model, const AppParams& params, const RunConfig& cfg,
            std::ostream& out);

/// Full command line dispatch; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pta::cli
