#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kahler/tensor.hpp"

namespace kahler {

enum class Experiment { VerifyExample12, Certify, Flow, Variations, Decompose, InequalityChain };

std::string to_string(Experiment e);
std::optional<Experiment> parse_experiment(const std::string& name);

// Bad configuration; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Model grammar: factors joined by '*', each one of
///   flat:N  fs:N:H  surface:K  example12:N  random:N  cone:N
/// where H is the holomorphic sectional curvature. random and cone draw from
/// the run seed. Throws UsageError on malformed text.
KahlerCurvatureTensor build_model(const std::string& text, std::uint64_t seed);

struct ExperimentConfig {
  Experiment experiment = Experiment::Certify;
  std::string model;                 // empty: experiment default
  std::filesystem::path input;       // tensor file; exclusive with model
  std::vector<std::uint64_t> seeds;  // empty: {0}
  double tol = 1e-8;
  std::filesystem::path out = ".";
  double dt = 1e-3;
  double horizon = 0.1;
  int starts = 64;
};

enum ExitCode : int { kSuccess = 0, kPropertyFailure = 1, kUsageError = 2, kInternalAssertion = 3 };

struct RunResult {
  int exit_code;
  nlohmann::json summary;
  std::vector<std::filesystem::path> files;
};

/// Runs one experiment for every seed, writes summary.json (always, once the
/// output directory can be created) and the per-seed CSV tables into
/// config.out. Internal assertions additionally dump the offending tensor to
/// diagnostic.json. Output bytes depend only on the config.
RunResult run(const ExperimentConfig& config);

}  // namespace kahler
