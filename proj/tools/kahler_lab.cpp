#include <iostream>

#include <CLI11.hpp>

#include "kahler/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on algebraic Kahler curvature tensors"};
  std::string experiment;
  kahler::ExperimentConfig cfg;
  std::string input;
  std::string out = "out";
  app.add_option("--experiment", experiment,
                 "VerifyExample12 | Certify | Flow | Variations | Decompose | InequalityChain")
      ->required();
  app.add_option("--model", cfg.model, "factors joined by '*': flat:N fs:N:H surface:K example12:N random:N cone:N");
  app.add_option("--input", input, "kct-1 tensor file");
  app.add_option("--seed", cfg.seeds, "seed, repeatable");
  app.add_option("--tol", cfg.tol, "tolerance")->capture_default_str();
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--dt", cfg.dt, "flow time step")->capture_default_str();
  app.add_option("--horizon", cfg.horizon, "flow horizon")->capture_default_str();
  app.add_option("--starts", cfg.starts, "certifier starts")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kahler::kUsageError;
  }
  const auto which = kahler::parse_experiment(experiment);
  if (!which) {
    std::cerr << "unknown experiment: " << experiment << '\n';
    return kahler::kUsageError;
  }
  cfg.experiment = *which;
  cfg.input = input;
  cfg.out = out;

  try {
    const auto result = kahler::run(cfg);
    std::cout << result.summary.value("status", "") << '\n';
    if (result.summary.contains("error")) std::cerr << result.summary["error"].get<std::string>() << '\n';
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kahler::kInternalAssertion;
  }
}
