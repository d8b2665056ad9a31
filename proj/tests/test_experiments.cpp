#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "kahler/experiments.hpp"
#include "kahler/models.hpp"
#include "kahler/serialization.hpp"

using namespace kahler;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("kahler_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(KAHLER_LAB) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("model grammar") {
  CHECK(build_model("example12:2", 0) == example_1_2(2));
  CHECK(build_model("surface:-4*fs:2:4", 0) == example_1_2(2));
  CHECK(build_model("flat:1*flat:2", 0) == flat(3));
  CHECK(build_model("random:3", 5) == random_symmetric(5, 3));
  for (const char* bad : {"", "fs:2", "fs:x:4", "torus:2", "flat:0", "surface:-4*", "cone:1", "fs:2:4:1"}) {
    CHECK_THROWS_AS(build_model(bad, 0), UsageError);
  }
  CHECK(parse_experiment("Flow") == Experiment::Flow);
  CHECK_FALSE(parse_experiment("flow").has_value());
}

TEST_CASE("certify a flat tensor file") {
  const auto dir = scratch("certify_flat");
  fs::create_directories(dir);
  save_tensor(flat(2), dir / "flat.json");
  ExperimentConfig c;
  c.experiment = Experiment::Certify;
  c.input = dir / "flat.json";
  c.out = dir / "out";
  const auto r = run(c);
  CHECK(r.exit_code == kSuccess);
  const auto& certs = r.summary["runs"][0]["certifications"];
  CHECK(certs.size() == 4);
  for (const auto& x : certs) {
    CHECK(x["minValue"].get<double>() == 0.0);
    CHECK(x["status"] == "CertifiedNonnegative");
  }
  CHECK(fs::exists(dir / "out" / "summary.json"));
}

TEST_CASE("example verification report") {
  ExperimentConfig c;
  c.experiment = Experiment::VerifyExample12;
  c.model = "example12:2";
  c.out = scratch("example");
  const auto r = run(c);
  CHECK(r.exit_code == kSuccess);
  CHECK(r.summary["identityResidualMax"].get<double>() <= 1e-10);
  CHECK(std::abs(r.summary["ohbMin"].get<double>()) <= 1e-6);
  CHECK(r.summary["isotropicMin"].get<double>() < 0.0);
}

TEST_CASE("flow on Fubini-Study writes a trajectory and matches the closed form") {
  ExperimentConfig c;
  c.experiment = Experiment::Flow;
  c.model = "fs:2:4";
  c.horizon = 0.1;
  c.out = scratch("flow");
  const auto r = run(c);
  CHECK(r.exit_code == kSuccess);
  const auto& rec = r.summary["runs"][0];
  CHECK(rec["closedForm"]["residual"].get<double>() <= 1e-6);
  const std::string csv = slurp(c.out / rec["trajectoryFile"].get<std::string>());
  CHECK(csv.rfind("time,scalar,ohbMin,minRicciEigenvalue,tensorNorm\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + rec["recorded"].get<int>());
}

TEST_CASE("property failures exit with 1") {
  ExperimentConfig c;
  c.experiment = Experiment::Certify;
  c.model = "surface:-5*fs:2:4";
  c.out = scratch("violated");
  CHECK(run(c).exit_code == kPropertyFailure);
  c.experiment = Experiment::Decompose;
  const auto r = run(c);
  CHECK(r.exit_code == kPropertyFailure);
  CHECK(r.summary["runs"][0]["case"]["kind"] == "Violation");
}

TEST_CASE("decomposition of the example reports the tight second case") {
  ExperimentConfig c;
  c.experiment = Experiment::Decompose;
  c.out = scratch("decompose");
  const auto r = run(c);
  CHECK(r.exit_code == kSuccess);
  CHECK(r.summary["runs"][0]["case"]["kind"] == "Case2");
}

TEST_CASE("usage errors exit with 2 and still write a summary") {
  ExperimentConfig c;
  c.out = scratch("usage");
  c.model = "fs:2";
  auto r = run(c);
  CHECK(r.exit_code == kUsageError);
  CHECK(fs::exists(c.out / "summary.json"));
  c.model = "fs:2:4";
  c.tol = -1;
  CHECK(run(c).exit_code == kUsageError);
  c.tol = 1e-8;
  c.input = "/nonexistent.json";
  CHECK(run(c).exit_code == kUsageError);
  c.input.clear();
  c.experiment = Experiment::VerifyExample12;
  CHECK(run(c).exit_code == kUsageError);
}

TEST_CASE("identical seeds give byte-identical outputs") {
  for (Experiment e : {Experiment::VerifyExample12, Experiment::Certify, Experiment::Flow, Experiment::Variations,
                       Experiment::Decompose, Experiment::InequalityChain}) {
    ExperimentConfig c;
    c.experiment = e;
    c.seeds = {3, 1};
    c.starts = 16;
    c.horizon = 0.02;
    c.out = scratch("det_a");
    const auto a = run(c);
    c.out = scratch("det_b");
    const auto b = run(c);
    CHECK(a.exit_code == b.exit_code);
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
      CHECK(a.files[i].filename() == b.files[i].filename());
      CHECK(slurp(a.files[i]) == slurp(b.files[i]));
    }
  }
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch("cli");
  const std::string out = " --out " + dir.string();
  CHECK(cli("--experiment Certify --model fs:2:4 --starts 8" + out) == 0);
  CHECK(cli("--experiment Certify --model surface:-5*fs:2:4 --starts 8" + out) == 1);
  CHECK(cli("--experiment Nope" + out) == 2);
  CHECK(cli("--model fs:2:4" + out) == 2);
  CHECK(cli("--experiment Certify --model fs:2:4 --tol abc" + out) == 2);
  CHECK(cli("--experiment Flow --model fs:2:4 --dt 0" + out) == 2);
  CHECK(cli("--experiment Certify --seed 1 --seed 2 --starts 8" + out) == 0);
}
