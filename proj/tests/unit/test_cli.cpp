#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "monotone/runner.hpp"

using namespace monotone;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_path(const std::string& name) { return std::string(MONOTONE_CONFIG_DIR) + "/" + name + ".toml"; }

std::string out_dir() { return (std::filesystem::temp_directory_path() / "monotone_unit_runner").string(); }

}  // namespace

TEST_CASE("exit codes of the example configs") {
  const std::string dir = "output.dir=" + out_dir();
  CHECK(run_file(config_path("verify_linear_sin"), {dir}).exit_code == kExitOk);
  CHECK(run_file(config_path("verify_noise"), {dir}).exit_code == kExitFailure);
  CHECK(run_file(config_path("kernel_check"), {dir}).exit_code == kExitOk);
  const RunOutcome bad_key = run_file(config_path("kernel_check"), {dir, "task.bogus=1"});
  CHECK(bad_key.exit_code == kExitUsage);
  CHECK(bad_key.message.find("task.bogus") != std::string::npos);
  CHECK(run_file(config_path("does_not_exist"), {dir}).exit_code == kExitUsage);
  CHECK(run_file(config_path("verify_linear_sin"), {dir, "task.radii=[100.0]"}).exit_code == kExitUsage);
}

TEST_CASE("reports and manifest") {
  const RunOutcome out = run_file(config_path("phi_scan_inadmissible"), {"output.dir=" + out_dir(), "output.name=m"});
  REQUIRE(out.exit_code == kExitOk);
  const std::string manifest = slurp(out_dir() + "/m.manifest.json");
  CHECK(manifest.find("\"status\"") != std::string::npos);
  CHECK(manifest.find(version_string()) != std::string::npos);
  CHECK(std::filesystem::exists(out_dir() + "/m.csv"));
  CHECK(out.report.contains("radii"));
}

TEST_CASE("CSV output is deterministic") {
  const std::string dir = "output.dir=" + out_dir();
  REQUIRE(run_file(config_path("beta_scan_power"), {dir, "output.name=d1"}).exit_code == kExitOk);
  REQUIRE(run_file(config_path("beta_scan_power"), {dir, "output.name=d2"}).exit_code == kExitOk);
  CHECK(slurp(out_dir() + "/d1.csv") == slurp(out_dir() + "/d2.csv"));
  CHECK(slurp(out_dir() + "/d1.json") == slurp(out_dir() + "/d2.json"));
  std::filesystem::remove_all(out_dir());
}
