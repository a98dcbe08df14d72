// monotone: batch front end for the monotonicity-formula toolkit.
//
//   monotone run <config.toml> [--set key=value]...
//   monotone selftest [--set kernel.convention=literal] [--set quadrature.sphere_nodes=4] [--report path]
//   monotone field convert <in> <out> [--to csv|field]
//
// Exit status: 0 success, 2 identity or monotonicity failure, 1 usage or domain error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "monotone/config.hpp"
#include "monotone/error.hpp"
#include "monotone/field_io.hpp"
#include "monotone/kernel.hpp"
#include "monotone/report_io.hpp"
#include "monotone/runner.hpp"
#include "monotone/selftest.hpp"

namespace {

std::string infer_target(const std::string& out) {
  std::string ext = std::filesystem::path(out).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? "csv" : "field";
}

int do_run(const std::string& path, const std::vector<std::string>& overrides) {
  const monotone::RunOutcome out = monotone::run_file(path, overrides);
  if (out.exit_code == monotone::kExitUsage) {
    std::cerr << "monotone run: " << out.message << '\n';
  } else {
    std::cout << out.task << ": " << out.message << '\n';
  }
  for (const std::string& f : out.files) std::cout << "  wrote " << f << '\n';
  return out.exit_code;
}

int do_selftest(const std::vector<std::string>& overrides, const std::string& report, bool rerun) {
  monotone::SelftestOptions opt;
  opt.determinism_rerun = rerun;
  try {
    monotone::Config cfg = monotone::Config::parse_string("", "selftest");
    for (const std::string& o : overrides) cfg.set_override(o);
    opt.convention = monotone::convention_from_name(
        cfg.get_string("kernel.convention", monotone::convention_name(opt.convention)));
    opt.sphere_nodes = cfg.get_int("quadrature.sphere_nodes", 0);
    cfg.require_all_used();
  } catch (const std::exception& e) {
    std::cerr << "monotone selftest: " << e.what() << '\n';
    return monotone::kExitUsage;
  }
  const monotone::SelftestReport rep = monotone::selftest(opt);
  std::cout << monotone::format_table(rep);
  if (!report.empty()) {
    monotone::write_text_file(report, monotone::to_json(rep).dump(2) + "\n");
    std::cout << "wrote " << report << '\n';
  }
  if (!rep.passed()) {
    std::cerr << "selftest failed: criterion " << rep.first_failure() << '\n';
    return monotone::kExitFailure;
  }
  std::cout << "selftest passed\n";
  return monotone::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotonicity formulas for semilinear elliptic and parabolic systems"};
  app.set_version_flag("--version", std::string(monotone::version_string()));
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Execute the task described by a TOML config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--set", overrides, "Override a config value, key=value (repeatable)");

  std::vector<std::string> st_overrides;
  std::string report;
  bool no_rerun = false;
  auto* st = app.add_subcommand("selftest", "Run the built-in acceptance suite");
  st->add_option("--set", st_overrides, "kernel.convention=... or quadrature.sphere_nodes=N");
  st->add_option("--report", report, "Write the JSON report to this path");
  st->add_flag("--no-rerun", no_rerun, "Skip the determinism rerun (criterion 11)");

  auto* field = app.add_subcommand("field", "Field file utilities");
  field->require_subcommand(1);
  std::string in, out, to;
  auto* convert = field->add_subcommand("convert", "Convert and validate between CSV and the field format");
  convert->add_option("in", in, "Input file")->required();
  convert->add_option("out", out, "Output file")->required();
  convert->add_option("--to", to, "csv or field (default: from the output extension)")
      ->check(CLI::IsMember({"csv", "field"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : monotone::kExitUsage;
  }

  if (*run) return do_run(config_path, overrides);
  if (*st) return do_selftest(st_overrides, report, !no_rerun);
  if (*convert) {
    try {
      std::cout << monotone::convert_field_file(in, out, to.empty() ? infer_target(out) : to) << '\n';
      return monotone::kExitOk;
    } catch (const std::exception& e) {
      std::cerr << "monotone field convert: " << e.what() << '\n';
      return monotone::kExitUsage;
    }
  }
  return monotone::kExitUsage;
}
