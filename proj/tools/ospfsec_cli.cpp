#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ospfsec/ospfsec.h"

namespace {

int report_failure(ospfsec_status status) {
  std::cerr << "error: " << ospfsec_last_error() << "\n";
  return status == OSPFSEC_ERR_IO ? 3 : status == OSPFSEC_ERR_CONFIG ? 2 : 1;
}

int run_command(const std::string& scenario_path, std::optional<std::uint64_t> seed, std::string capture_path,
                std::string report_path) {
  ospfsec_scenario* scenario = nullptr;
  if (auto st = ospfsec_scenario_load(scenario_path.c_str(), &scenario); st != OSPFSEC_OK) {
    return report_failure(st);
  }
  for (size_t i = 0; i < ospfsec_scenario_warning_count(scenario); ++i) {
    std::cerr << "warning: " << ospfsec_scenario_warning(scenario, i) << "\n";
  }

  ospfsec_result* result = nullptr;
  auto st = ospfsec_run(scenario, seed.has_value(), seed.value_or(0), &result);
  ospfsec_scenario_free(scenario);
  if (st != OSPFSEC_OK) return report_failure(st);

  const std::string stem = std::filesystem::path(scenario_path).stem().string();
  if (capture_path.empty()) capture_path = stem + ".capture.jsonl";
  if (report_path.empty()) report_path = stem + ".report.json";

  ospfsec_result_set_capture_path(result, capture_path.c_str());
  st = ospfsec_result_write_capture(result, capture_path.c_str());
  if (st == OSPFSEC_OK) st = ospfsec_result_write_report(result, report_path.c_str());
  if (st != OSPFSEC_OK) {
    ospfsec_result_free(result);
    return report_failure(st);
  }
  std::cout << ospfsec_result_report_table(result);
  std::cout << "\nreport   " << report_path << "\n";
  ospfsec_result_free(result);
  return 0;
}

int verify_command(const std::string& capture_path, const std::string& keys_path) {
  char* summary = nullptr;
  if (auto st = ospfsec_verify_capture(capture_path.c_str(), keys_path.c_str(), &summary); st != OSPFSEC_OK) {
    return report_failure(st);
  }
  std::cout << summary;
  ospfsec_string_free(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OSPFv2 authentication attack simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ospfsec_version()));

  std::string scenario_path, capture_path, report_path;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run a scenario and write capture and report");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--capture", capture_path, "Capture output (JSON Lines)");
  run->add_option("--report", report_path, "Report output (JSON)");

  std::string verify_capture, keys_path;
  auto* verify = app.add_subcommand("verify", "Re-authenticate the frames of a capture");
  verify->add_option("capture", verify_capture, "Capture file")->required();
  verify->add_option("--keys", keys_path, "Key chain JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) return run_command(scenario_path, seed, capture_path, report_path);
  return verify_command(verify_capture, keys_path);
}
