#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "ospfsec/ospfsec.h"
#include "ospfsec/runner.hpp"

using namespace ospfsec;

struct ospfsec_scenario {
  runner::Scenario scenario;
};

struct ospfsec_result {
  runner::ScenarioResult result;
  std::string report_json;
  std::string report_table;
  std::string capture;
};

namespace {

thread_local std::string g_last_error;

ospfsec_status fail(ospfsec_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

ospfsec_status from_load_error(const runner::LoadError& e) {
  return fail(e.kind == runner::LoadErrorKind::Io ? OSPFSEC_ERR_IO : OSPFSEC_ERR_CONFIG, e.what());
}

ospfsec_status write_file(const char* path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return fail(OSPFSEC_ERR_IO, std::string("cannot open ") + path + " for writing");
  out << text;
  out.flush();
  if (!out) return fail(OSPFSEC_ERR_IO, std::string("write failed: ") + path);
  return OSPFSEC_OK;
}

template <class Fn>
ospfsec_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const std::bad_alloc&) {
    return fail(OSPFSEC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OSPFSEC_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* ospfsec_version(void) { return "0.1.0"; }

const char* ospfsec_last_error(void) { return g_last_error.c_str(); }

ospfsec_status ospfsec_scenario_load(const char* path, ospfsec_scenario** out) {
  if (!path || !out) return fail(OSPFSEC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto s = runner::load_scenario(path);
    if (!s) return from_load_error(s.error());
    *out = new ospfsec_scenario{std::move(*s)};
    return OSPFSEC_OK;
  });
}

ospfsec_status ospfsec_scenario_parse(const char* json, const char* base_dir, ospfsec_scenario** out) {
  if (!json || !out) return fail(OSPFSEC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto s = runner::parse_scenario(json, base_dir ? std::filesystem::path(base_dir) : std::filesystem::path{});
    if (!s) return fail(OSPFSEC_ERR_CONFIG, s.error().what());
    *out = new ospfsec_scenario{std::move(*s)};
    return OSPFSEC_OK;
  });
}

void ospfsec_scenario_free(ospfsec_scenario* scenario) { delete scenario; }

size_t ospfsec_scenario_warning_count(const ospfsec_scenario* scenario) {
  return scenario ? scenario->scenario.warnings.size() : 0;
}

const char* ospfsec_scenario_warning(const ospfsec_scenario* scenario, size_t index) {
  if (!scenario || index >= scenario->scenario.warnings.size()) return nullptr;
  return scenario->scenario.warnings[index].c_str();
}

ospfsec_status ospfsec_run(const ospfsec_scenario* scenario, int has_seed_override, uint64_t seed_override,
                           ospfsec_result** out) {
  if (!scenario || !out) return fail(OSPFSEC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::optional<std::uint64_t> seed;
    if (has_seed_override) seed = seed_override;
    auto r = runner::run_scenario(scenario->scenario, seed);
    if (!r) return fail(OSPFSEC_ERR_CONFIG, r.error().message);
    *out = new ospfsec_result{std::move(*r), {}, {}, {}};
    return OSPFSEC_OK;
  });
}

void ospfsec_result_free(ospfsec_result* result) { delete result; }

ospfsec_status ospfsec_result_set_capture_path(ospfsec_result* result, const char* path) {
  if (!result) return fail(OSPFSEC_ERR_ARGUMENT, "null argument");
  result->result.report.capture_path = path ? path : "";
  result->report_json.clear();
  result->report_table.clear();
  return OSPFSEC_OK;
}

ospfsec_status ospfsec_result_write_capture(const ospfsec_result* result, const char* path) {
  if (!result || !path) return fail(OSPFSEC_ERR_ARGUMENT, "null argument");
  return guarded([&] { return write_file(path, runner::capture_jsonl(result->result.captures)); });
}

ospfsec_status ospfsec_result_write_report(const ospfsec_result* result, const char* path) {
  if (!result || !path) return fail(OSPFSEC_ERR_ARGUMENT, "null argument");
  return guarded([&] { return write_file(path, runner::report_json(result->result.report)); });
}

const char* ospfsec_result_report_json(ospfsec_result* result) {
  if (!result) return nullptr;
  if (result->report_json.empty()) result->report_json = runner::report_json(result->result.report);
  return result->report_json.c_str();
}

const char* ospfsec_result_report_table(ospfsec_result* result) {
  if (!result) return nullptr;
  if (result->report_table.empty()) result->report_table = runner::report_table(result->result.report);
  return result->report_table.c_str();
}

const char* ospfsec_result_capture_jsonl(ospfsec_result* result) {
  if (!result) return nullptr;
  if (result->capture.empty()) result->capture = runner::capture_jsonl(result->result.captures);
  return result->capture.c_str();
}

size_t ospfsec_result_outcome_count(const ospfsec_result* result) {
  return result ? result->result.report.matrix.size() : 0;
}

ospfsec_status ospfsec_result_outcome(const ospfsec_result* result, size_t index, const char** label,
                                      const char** auth_mode, int* succeeded) {
  if (!result) return fail(OSPFSEC_ERR_ARGUMENT, "null argument");
  const auto& matrix = result->result.report.matrix;
  if (index >= matrix.size()) return fail(OSPFSEC_ERR_ARGUMENT, "outcome index out of range");
  const auto& o = matrix[index];
  if (label) *label = o.label.c_str();
  if (auth_mode) *auth_mode = o.auth_mode.c_str();
  if (succeeded) *succeeded = o.succeeded ? 1 : 0;
  return OSPFSEC_OK;
}

ospfsec_status ospfsec_verify_capture(const char* capture_path, const char* keychain_path, char** summary_json) {
  if (!capture_path || !keychain_path || !summary_json) return fail(OSPFSEC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto chain = runner::load_keychain(keychain_path);
    if (!chain) return from_load_error(chain.error());
    auto lines = runner::load_capture(capture_path);
    if (!lines) return from_load_error(lines.error());
    const std::string text = runner::verify_capture(*lines, *chain).json();
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) return fail(OSPFSEC_ERR_INTERNAL, "out of memory");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *summary_json = buf;
    return OSPFSEC_OK;
  });
}

void ospfsec_string_free(char* s) { std::free(s); }

}  // extern "C"
