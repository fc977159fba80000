#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ospfsec/ospfsec.h"

namespace {

const std::filesystem::path scenarios = std::filesystem::path(OSPFSEC_SOURCE_DIR) / "scenarios";

const char* kSmall = R"({
  "name": "small",
  "duration_s": 90,
  "seed": 5,
  "routers": [
    {"id": "10.0.0.1", "auth": {"mode": "simple", "password": "nekasifra"}},
    {"id": "10.0.0.2", "auth": {"mode": "simple", "password": "nekasifra"}}
  ],
  "links": [{"id": "l1", "routers": ["10.0.0.1", "10.0.0.2"]}],
  "adversary": {"link": "l1", "attacks": [
    {"technique": "eavesdrop", "start_s": 0, "stop_s": 90},
    {"technique": "inject", "start_s": 30, "stop_s": 90}
  ]}
})";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("ospfsec_capi_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST(CApi, Version) { EXPECT_STRNE(ospfsec_version(), ""); }

TEST(CApi, NullArgumentsRejected) {
  ospfsec_scenario* s = nullptr;
  EXPECT_EQ(ospfsec_scenario_load(nullptr, &s), OSPFSEC_ERR_ARGUMENT);
  EXPECT_EQ(ospfsec_scenario_parse(kSmall, nullptr, nullptr), OSPFSEC_ERR_ARGUMENT);
  EXPECT_EQ(ospfsec_run(nullptr, 0, 0, nullptr), OSPFSEC_ERR_ARGUMENT);
  EXPECT_EQ(ospfsec_result_outcome_count(nullptr), 0u);
  ospfsec_scenario_free(nullptr);
  ospfsec_result_free(nullptr);
  ospfsec_string_free(nullptr);
}

TEST(CApi, LoadErrorsMapToStatus) {
  ospfsec_scenario* s = nullptr;
  EXPECT_EQ(ospfsec_scenario_load((scenarios / "missing.json").c_str(), &s), OSPFSEC_ERR_IO);
  EXPECT_EQ(s, nullptr);
  EXPECT_EQ(ospfsec_scenario_parse("{\"name\": 1}", "", &s), OSPFSEC_ERR_CONFIG);
  EXPECT_NE(std::string(ospfsec_last_error()).find("name"), std::string::npos);
  EXPECT_EQ(ospfsec_scenario_parse("{\n,", "", &s), OSPFSEC_ERR_CONFIG);
  EXPECT_NE(std::string(ospfsec_last_error()).find("line 2"), std::string::npos);
}

TEST(CApi, RunAndInspect) {
  ospfsec_scenario* s = nullptr;
  ASSERT_EQ(ospfsec_scenario_parse(kSmall, "", &s), OSPFSEC_OK) << ospfsec_last_error();
  ASSERT_EQ(ospfsec_scenario_warning_count(s), 2u);
  EXPECT_NE(std::string(ospfsec_scenario_warning(s, 0)).find("truncated"), std::string::npos);
  EXPECT_EQ(ospfsec_scenario_warning(s, 9), nullptr);

  ospfsec_result* r = nullptr;
  ASSERT_EQ(ospfsec_run(s, 0, 0, &r), OSPFSEC_OK) << ospfsec_last_error();
  ASSERT_EQ(ospfsec_result_outcome_count(r), 2u);
  const char* label = nullptr;
  const char* mode = nullptr;
  int ok = -1;
  ASSERT_EQ(ospfsec_result_outcome(r, 1, &label, &mode, &ok), OSPFSEC_OK);
  EXPECT_STREQ(label, "inject");
  EXPECT_STREQ(mode, "simple");
  EXPECT_EQ(ok, 1);
  EXPECT_EQ(ospfsec_result_outcome(r, 2, &label, nullptr, nullptr), OSPFSEC_ERR_ARGUMENT);

  const std::string table = ospfsec_result_report_table(r);
  EXPECT_NE(table.find("SUCCEEDED"), std::string::npos);
  const std::string report = ospfsec_result_report_json(r);
  EXPECT_NE(report.find("\"passwords_recovered\""), std::string::npos);

  ospfsec_result* again = nullptr;
  ASSERT_EQ(ospfsec_run(s, 0, 0, &again), OSPFSEC_OK);
  EXPECT_STREQ(ospfsec_result_capture_jsonl(r), ospfsec_result_capture_jsonl(again));
  ospfsec_result_free(again);

  ospfsec_result_free(r);
  ospfsec_scenario_free(s);
}

TEST(CApi, WriteAndVerify) {
  TempDir dir;
  ospfsec_scenario* s = nullptr;
  ASSERT_EQ(ospfsec_scenario_load((scenarios / "canonical_matrix.json").c_str(), &s), OSPFSEC_OK);
  ospfsec_result* r = nullptr;
  ASSERT_EQ(ospfsec_run(s, 1, 7, &r), OSPFSEC_OK);
  const auto cap = dir.path / "c.jsonl";
  const auto rep = dir.path / "r.json";
  ASSERT_EQ(ospfsec_result_set_capture_path(r, cap.c_str()), OSPFSEC_OK);
  ASSERT_EQ(ospfsec_result_write_capture(r, cap.c_str()), OSPFSEC_OK);
  ASSERT_EQ(ospfsec_result_write_report(r, rep.c_str()), OSPFSEC_OK);
  const auto report = slurp(rep);
  EXPECT_NE(report.find("\"seed\": 7"), std::string::npos);
  EXPECT_NE(report.find(cap.string()), std::string::npos);

  EXPECT_EQ(ospfsec_result_write_report(r, (dir.path / "no" / "such" / "dir.json").c_str()), OSPFSEC_ERR_IO);

  char* summary = nullptr;
  ASSERT_EQ(ospfsec_verify_capture(cap.c_str(), (scenarios / "keys_md5.json").c_str(), &summary), OSPFSEC_OK)
      << ospfsec_last_error();
  EXPECT_NE(std::string(summary).find("\"frames\""), std::string::npos);
  ospfsec_string_free(summary);

  EXPECT_EQ(ospfsec_verify_capture((dir.path / "none.jsonl").c_str(), (scenarios / "keys_md5.json").c_str(),
                                   &summary),
            OSPFSEC_ERR_IO);
  ospfsec_result_free(r);
  ospfsec_scenario_free(s);
}
