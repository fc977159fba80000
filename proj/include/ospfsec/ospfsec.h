#ifndef OSPFSEC_H
#define OSPFSEC_H

/* C interface to the OSPF authentication simulator.
 *
 * Every function returns an ospfsec_status. On failure a message is kept per
 * thread and can be read with ospfsec_last_error() until the next call.
 * Strings handed out by the library are owned by the handle they came from
 * unless stated otherwise. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define OSPFSEC_API __declspec(dllexport)
#else
#  define OSPFSEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  OSPFSEC_OK = 0,
  OSPFSEC_ERR_ARGUMENT = 1,
  OSPFSEC_ERR_CONFIG = 2,
  OSPFSEC_ERR_IO = 3,
  OSPFSEC_ERR_INTERNAL = 4
} ospfsec_status;

typedef struct ospfsec_scenario ospfsec_scenario;
typedef struct ospfsec_result ospfsec_result;

OSPFSEC_API const char* ospfsec_version(void);
OSPFSEC_API const char* ospfsec_last_error(void);

OSPFSEC_API ospfsec_status ospfsec_scenario_load(const char* path, ospfsec_scenario** out);
/* base_dir resolves relative key chain paths; may be NULL. */
OSPFSEC_API ospfsec_status ospfsec_scenario_parse(const char* json, const char* base_dir, ospfsec_scenario** out);
OSPFSEC_API void ospfsec_scenario_free(ospfsec_scenario* scenario);

OSPFSEC_API size_t ospfsec_scenario_warning_count(const ospfsec_scenario* scenario);
OSPFSEC_API const char* ospfsec_scenario_warning(const ospfsec_scenario* scenario, size_t index);

/* seed_override is used only when has_seed_override is non-zero. */
OSPFSEC_API ospfsec_status ospfsec_run(const ospfsec_scenario* scenario, int has_seed_override,
                                       uint64_t seed_override, ospfsec_result** out);
OSPFSEC_API void ospfsec_result_free(ospfsec_result* result);

/* Records where the capture will be written; it appears in the report. */
OSPFSEC_API ospfsec_status ospfsec_result_set_capture_path(ospfsec_result* result, const char* path);
OSPFSEC_API ospfsec_status ospfsec_result_write_capture(const ospfsec_result* result, const char* path);
OSPFSEC_API ospfsec_status ospfsec_result_write_report(const ospfsec_result* result, const char* path);

OSPFSEC_API const char* ospfsec_result_report_json(ospfsec_result* result);
OSPFSEC_API const char* ospfsec_result_report_table(ospfsec_result* result);
OSPFSEC_API const char* ospfsec_result_capture_jsonl(ospfsec_result* result);

OSPFSEC_API size_t ospfsec_result_outcome_count(const ospfsec_result* result);
/* Any out pointer may be NULL. */
OSPFSEC_API ospfsec_status ospfsec_result_outcome(const ospfsec_result* result, size_t index, const char** label,
                                                  const char** auth_mode, int* succeeded);

/* Re-authenticates every received frame of a capture file. On success
 * *summary_json is a malloc'd string the caller frees with ospfsec_string_free. */
OSPFSEC_API ospfsec_status ospfsec_verify_capture(const char* capture_path, const char* keychain_path,
                                                  char** summary_json);
OSPFSEC_API void ospfsec_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
