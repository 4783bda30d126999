#ifndef AUTOSAS_H
#define AUTOSAS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AUTOSAS_API __declspec(dllexport)
#else
#define AUTOSAS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum autosas_status {
  AUTOSAS_OK = 0,
  AUTOSAS_ERR_INVALID_ARGUMENT = 1,
  AUTOSAS_ERR_CONFIG = 2,
  AUTOSAS_ERR_IO = 3,
  AUTOSAS_ERR_FORMAT = 4,
  AUTOSAS_ERR_VERSION = 5,
  AUTOSAS_ERR_DEGENERATE_RATINGS = 6,
  AUTOSAS_ERR_SCHEMA = 7,
  AUTOSAS_ERR_INTERNAL = 8
} autosas_status;

typedef enum autosas_format {
  AUTOSAS_FORMAT_TEXT = 0,
  AUTOSAS_FORMAT_JSON = 1
} autosas_format;

typedef struct autosas_config autosas_config;
typedef struct autosas_model autosas_model;

AUTOSAS_API const char* autosas_version(void);

/* Message for the last failed call on this thread; empty after success. */
AUTOSAS_API const char* autosas_last_error(void);
AUTOSAS_API const char* autosas_status_name(autosas_status status);

/* Every char** result is heap-allocated and released with this. */
AUTOSAS_API void autosas_string_free(char* s);

/* Receives non-fatal warnings. NULL restores printing to stderr. */
typedef void (*autosas_warning_fn)(const char* message, void* user_data);
AUTOSAS_API void autosas_set_warning_handler(autosas_warning_fn fn, void* user_data);

AUTOSAS_API autosas_status autosas_qwk(const int* human, const int* model, size_t n,
                                       int grade_min, int grade_max, double* kappa);

/* path may be NULL to use AUTOSAS_CONFIG. */
AUTOSAS_API autosas_status autosas_config_load(const char* path, autosas_config** out);
AUTOSAS_API autosas_status autosas_config_from_json(const char* json, const char* base_dir,
                                                    autosas_config** out);
AUTOSAS_API void autosas_config_free(autosas_config* config);
AUTOSAS_API autosas_status autosas_config_set_seed(autosas_config* config, uint64_t seed);
AUTOSAS_API autosas_status autosas_config_set_out_dir(autosas_config* config, const char* dir);
/* The first call replaces the config's prompt list; later calls append. */
AUTOSAS_API autosas_status autosas_config_select_prompt(autosas_config* config, const char* prompt_id);
AUTOSAS_API autosas_status autosas_config_disable_group(autosas_config* config, const char* group);
AUTOSAS_API autosas_status autosas_config_validate(const autosas_config* config);
AUTOSAS_API autosas_status autosas_config_out_dir(const autosas_config* config, char** out);

/* Each writes its report files and models under the config's out_dir.
   report may be NULL; otherwise it receives the plain-text report. */
AUTOSAS_API autosas_status autosas_train(const autosas_config* config, char** report);
AUTOSAS_API autosas_status autosas_evaluate(const autosas_config* config, char** report);
AUTOSAS_API autosas_status autosas_ablate(const autosas_config* config, char** report);

AUTOSAS_API autosas_status autosas_model_load(const char* path, autosas_model** out);
AUTOSAS_API void autosas_model_free(autosas_model* model);
AUTOSAS_API autosas_status autosas_model_prompt(const autosas_model* model, char** prompt_id);

AUTOSAS_API autosas_status autosas_score_text(const autosas_model* model, const char* text,
                                              int* grade, double* raw);

/* Scores a response TSV against one model per prompt. Output is TSV with
   header "Id EssaySet Grade Raw". */
AUTOSAS_API autosas_status autosas_score_file(const autosas_model* const* models, size_t n_models,
                                              const char* responses_path, char** out);

AUTOSAS_API autosas_status autosas_feedback_text(const autosas_model* model, const char* response_id,
                                                 const char* text, autosas_format format,
                                                 size_t top_groups, char** out);

/* response_id NULL reports every response of the model's prompt. JSON output
   is an array. */
AUTOSAS_API autosas_status autosas_feedback_file(const autosas_model* model, const char* responses_path,
                                                 const char* response_id, autosas_format format,
                                                 size_t top_groups, char** out);

#ifdef __cplusplus
}
#endif

#endif
