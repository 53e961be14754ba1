/* crossforge C API
 *
 * Self-optimizing categorical feature generation: a hierarchical two-agent
 * crossing loop over hashed categorical features, producing a generated
 * feature set and a replayable cross recipe.
 *
 * All functions return cf_status; CF_OK is 0. On failure, cf_last_error()
 * returns a thread-local message describing what went wrong. Handles are
 * opaque and must be released with their matching close function.
 */

#ifndef CROSSFORGE_H
#define CROSSFORGE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CROSSFORGE_API __declspec(dllexport)
#else
#define CROSSFORGE_API __attribute__((visibility("default")))
#endif

typedef enum cf_status {
    CF_OK = 0,
    CF_ERROR_USAGE = 1,    /* bad arguments, bad config */
    CF_ERROR_DATA = 2,     /* parse/schema/data problems */
    CF_ERROR_INTERNAL = 3, /* internal invariant violation */
} cf_status;

CROSSFORGE_API const char* cf_version(void);
CROSSFORGE_API const char* cf_status_name(cf_status status);

/* Message for the most recent failure on this thread; empty when the last
 * call succeeded. The pointer stays valid until the next API call on the
 * same thread. */
CROSSFORGE_API const char* cf_last_error(void);

/* ------------------------------------------------------------------ */
/* Experiment orchestration                                           */
/* ------------------------------------------------------------------ */

/* Runs an experiment from a JSON config file and writes run_report.json,
 * steps.jsonl and (for non-raw modes) recipe.json into the output directory.
 *
 * mode_override: NULL or one of "hrc", "hrc_star", "hrc_hash", "hrc_bang",
 *                "raw".
 * seed_override: negative for "use the config value".
 * out_dir_override: NULL or a directory path. */
CROSSFORGE_API cf_status cf_run_experiment(const char* config_path,
                                           const char* mode_override,
                                           long long seed_override,
                                           const char* out_dir_override);

/* Replays a recipe over a CSV file and writes the generated feature columns
 * (hashed bucket ids) plus the label column. */
CROSSFORGE_API cf_status cf_apply_recipe(const char* recipe_path,
                                         const char* data_path,
                                         const char* out_path);

/* Summarizes a steps.jsonl stream into convergence.csv
 * (episode,best_acc,last_change_step). */
CROSSFORGE_API cf_status cf_emit_convergence(const char* steps_path,
                                             const char* out_path);

/* ------------------------------------------------------------------ */
/* Handles for embedding                                              */
/* ------------------------------------------------------------------ */

typedef struct cf_dataset cf_dataset;
typedef struct cf_recipe cf_recipe;

/* type_hints_json: NULL or a JSON object mapping column names to "numeric"
 * or "categorical". */
CROSSFORGE_API cf_status cf_dataset_open_csv(const char* path,
                                             const char* label_column,
                                             const char* type_hints_json,
                                             cf_dataset** out);
CROSSFORGE_API void cf_dataset_close(cf_dataset* dataset);
CROSSFORGE_API int64_t cf_dataset_num_rows(const cf_dataset* dataset);
CROSSFORGE_API int64_t cf_dataset_num_columns(const cf_dataset* dataset);

CROSSFORGE_API cf_status cf_recipe_open(const char* path, cf_recipe** out);
CROSSFORGE_API void cf_recipe_close(cf_recipe* recipe);
CROSSFORGE_API int64_t cf_recipe_num_crosses(const cf_recipe* recipe);

/* Writes the replayed feature table for an already opened dataset. */
CROSSFORGE_API cf_status cf_recipe_apply(const cf_recipe* recipe,
                                         const cf_dataset* dataset,
                                         const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CROSSFORGE_H */
