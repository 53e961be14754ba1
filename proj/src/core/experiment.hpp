#pragma once

#include <map>
#include <optional>
#include <string>

#include "core/hrc.hpp"

namespace crossforge {

struct ExperimentConfig {
    std::string dataset_path;
    std::string label_column;
    std::map<std::string, ColumnKind> type_hints;
    RunConfig run;
    std::string output_dir = ".";
};

// Parses the JSON config file. Unknown keys and malformed values are usage
// errors so typos fail fast instead of silently running defaults.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& source_name);

struct ExperimentOverrides {
    std::optional<std::string> mode;
    std::optional<uint64_t> seed;
    std::optional<std::string> output_dir;
};
void apply_overrides(ExperimentConfig& cfg, const ExperimentOverrides& ov);

// Runs the experiment and writes run_report.json, steps.jsonl and (for
// non-raw modes) recipe.json into the output directory. Partially written
// artifacts are removed when anything fails.
RunResult run_experiment(const ExperimentConfig& cfg);

// Per-episode convergence summary of a steps.jsonl stream:
//   episode,best_acc,last_change_step
// where last_change_step is the global 0-based record index of the last
// strict best-accuracy improvement observed up to the episode's end (-1 when
// none was observed yet).
void emit_convergence(const std::string& steps_path, const std::string& out_path);

// Replays a recipe over a CSV and writes the generated features (hashed
// bucket ids) plus the label column.
void apply_recipe_to_csv(const std::string& recipe_path, const std::string& data_path,
                         const std::string& out_path);

// CSV of replayed features (hashed bucket ids) plus the label tokens.
void write_features_csv(const std::vector<Feature>& features, const Dataset& data,
                        const std::string& label_column, const std::string& out_path);

} // namespace crossforge
