#include "crossforge.h"

#include <string>

#include <json.hpp>

#include "core/error.hpp"
#include "core/experiment.hpp"

namespace {

thread_local std::string g_last_error;

cf_status status_of(const crossforge::Error& e) {
    switch (e.kind()) {
        case crossforge::ErrorKind::Usage: return CF_ERROR_USAGE;
        case crossforge::ErrorKind::Data: return CF_ERROR_DATA;
        case crossforge::ErrorKind::Internal: return CF_ERROR_INTERNAL;
    }
    return CF_ERROR_INTERNAL;
}

template <typename Fn>
cf_status guarded(Fn&& fn) {
    g_last_error.clear();
    try {
        fn();
        return CF_OK;
    } catch (const crossforge::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CF_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CF_ERROR_INTERNAL;
    }
}

cf_status require(bool ok, const char* what) {
    if (ok) return CF_OK;
    g_last_error = what;
    return CF_ERROR_USAGE;
}

} // namespace

struct cf_dataset {
    crossforge::Dataset data;
};

struct cf_recipe {
    crossforge::CrossRecipe recipe;
};

extern "C" {

const char* cf_version(void) { return "0.1.0"; }

const char* cf_status_name(cf_status status) {
    switch (status) {
        case CF_OK: return "ok";
        case CF_ERROR_USAGE: return "usage error";
        case CF_ERROR_DATA: return "data error";
        case CF_ERROR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* cf_last_error(void) { return g_last_error.c_str(); }

cf_status cf_run_experiment(const char* config_path, const char* mode_override,
                            long long seed_override, const char* out_dir_override) {
    if (cf_status s = require(config_path != nullptr, "config_path is null")) return s;
    return guarded([&] {
        crossforge::ExperimentConfig cfg = crossforge::load_experiment_config(config_path);
        crossforge::ExperimentOverrides ov;
        if (mode_override) ov.mode = std::string(mode_override);
        if (seed_override >= 0) ov.seed = static_cast<uint64_t>(seed_override);
        if (out_dir_override) ov.output_dir = std::string(out_dir_override);
        crossforge::apply_overrides(cfg, ov);
        crossforge::run_experiment(cfg);
    });
}

cf_status cf_apply_recipe(const char* recipe_path, const char* data_path,
                          const char* out_path) {
    if (cf_status s = require(recipe_path && data_path && out_path, "null argument"))
        return s;
    return guarded([&] { crossforge::apply_recipe_to_csv(recipe_path, data_path, out_path); });
}

cf_status cf_emit_convergence(const char* steps_path, const char* out_path) {
    if (cf_status s = require(steps_path && out_path, "null argument")) return s;
    return guarded([&] { crossforge::emit_convergence(steps_path, out_path); });
}

cf_status cf_dataset_open_csv(const char* path, const char* label_column,
                              const char* type_hints_json, cf_dataset** out) {
    if (cf_status s = require(path && label_column && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        std::map<std::string, crossforge::ColumnKind> hints;
        if (type_hints_json && *type_hints_json) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(type_hints_json);
            } catch (const nlohmann::json::exception& e) {
                throw crossforge::usage_error(std::string("bad type_hints json: ") + e.what());
            }
            for (const auto& [col, kind] : j.items()) {
                const std::string k = kind.get<std::string>();
                if (k == "numeric") hints[col] = crossforge::ColumnKind::Numeric;
                else if (k == "categorical") hints[col] = crossforge::ColumnKind::Categorical;
                else throw crossforge::usage_error("type hint must be numeric or categorical");
            }
        }
        auto* handle = new cf_dataset{crossforge::load_csv(path, label_column, hints)};
        *out = handle;
    });
}

void cf_dataset_close(cf_dataset* dataset) { delete dataset; }

int64_t cf_dataset_num_rows(const cf_dataset* dataset) {
    return dataset ? static_cast<int64_t>(dataset->data.n_samples) : -1;
}

int64_t cf_dataset_num_columns(const cf_dataset* dataset) {
    return dataset ? static_cast<int64_t>(dataset->data.schema.columns.size()) : -1;
}

cf_status cf_recipe_open(const char* path, cf_recipe** out) {
    if (cf_status s = require(path && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] { *out = new cf_recipe{crossforge::CrossRecipe::load(path)}; });
}

void cf_recipe_close(cf_recipe* recipe) { delete recipe; }

int64_t cf_recipe_num_crosses(const cf_recipe* recipe) {
    return recipe ? static_cast<int64_t>(recipe->recipe.crosses.size()) : -1;
}

cf_status cf_recipe_apply(const cf_recipe* recipe, const cf_dataset* dataset,
                          const char* out_path) {
    if (cf_status s = require(recipe && dataset && out_path, "null argument")) return s;
    return guarded([&] {
        auto features = crossforge::apply_recipe(recipe->recipe, dataset->data);
        crossforge::write_features_csv(features, dataset->data,
                                       recipe->recipe.label_column, out_path);
    });
}

} // extern "C"
