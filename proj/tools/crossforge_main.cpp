// crossforge command-line tool. Links only the public C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "crossforge.h"

namespace {

int report(cf_status status) {
    if (status != CF_OK)
        std::fprintf(stderr, "crossforge: %s: %s\n", cf_status_name(status),
                     cf_last_error());
    return static_cast<int>(status);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"crossforge - self-optimizing categorical feature crossing"};
    app.require_subcommand(1);

    std::string config_path, mode, out_dir;
    long long seed = -1;
    auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("--config", config_path, "Experiment config file")->required();
    run->add_option("--mode", mode, "Override mode: hrc|hrc_star|hrc_hash|hrc_bang|raw");
    run->add_option("--seed", seed, "Override run seed");
    run->add_option("--out", out_dir, "Override output directory");

    std::string recipe_path, data_path, apply_out;
    auto* apply = app.add_subcommand("apply", "Replay a recipe over a CSV file");
    apply->add_option("--recipe", recipe_path, "recipe.json from a run")->required();
    apply->add_option("--data", data_path, "Input CSV")->required();
    apply->add_option("--out", apply_out, "Output CSV path")->required();

    std::string steps_path, conv_out;
    auto* conv = app.add_subcommand("convergence", "Summarize a steps.jsonl stream");
    conv->add_option("--steps", steps_path, "steps.jsonl from a run")->required();
    conv->add_option("--out", conv_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        // CLI11 maps --help to 0; anything else is a usage failure.
        return code == 0 ? 0 : static_cast<int>(CF_ERROR_USAGE);
    }

    if (run->parsed())
        return report(cf_run_experiment(config_path.c_str(),
                                        mode.empty() ? nullptr : mode.c_str(), seed,
                                        out_dir.empty() ? nullptr : out_dir.c_str()));
    if (apply->parsed())
        return report(cf_apply_recipe(recipe_path.c_str(), data_path.c_str(),
                                      apply_out.c_str()));
    if (conv->parsed())
        return report(cf_emit_convergence(steps_path.c_str(), conv_out.c_str()));
    return static_cast<int>(CF_ERROR_USAGE);
}
