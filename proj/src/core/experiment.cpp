#include "core/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"

namespace crossforge {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw usage_error("unknown config key '" + key + "' in " + where);
    }
}

template <typename T>
void read_into(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw usage_error(std::string("bad value for config key '") + key + "'");
    }
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& source_name) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw usage_error(source_name + ": bad config json: " + e.what());
    }
    if (!j.is_object()) throw usage_error(source_name + ": config must be a json object");
    check_keys(j, "config", {"dataset", "mode", "reward_variant", "run", "output_dir"});

    ExperimentConfig cfg;
    if (!j.contains("dataset")) throw usage_error(source_name + ": missing 'dataset'");
    const json& ds = j.at("dataset");
    check_keys(ds, "dataset", {"path", "label_column", "type_hints"});
    if (!ds.contains("path") || !ds.contains("label_column"))
        throw usage_error(source_name + ": dataset needs 'path' and 'label_column'");
    cfg.dataset_path = ds.at("path").get<std::string>();
    cfg.label_column = ds.at("label_column").get<std::string>();
    if (ds.contains("type_hints")) {
        for (const auto& [col, kind] : ds.at("type_hints").items()) {
            const std::string k = kind.get<std::string>();
            if (k == "numeric") cfg.type_hints[col] = ColumnKind::Numeric;
            else if (k == "categorical") cfg.type_hints[col] = ColumnKind::Categorical;
            else throw usage_error("type hint for '" + col + "' must be numeric or categorical");
        }
    }

    if (j.contains("mode")) cfg.run.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("reward_variant"))
        cfg.run.reward_variant = variant_from_string(j.at("reward_variant").get<std::string>());
    read_into(j, "output_dir", cfg.output_dir);

    if (j.contains("run")) {
        const json& r = j.at("run");
        check_keys(r, "run",
                   {"episodes", "steps_per_episode", "seed", "split_fraction", "weights",
                    "hash", "binning", "downstream", "agent", "max_feature_set_size",
                    "mi_on"});
        read_into(r, "episodes", cfg.run.episodes);
        read_into(r, "steps_per_episode", cfg.run.steps_per_episode);
        read_into(r, "seed", cfg.run.seed);
        read_into(r, "split_fraction", cfg.run.split_fraction);
        read_into(r, "max_feature_set_size", cfg.run.max_feature_set_size);
        if (r.contains("mi_on")) {
            const std::string m = r.at("mi_on").get<std::string>();
            if (m == "hashed") cfg.run.mi_on = MiInput::Hashed;
            else if (m == "raw_categories") cfg.run.mi_on = MiInput::RawCategories;
            else throw usage_error("mi_on must be hashed or raw_categories");
        }
        if (r.contains("weights")) {
            const json& w = r.at("weights");
            check_keys(w, "weights", {"w1", "w2", "w3", "w4", "w5", "w6"});
            read_into(w, "w1", cfg.run.weights.w1);
            read_into(w, "w2", cfg.run.weights.w2);
            read_into(w, "w3", cfg.run.weights.w3);
            read_into(w, "w4", cfg.run.weights.w4);
            read_into(w, "w5", cfg.run.weights.w5);
            read_into(w, "w6", cfg.run.weights.w6);
        }
        if (r.contains("hash")) {
            check_keys(r.at("hash"), "hash", {"modulus"});
            read_into(r.at("hash"), "modulus", cfg.run.hash.modulus);
        }
        if (r.contains("binning")) {
            const json& b = r.at("binning");
            check_keys(b, "binning", {"max_bins", "chi_threshold"});
            read_into(b, "max_bins", cfg.run.binning.max_bins);
            if (b.contains("chi_threshold") && !b.at("chi_threshold").is_null())
                cfg.run.binning.chi_threshold = b.at("chi_threshold").get<double>();
        }
        if (r.contains("downstream")) {
            const json& d = r.at("downstream");
            check_keys(d, "downstream", {"learning_rate", "epochs", "l2"});
            read_into(d, "learning_rate", cfg.run.downstream.learning_rate);
            read_into(d, "epochs", cfg.run.downstream.epochs);
            read_into(d, "l2", cfg.run.downstream.l2);
        }
        if (r.contains("agent")) {
            const json& a = r.at("agent");
            check_keys(a, "agent",
                       {"gamma", "learning_rate", "batch_size", "memory_capacity",
                        "target_sync_every", "epsilon_start", "epsilon_end",
                        "epsilon_decay_steps"});
            read_into(a, "gamma", cfg.run.agent.gamma);
            read_into(a, "learning_rate", cfg.run.agent.learning_rate);
            read_into(a, "batch_size", cfg.run.agent.batch_size);
            read_into(a, "memory_capacity", cfg.run.agent.memory_capacity);
            read_into(a, "target_sync_every", cfg.run.agent.target_sync_every);
            read_into(a, "epsilon_start", cfg.run.agent.epsilon_start);
            read_into(a, "epsilon_end", cfg.run.agent.epsilon_end);
            read_into(a, "epsilon_decay_steps", cfg.run.agent.epsilon_decay_steps);
        }
    }

    if (!(cfg.run.agent.gamma >= 0.0 && cfg.run.agent.gamma < 1.0))
        throw usage_error("agent.gamma must be in [0,1)");
    if (cfg.run.hash.modulus < 2) throw usage_error("hash.modulus must be >= 2");
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str(), path);
}

void apply_overrides(ExperimentConfig& cfg, const ExperimentOverrides& ov) {
    if (ov.mode) cfg.run.mode = mode_from_string(*ov.mode);
    if (ov.seed) cfg.run.seed = *ov.seed;
    if (ov.output_dir) cfg.output_dir = *ov.output_dir;
}

namespace {

json metrics_json(const ClassificationMetrics& m) {
    return {{"accuracy", m.accuracy},
            {"precision", m.precision},
            {"recall", m.recall},
            {"f_measure", m.f_measure}};
}

json run_config_json(const RunConfig& r) {
    json j;
    j["episodes"] = r.episodes;
    j["steps_per_episode"] = r.steps_per_episode;
    j["seed"] = r.seed;
    j["split_fraction"] = r.split_fraction;
    j["weights"] = {{"w1", r.weights.w1}, {"w2", r.weights.w2}, {"w3", r.weights.w3},
                    {"w4", r.weights.w4}, {"w5", r.weights.w5}, {"w6", r.weights.w6}};
    j["hash"] = {{"modulus", r.hash.modulus}};
    j["binning"] = {{"max_bins", r.binning.max_bins},
                    {"chi_threshold", r.binning.chi_threshold
                                          ? json(*r.binning.chi_threshold)
                                          : json(nullptr)}};
    j["downstream"] = {{"learning_rate", r.downstream.learning_rate},
                       {"epochs", r.downstream.epochs},
                       {"l2", r.downstream.l2}};
    j["agent"] = {{"gamma", r.agent.gamma},
                  {"learning_rate", r.agent.learning_rate},
                  {"batch_size", r.agent.batch_size},
                  {"memory_capacity", r.agent.memory_capacity},
                  {"target_sync_every", r.agent.target_sync_every},
                  {"epsilon_start", r.agent.epsilon_start},
                  {"epsilon_end", r.agent.epsilon_end},
                  {"epsilon_decay_steps", r.agent.epsilon_decay_steps}};
    j["max_feature_set_size"] = r.max_feature_set_size;
    j["mi_on"] = r.mi_on == MiInput::Hashed ? "hashed" : "raw_categories";
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write: " + path);
    out << text;
    if (!out) throw data_error("write failed: " + path);
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    Dataset data = load_csv(cfg.dataset_path, cfg.label_column, cfg.type_hints);
    RunConfig run_cfg = cfg.run;
    RunResult result = run(run_cfg, data);

    fs::create_directories(cfg.output_dir);
    const std::string report_path = cfg.output_dir + "/run_report.json";
    const std::string steps_path = cfg.output_dir + "/steps.jsonl";
    const std::string recipe_path = cfg.output_dir + "/recipe.json";
    const bool is_raw = run_cfg.mode == Mode::Raw;

    std::vector<std::string> written;
    try {
        json report;
        report["version"] = 1;
        report["mode"] = to_string(run_cfg.mode);
        report["reward_variant"] = to_string(run_cfg.reward_variant);
        report["seed"] = run_cfg.seed;
        report["dataset"] = {{"path", cfg.dataset_path},
                             {"label_column", cfg.label_column},
                             {"n_samples", data.n_samples},
                             {"n_columns", data.schema.columns.size()}};
        report["baseline"] = metrics_json(result.baseline);
        if (!is_raw) {
            json best = metrics_json(result.best);
            best["n_features"] = result.best_snapshot.size();
            best["found_episode"] = result.best_episode;
            best["found_step"] = result.best_step;
            report["best"] = best;
            report["episodes"] = json::array();
            for (const auto& e : result.episodes)
                report["episodes"].push_back({{"episode", e.episode},
                                              {"return_meta", e.return_meta},
                                              {"return_controller", e.return_controller},
                                              {"best_acc_end", e.best_acc_end}});
        }
        report["config"] = run_config_json(run_cfg);

        write_text_file(report_path, report.dump(2) + "\n");
        written.push_back(report_path);

        std::ostringstream steps;
        for (const StepLog& s : result.steps) steps << s.to_json_line() << "\n";
        write_text_file(steps_path, steps.str());
        written.push_back(steps_path);

        if (!is_raw) {
            result.best_recipe.save(recipe_path);
            written.push_back(recipe_path);
        }
    } catch (...) {
        for (const std::string& p : written) std::remove(p.c_str());
        throw;
    }
    return result;
}

void emit_convergence(const std::string& steps_path, const std::string& out_path) {
    std::ifstream in(steps_path, std::ios::binary);
    if (!in) throw data_error("cannot open step log: " + steps_path);

    struct Row {
        size_t episode;
        double best_acc;
        long long last_change;
    };
    std::vector<Row> rows;
    double prev_best = 0.0;
    long long last_change = -1;
    long long index = 0;
    bool any = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
            const size_t episode = j.at("episode").get<size_t>();
            const double best_acc = j.at("best_acc").get<double>();
            if (any && best_acc > prev_best) last_change = index;
            prev_best = best_acc;
            any = true;
            if (rows.empty() || rows.back().episode != episode)
                rows.push_back({episode, best_acc, last_change});
            else {
                rows.back().best_acc = best_acc;
                rows.back().last_change = last_change;
            }
        } catch (const json::exception& e) {
            throw data_error(steps_path + ": malformed step log line " +
                             std::to_string(index + 1) + ": " + e.what());
        }
        ++index;
    }

    std::ostringstream out;
    out << "episode,best_acc,last_change_step\n";
    for (const Row& r : rows)
        out << r.episode << "," << json(r.best_acc).dump() << "," << r.last_change << "\n";
    write_text_file(out_path, out.str());
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

} // namespace

void write_features_csv(const std::vector<Feature>& features, const Dataset& data,
                        const std::string& label_column, const std::string& out_path) {
    std::ostringstream out;
    for (size_t f = 0; f < features.size(); ++f) {
        if (f) out << ",";
        out << csv_field(features[f].name);
    }
    out << "," << csv_field(label_column) << "\n";
    for (size_t r = 0; r < data.n_samples; ++r) {
        for (size_t f = 0; f < features.size(); ++f) {
            if (f) out << ",";
            out << features[f].hashed[r];
        }
        out << "," << csv_field(data.labels[r]) << "\n";
    }
    write_text_file(out_path, out.str());
}

void apply_recipe_to_csv(const std::string& recipe_path, const std::string& data_path,
                         const std::string& out_path) {
    CrossRecipe recipe = CrossRecipe::load(recipe_path);
    if (recipe.label_column.empty())
        throw data_error("recipe has no label column");

    // Load every recipe column as categorical; replay re-parses numeric
    // tokens itself, so unseen junk degrades to the stored fill value instead
    // of flipping the inferred schema.
    std::map<std::string, ColumnKind> hints;
    for (const std::string& name : recipe.originals)
        hints[name] = ColumnKind::Categorical;
    Dataset data = load_csv(data_path, recipe.label_column, hints);

    std::vector<Feature> features = apply_recipe(recipe, data);
    write_features_csv(features, data, recipe.label_column, out_path);
}

} // namespace crossforge
