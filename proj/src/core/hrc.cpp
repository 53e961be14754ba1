#include "core/hrc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "core/error.hpp"

namespace crossforge {

using nlohmann::json;

const Feature& FeatureSet::by_id(int id) const { return features[index_of(id)]; }

size_t FeatureSet::index_of(int id) const {
    for (size_t i = 0; i < features.size(); ++i)
        if (features[i].id == id) return i;
    throw internal_error("feature id not in set");
}

bool FeatureSet::pair_crossed(int a, int b) const {
    return crossed_pairs.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::vector<int> FeatureSet::legal_partners(int meta_id) const {
    std::vector<int> out;
    for (const Feature& f : features) {
        if (f.id == meta_id) continue;
        if (pair_crossed(meta_id, f.id)) continue;
        out.push_back(f.id);
    }
    return out;
}

std::vector<int> FeatureSet::legal_metas() const {
    std::vector<int> out;
    for (const Feature& f : features)
        if (!legal_partners(f.id).empty()) out.push_back(f.id);
    return out;
}

std::string to_string(Mode m) {
    switch (m) {
        case Mode::Hrc: return "hrc";
        case Mode::HrcStar: return "hrc_star";
        case Mode::HrcHash: return "hrc_hash";
        case Mode::HrcBang: return "hrc_bang";
        case Mode::Raw: return "raw";
    }
    throw internal_error("bad mode");
}

std::string to_string(RewardVariant v) {
    switch (v) {
        case RewardVariant::Acc: return "acc";
        case RewardVariant::Rv: return "rv";
        case RewardVariant::Rd: return "rd";
        case RewardVariant::RvRd: return "rv_rd";
        case RewardVariant::AccRvRd: return "acc_rv_rd";
    }
    throw internal_error("bad reward variant");
}

Mode mode_from_string(const std::string& s) {
    if (s == "hrc") return Mode::Hrc;
    if (s == "hrc_star") return Mode::HrcStar;
    if (s == "hrc_hash") return Mode::HrcHash;
    if (s == "hrc_bang") return Mode::HrcBang;
    if (s == "raw") return Mode::Raw;
    throw usage_error("unknown mode: " + s);
}

RewardVariant variant_from_string(const std::string& s) {
    if (s == "acc") return RewardVariant::Acc;
    if (s == "rv") return RewardVariant::Rv;
    if (s == "rd") return RewardVariant::Rd;
    if (s == "rv_rd") return RewardVariant::RvRd;
    if (s == "acc_rv_rd") return RewardVariant::AccRvRd;
    throw usage_error("unknown reward variant: " + s);
}

RewardWeights apply_variant(RewardWeights w, RewardVariant v) {
    switch (v) {
        case RewardVariant::Acc:
            w.w2 = w.w3 = w.w5 = w.w6 = 0.0;
            break;
        case RewardVariant::Rv:
            w.w1 = w.w3 = w.w4 = w.w6 = 0.0;
            break;
        case RewardVariant::Rd:
            w.w1 = w.w2 = w.w4 = w.w5 = 0.0;
            break;
        case RewardVariant::RvRd:
            w.w1 = w.w4 = 0.0;
            break;
        case RewardVariant::AccRvRd:
            break;
    }
    return w;
}

std::pair<double, double> compute_rewards(double acc, double acc_best, double rv,
                                          double rd, const RewardWeights& w) {
    const double delta = acc - acc_best;
    return {w.w1 * delta + w.w2 * rv - w.w3 * rd,
            w.w4 * delta + w.w5 * rv - w.w6 * rd};
}

namespace {

uint64_t original_signature(const std::string& column_name) {
    return fnv1a64("o:" + column_name);
}

uint64_t cross_signature(uint64_t left, uint64_t right) {
    char buf[18];
    buf[0] = 'x';
    buf[1] = ':';
    for (int i = 0; i < 8; ++i) buf[2 + i] = static_cast<char>((left >> (8 * i)) & 0xff);
    for (int i = 0; i < 8; ++i) buf[10 + i] = static_cast<char>((right >> (8 * i)) & 0xff);
    return fnv1a64(std::string_view(buf, 18));
}

void hash_feature_column(Feature& f, const HashConfig& cfg) {
    std::vector<int32_t> bucket_of_code(f.column.vocab.size());
    for (size_t c = 0; c < f.column.vocab.size(); ++c)
        bucket_of_code[c] = static_cast<int32_t>(hash_category(f.name, f.column.vocab[c], cfg));
    f.hashed.resize(f.column.codes.size());
    for (size_t i = 0; i < f.column.codes.size(); ++i)
        f.hashed[i] = bucket_of_code[static_cast<size_t>(f.column.codes[i])];
}

void finalize_feature(Feature& f, std::span<const size_t> train_rows) {
    if (train_rows.empty()) return;
    f.hashed_train.resize(train_rows.size());
    for (size_t i = 0; i < train_rows.size(); ++i)
        f.hashed_train[i] = f.hashed[train_rows[i]];
    f.rep = feature_rep(f.hashed_train);
}

} // namespace

Feature cartesian_cross(const Feature& left, const Feature& right, int new_id,
                        const HashConfig& hash_cfg, std::span<const size_t> train_rows) {
    if (left.id == right.id) throw data_error("cartesian_cross: self-cross");
    if (left.column.codes.size() != right.column.codes.size())
        throw internal_error("cartesian_cross: row count mismatch");

    Feature f;
    f.id = new_id;
    f.name = left.name + "x" + right.name;
    f.lineage = {Lineage::Kind::Crossed, "", left.id, right.id};
    f.signature = cross_signature(left.signature, right.signature);

    const size_t n = left.column.codes.size();
    f.column.codes.resize(n);
    std::unordered_map<uint64_t, int32_t> pair_code;
    pair_code.reserve(64);
    for (size_t i = 0; i < n; ++i) {
        const uint64_t key = (static_cast<uint64_t>(static_cast<uint32_t>(left.column.codes[i])) << 32) |
                             static_cast<uint32_t>(right.column.codes[i]);
        auto it = pair_code.find(key);
        if (it == pair_code.end()) {
            const int32_t code = static_cast<int32_t>(f.column.vocab.size());
            f.column.vocab.push_back(left.column.token(i) + "&" + right.column.token(i));
            it = pair_code.emplace(key, code).first;
        }
        f.column.codes[i] = it->second;
    }
    hash_feature_column(f, hash_cfg);
    finalize_feature(f, train_rows);
    return f;
}

PreparedFeatures prepare_features(const Dataset& data, const Split& split,
                                  const HashConfig& hash_cfg,
                                  const BinningConfig& binning_cfg) {
    PreparedFeatures prep;
    prep.labels = encode_labels(data, split);
    prep.recipe_base.hash = hash_cfg;
    prep.recipe_base.label_column = data.schema.label_column;

    std::vector<int32_t> train_labels;
    train_labels.reserve(split.train_indices.size());
    for (size_t r : split.train_indices) train_labels.push_back(prep.labels.ids[r]);

    int id = 0;
    for (size_t c = 0; c < data.schema.columns.size(); ++c) {
        const auto& sc = data.schema.columns[c];
        if (sc.name == data.schema.label_column) continue;

        Feature f;
        f.id = id++;
        f.name = sc.name;
        f.lineage = {Lineage::Kind::Original, sc.name, -1, -1};
        f.signature = original_signature(sc.name);
        prep.recipe_base.originals.push_back(sc.name);

        if (sc.kind == ColumnKind::Numeric) {
            const auto& col = data.columns[c];
            const double fill = train_median(col, split.train_indices);
            prep.recipe_base.imputation.emplace_back(sc.name, fill);

            std::vector<double> all(data.n_samples);
            for (size_t r = 0; r < data.n_samples; ++r)
                all[r] = col.missing[r] ? fill : col.numeric[r];

            std::vector<double> train_vals;
            train_vals.reserve(split.train_indices.size());
            for (size_t r : split.train_indices) train_vals.push_back(all[r]);

            BinningSpec spec = fit_chimerge(train_vals, train_labels, binning_cfg, sc.name);
            prep.recipe_base.binning.push_back(spec);

            f.column.codes = apply_binning(all, spec);
            for (size_t b = 0; b < spec.n_bins(); ++b)
                f.column.vocab.push_back(std::to_string(b));
        } else {
            const auto& toks = data.columns[c].tokens;
            std::unordered_map<std::string, int32_t> intern;
            f.column.codes.resize(data.n_samples);
            for (size_t r = 0; r < data.n_samples; ++r) {
                auto it = intern.find(toks[r]);
                if (it == intern.end()) {
                    const int32_t code = static_cast<int32_t>(f.column.vocab.size());
                    f.column.vocab.push_back(toks[r]);
                    it = intern.emplace(toks[r], code).first;
                }
                f.column.codes[r] = it->second;
            }
        }

        hash_feature_column(f, hash_cfg);
        finalize_feature(f, split.train_indices);
        prep.originals.push_back(std::move(f));
    }
    return prep;
}

// ---------------------------------------------------------------------------
// Recipe serialization
// ---------------------------------------------------------------------------

std::string CrossRecipe::to_json_string() const {
    json j;
    j["version"] = 1;
    j["hash"] = {{"modulus", hash.modulus}};
    j["label_column"] = label_column;
    j["originals"] = originals;
    j["binning"] = json::array();
    for (const auto& b : binning)
        j["binning"].push_back({{"column", b.column_name}, {"cuts", b.cuts}});
    j["imputation"] = json::array();
    for (const auto& [col, v] : imputation)
        j["imputation"].push_back({{"column", col}, {"value", v}});
    j["crosses"] = json::array();
    for (const auto& op : crosses)
        j["crosses"].push_back({{"left", op.left}, {"right", op.right}, {"name", op.name}});
    return j.dump(2);
}

CrossRecipe CrossRecipe::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw data_error("bad recipe json: " + std::string(e.what()));
    }
    try {
        if (j.value("version", 0) != 1) throw data_error("unsupported recipe version");
        CrossRecipe r;
        r.hash.modulus = j.at("hash").at("modulus").get<int64_t>();
        r.label_column = j.value("label_column", "");
        if (j.contains("originals"))
            r.originals = j.at("originals").get<std::vector<std::string>>();
        for (const auto& b : j.at("binning")) {
            BinningSpec spec;
            spec.column_name = b.at("column").get<std::string>();
            spec.cuts = b.at("cuts").get<std::vector<double>>();
            r.binning.push_back(std::move(spec));
        }
        if (j.contains("imputation"))
            for (const auto& e : j.at("imputation"))
                r.imputation.emplace_back(e.at("column").get<std::string>(),
                                          e.at("value").get<double>());
        for (const auto& c : j.at("crosses"))
            r.crosses.push_back({c.at("left").get<std::string>(),
                                 c.at("right").get<std::string>(),
                                 c.at("name").get<std::string>()});
        return r;
    } catch (const json::exception& e) {
        throw data_error("bad recipe json: " + std::string(e.what()));
    }
}

void CrossRecipe::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write recipe: " + path);
    out << to_json_string() << "\n";
}

CrossRecipe CrossRecipe::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open recipe: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_string(buf.str());
}

std::string StepLog::to_json_line() const {
    json j;
    j["episode"] = episode;
    j["step"] = step;
    j["action_meta"] = action_meta ? json(*action_meta) : json(nullptr);
    j["action_partner"] = action_partner ? json(*action_partner) : json(nullptr);
    j["acc"] = acc;
    j["rv"] = rv;
    j["rd"] = rd;
    j["r1"] = r1;
    j["r2"] = r2;
    j["n_features"] = n_features;
    j["best_acc"] = best_acc;
    if (skipped) j["skipped"] = true;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Recipe replay
// ---------------------------------------------------------------------------

std::vector<Feature> apply_recipe(const CrossRecipe& recipe, const Dataset& data) {
    std::vector<Feature> features;
    std::unordered_map<std::string, size_t> original_index;

    auto binning_for = [&](const std::string& name) -> const BinningSpec* {
        for (const auto& b : recipe.binning)
            if (b.column_name == name) return &b;
        return nullptr;
    };
    auto imputation_for = [&](const std::string& name) {
        for (const auto& [col, v] : recipe.imputation)
            if (col == name) return v;
        return 0.0;
    };

    int id = 0;
    for (const std::string& name : recipe.originals) {
        const size_t c = data.schema.column_index(name); // throws when absent
        const auto& col = data.columns[c];

        Feature f;
        f.id = id++;
        f.name = name;
        f.lineage = {Lineage::Kind::Original, name, -1, -1};
        f.signature = original_signature(name);

        if (const BinningSpec* spec = binning_for(name)) {
            const double fill = imputation_for(name);
            std::vector<double> vals(data.n_samples);
            if (data.schema.columns[c].kind == ColumnKind::Numeric) {
                for (size_t r = 0; r < data.n_samples; ++r)
                    vals[r] = col.missing[r] ? fill : col.numeric[r];
            } else {
                // The column came in as tokens; parse each cell with the same
                // rule the loader uses, falling back to the stored fill value.
                for (size_t r = 0; r < data.n_samples; ++r) {
                    const std::string& tok = col.tokens[r];
                    double v = 0.0;
                    vals[r] = (tok != kMissingToken && parse_finite_real(tok, v)) ? v : fill;
                }
            }
            f.column.codes = apply_binning(vals, *spec);
            for (size_t b = 0; b < spec->n_bins(); ++b)
                f.column.vocab.push_back(std::to_string(b));
        } else {
            if (data.schema.columns[c].kind != ColumnKind::Categorical)
                throw data_error("recipe column " + name +
                                 " is categorical but parsed as numeric; "
                                 "load the data with a categorical type hint");
            std::unordered_map<std::string, int32_t> intern;
            f.column.codes.resize(data.n_samples);
            for (size_t r = 0; r < data.n_samples; ++r) {
                auto it = intern.find(col.tokens[r]);
                if (it == intern.end()) {
                    const int32_t code = static_cast<int32_t>(f.column.vocab.size());
                    f.column.vocab.push_back(col.tokens[r]);
                    it = intern.emplace(col.tokens[r], code).first;
                }
                f.column.codes[r] = it->second;
            }
        }
        hash_feature_column(f, recipe.hash);
        original_index.emplace(name, features.size());
        features.push_back(std::move(f));
    }

    const size_t n_originals = features.size();
    auto resolve = [&](const std::string& ref) -> size_t {
        if (!ref.empty() && ref[0] == '#') {
            size_t k = 0;
            try {
                k = static_cast<size_t>(std::stoul(ref.substr(1)));
            } catch (...) {
                throw data_error("bad cross reference: " + ref);
            }
            if (n_originals + k >= features.size())
                throw data_error("cross reference out of range: " + ref);
            return n_originals + k;
        }
        auto it = original_index.find(ref);
        if (it == original_index.end())
            throw data_error("recipe references unknown column: " + ref);
        return it->second;
    };

    for (const CrossOp& op : recipe.crosses) {
        const Feature& left = features[resolve(op.left)];
        const Feature& right = features[resolve(op.right)];
        Feature child = cartesian_cross(left, right, id++, recipe.hash);
        if (child.name != op.name)
            throw data_error("recipe cross name mismatch: expected " + op.name +
                             ", derived " + child.name);
        features.push_back(std::move(child));
    }
    return features;
}

// ---------------------------------------------------------------------------
// The crossing loop
// ---------------------------------------------------------------------------

namespace {

std::string sig_key(std::vector<uint64_t> sigs) {
    std::sort(sigs.begin(), sigs.end());
    std::string key(sigs.size() * 8, '\0');
    for (size_t i = 0; i < sigs.size(); ++i)
        std::memcpy(key.data() + i * 8, &sigs[i], 8);
    return key;
}

class CrossingRun {
public:
    CrossingRun(const RunConfig& cfg, const Dataset& data)
        : cfg_(cfg), data_(data),
          split_(split_train_test(data, cfg.split_fraction, cfg.seed)),
          weights_(apply_variant(cfg.weights, cfg.reward_variant)) {
        DownstreamConfig ds = cfg_.downstream;
        ds.modulus = cfg_.hash.modulus;
        downstream_ = ds;

        prep_ = prepare_features(data_, split_, cfg_.hash, cfg_.binning);
        if (cfg_.mode != Mode::Raw && prep_.originals.size() < 2)
            throw data_error("crossing needs at least 2 features after binning");

        train_labels_.reserve(split_.train_indices.size());
        for (size_t r : split_.train_indices) train_labels_.push_back(prep_.labels.ids[r]);

        if (cfg_.mode == Mode::Hrc || cfg_.mode == Mode::HrcStar) {
            AgentConfig ac = cfg_.agent;
            ac.seed = cfg_.seed + 1;
            meta_agent_.emplace(kStateLength + kDescribeStats, ac);
        }
        if (cfg_.mode == Mode::Hrc || cfg_.mode == Mode::HrcHash) {
            AgentConfig ac = cfg_.agent;
            ac.seed = cfg_.seed + 2;
            ctrl_agent_.emplace(kStateLength + 2 * kDescribeStats, ac);
        }
    }

    RunResult execute() {
        reset_episode();
        result_.baseline = eval_current();
        update_best(result_.baseline, 0, 0);
        if (cfg_.mode == Mode::Raw) {
            finish_result();
            return std::move(result_);
        }

        for (size_t episode = 1; episode <= cfg_.episodes; ++episode) {
            if (episode > 1) reset_episode();
            const ClassificationMetrics base = eval_current();
            if (base.accuracy > best_acc_) update_best(base, episode, 0);
            window_best_ = base.accuracy;
            last_acc_ = base.accuracy;
            last_rv_ = current_relevance();
            last_rd_ = current_redundancy();
            state_ = compute_state();

            EpisodeSummary summary;
            summary.episode = episode;
            for (size_t step = 0; step < cfg_.steps_per_episode; ++step) {
                StepLog log = do_step(episode, step);
                const double g1 = std::pow(cfg_.agent.gamma, static_cast<double>(step));
                summary.return_meta += g1 * log.r1;
                summary.return_controller += g1 * log.r2;
                result_.steps.push_back(std::move(log));
                ++global_step_;
            }
            summary.best_acc_end = best_acc_;
            result_.episodes.push_back(summary);
        }
        finish_result();
        return std::move(result_);
    }

private:
    void finish_result() {
        result_.best_recipe = best_recipe_;
        result_.best_snapshot = best_snapshot_;
        result_.best_episode = best_episode_;
        result_.best_step = best_step_;
    }

    void reset_episode() {
        set_.features = prep_.originals;
        set_.next_id = static_cast<int>(prep_.originals.size());
        set_.crossed_pairs.clear();
        rebuild_mi_caches();
    }

    std::span<const int32_t> mi_column(size_t idx) {
        if (cfg_.mi_on == MiInput::Hashed) return set_.features[idx].hashed_train;
        if (mi_raw_cols_.size() <= idx) mi_raw_cols_.resize(idx + 1);
        if (mi_raw_cols_[idx].empty()) {
            auto& col = mi_raw_cols_[idx];
            col.reserve(split_.train_indices.size());
            for (size_t r : split_.train_indices)
                col.push_back(set_.features[idx].column.codes[r]);
        }
        return mi_raw_cols_[idx];
    }

    void rebuild_mi_caches() {
        mi_raw_cols_.clear();
        const size_t f = set_.size();
        if (orig_mi_rows_.empty()) {
            orig_mi_rows_.resize(f);
            orig_mi_label_.resize(f);
            for (size_t j = 0; j < f; ++j) {
                orig_mi_rows_[j].resize(j + 1);
                for (size_t i = 0; i <= j; ++i)
                    orig_mi_rows_[j][i] = mutual_information(mi_column(i), mi_column(j));
                orig_mi_label_[j] = mutual_information(mi_column(j), train_labels_);
            }
        }
        mi_rows_ = orig_mi_rows_;
        mi_label_ = orig_mi_label_;
    }

    // Same summation order as metrics::redundancy, so values agree exactly.
    double current_redundancy() const {
        const size_t f = set_.size();
        double sum = 0.0;
        for (size_t i = 0; i < f; ++i) {
            for (size_t j = i; j < f; ++j) {
                const double mi = mi_rows_[j][i];
                sum += (i == j) ? mi : 2.0 * mi;
            }
        }
        return sum / (static_cast<double>(f) * static_cast<double>(f));
    }

    double current_relevance() const {
        double sum = 0.0;
        for (double v : mi_label_) sum += v;
        return sum / static_cast<double>(set_.size());
    }

    StateVector compute_state() {
        HashedTable table;
        table.columns.reserve(set_.size());
        for (const Feature& f : set_.features) table.columns.push_back(f.hashed_train);
        return state_vector(table);
    }

    HashedColumns current_columns() const {
        HashedColumns cols;
        cols.reserve(set_.size());
        for (const Feature& f : set_.features) cols.emplace_back(f.hashed);
        return cols;
    }

    ClassificationMetrics eval_cached(const std::string& key, const HashedColumns& cols) {
        auto it = eval_cache_.find(key);
        if (it != eval_cache_.end()) return it->second;
        ClassificationMetrics m = train_eval(cols, prep_.labels.ids, split_, downstream_);
        eval_cache_.emplace(key, m);
        return m;
    }

    ClassificationMetrics eval_current() {
        std::vector<uint64_t> sigs;
        sigs.reserve(set_.size());
        for (const Feature& f : set_.features) sigs.push_back(f.signature);
        return eval_cached(sig_key(std::move(sigs)), current_columns());
    }

    ClassificationMetrics eval_with_candidate(const Feature& child) {
        std::vector<uint64_t> sigs;
        sigs.reserve(set_.size() + 1);
        for (const Feature& f : set_.features) sigs.push_back(f.signature);
        sigs.push_back(child.signature);
        HashedColumns cols = current_columns();
        cols.emplace_back(child.hashed);
        return eval_cached(sig_key(std::move(sigs)), cols);
    }

    // Greedy partner for a fixed meta: best evaluated accuracy, lowest id on ties.
    std::pair<int, double> greedy_partner(int meta_id) {
        const Feature& meta = set_.by_id(meta_id);
        int best_id = -1;
        double best_acc = -1.0;
        for (int p : set_.legal_partners(meta_id)) {
            Feature child = cartesian_cross(meta, set_.by_id(p), set_.next_id, cfg_.hash);
            const double acc = eval_with_candidate(child).accuracy;
            if (acc > best_acc) {
                best_acc = acc;
                best_id = p;
            }
        }
        return {best_id, best_acc};
    }

    int greedy_meta() {
        int best_id = -1;
        double best_score = -1.0;
        for (int m : set_.legal_metas()) {
            const double score = greedy_partner(m).second;
            if (score > best_score) {
                best_score = score;
                best_id = m;
            }
        }
        return best_id;
    }

    std::vector<double> controller_action_vec(const Feature& partner,
                                              const Feature& meta) const {
        std::vector<double> v;
        v.reserve(2 * kDescribeStats);
        v.insert(v.end(), partner.rep.begin(), partner.rep.end());
        v.insert(v.end(), meta.rep.begin(), meta.rep.end());
        return v;
    }

    void append_feature(Feature f) {
        set_.crossed_pairs.insert({std::min(f.lineage.left_parent, f.lineage.right_parent),
                                   std::max(f.lineage.left_parent, f.lineage.right_parent)});
        set_.features.push_back(std::move(f));
        set_.next_id += 1;

        const size_t j = set_.size() - 1;
        mi_rows_.emplace_back(j + 1);
        for (size_t i = 0; i <= j; ++i)
            mi_rows_[j][i] = mutual_information(mi_column(i), mi_column(j));
        mi_label_.push_back(mutual_information(mi_column(j), train_labels_));
    }

    void update_best(const ClassificationMetrics& m, size_t episode, size_t step) {
        best_acc_ = m.accuracy;
        result_.best = m;
        best_episode_ = episode;
        best_step_ = step;
        best_snapshot_ = set_.features;
        best_recipe_ = recipe_for_current_set();
    }

    CrossRecipe recipe_for_current_set() const {
        CrossRecipe r = prep_.recipe_base;
        std::unordered_map<int, std::string> ref_of_id;
        for (const Feature& f : set_.features)
            if (f.lineage.kind == Lineage::Kind::Original)
                ref_of_id.emplace(f.id, f.name);
        for (const Feature& f : set_.features) {
            if (f.lineage.kind != Lineage::Kind::Crossed) continue;
            CrossOp op;
            op.left = ref_of_id.at(f.lineage.left_parent);
            op.right = ref_of_id.at(f.lineage.right_parent);
            op.name = f.name;
            ref_of_id.emplace(f.id, "#" + std::to_string(r.crosses.size()));
            r.crosses.push_back(std::move(op));
        }
        return r;
    }

    StepLog do_step(size_t episode, size_t step) {
        StepLog log;
        log.episode = episode;
        log.step = step;

        const bool capped = cfg_.max_feature_set_size > 0 &&
                            set_.size() >= cfg_.max_feature_set_size;
        std::vector<int> metas;
        if (!capped) metas = set_.legal_metas();
        if (metas.empty()) {
            log.skipped = true;
            log.acc = last_acc_;
            log.rv = last_rv_;
            log.rd = last_rd_;
            log.n_features = set_.size();
            log.best_acc = best_acc_;
            return log;
        }

        const double eps = epsilon_at(cfg_.agent, global_step_);

        int meta_id;
        if (cfg_.mode == Mode::HrcHash || cfg_.mode == Mode::HrcBang) {
            meta_id = greedy_meta();
        } else {
            std::vector<std::vector<double>> cands;
            cands.reserve(metas.size());
            for (int m : metas) {
                const Feature& f = set_.by_id(m);
                cands.emplace_back(f.rep.begin(), f.rep.end());
            }
            meta_id = metas[meta_agent_->select(state_, cands, eps)];
        }
        const Feature& meta = set_.by_id(meta_id);

        int partner_id;
        if (cfg_.mode == Mode::HrcStar || cfg_.mode == Mode::HrcBang) {
            partner_id = greedy_partner(meta_id).first;
        } else {
            const std::vector<int> partners = set_.legal_partners(meta_id);
            std::vector<std::vector<double>> cands;
            cands.reserve(partners.size());
            for (int p : partners)
                cands.push_back(controller_action_vec(set_.by_id(p), meta));
            partner_id = partners[ctrl_agent_->select(state_, cands, eps)];
        }

        // Copies: the append below may reallocate the feature vector.
        const FeatureRep meta_rep = meta.rep;
        const FeatureRep partner_rep = set_.by_id(partner_id).rep;
        const std::string meta_name = meta.name;
        const std::string partner_name = set_.by_id(partner_id).name;

        Feature child = cartesian_cross(meta, set_.by_id(partner_id), set_.next_id,
                                        cfg_.hash, split_.train_indices);
        append_feature(std::move(child));

        const StateVector next_state = compute_state();
        const ClassificationMetrics metrics = eval_current();
        const double rv = current_relevance();
        const double rd = current_redundancy();
        const auto [r1, r2] = compute_rewards(metrics.accuracy, window_best_, rv, rd, weights_);

        if (meta_agent_) {
            Transition t;
            t.state.assign(state_.begin(), state_.end());
            t.action.assign(meta_rep.begin(), meta_rep.end());
            t.reward = r1;
            t.next_state.assign(next_state.begin(), next_state.end());
            for (const Feature& f : set_.features)
                t.next_actions.emplace_back(f.rep.begin(), f.rep.end());
            meta_agent_->memory.push(std::move(t));
        }
        if (ctrl_agent_) {
            Transition t;
            t.state.assign(state_.begin(), state_.end());
            t.action.assign(partner_rep.begin(), partner_rep.end());
            t.action.insert(t.action.end(), meta_rep.begin(), meta_rep.end());
            t.reward = r2;
            t.next_state.assign(next_state.begin(), next_state.end());
            for (const Feature& f : set_.features) {
                std::vector<double> a(f.rep.begin(), f.rep.end());
                a.insert(a.end(), meta_rep.begin(), meta_rep.end());
                t.next_actions.push_back(std::move(a));
            }
            ctrl_agent_->memory.push(std::move(t));
        }
        if (meta_agent_) meta_agent_->train();
        if (ctrl_agent_) ctrl_agent_->train();

        if (metrics.accuracy > window_best_) window_best_ = metrics.accuracy;
        if (metrics.accuracy > best_acc_) update_best(metrics, episode, step + 1);

        state_ = next_state;
        last_acc_ = metrics.accuracy;
        last_rv_ = rv;
        last_rd_ = rd;

        log.action_meta = meta_name;
        log.action_partner = partner_name;
        log.acc = metrics.accuracy;
        log.rv = rv;
        log.rd = rd;
        log.r1 = r1;
        log.r2 = r2;
        log.n_features = set_.size();
        log.best_acc = best_acc_;
        return log;
    }

    const RunConfig& cfg_;
    const Dataset& data_;
    Split split_;
    RewardWeights weights_;
    DownstreamConfig downstream_;
    PreparedFeatures prep_;
    std::vector<int32_t> train_labels_;

    FeatureSet set_;
    std::vector<std::vector<double>> mi_rows_;
    std::vector<double> mi_label_;
    std::vector<std::vector<double>> orig_mi_rows_;
    std::vector<double> orig_mi_label_;
    std::vector<std::vector<int32_t>> mi_raw_cols_;

    std::optional<Agent> meta_agent_;
    std::optional<Agent> ctrl_agent_;
    size_t global_step_ = 0;

    std::unordered_map<std::string, ClassificationMetrics> eval_cache_;

    StateVector state_{};
    double window_best_ = 0.0;
    double last_acc_ = 0.0, last_rv_ = 0.0, last_rd_ = 0.0;

    double best_acc_ = -1.0;
    size_t best_episode_ = 0, best_step_ = 0;
    CrossRecipe best_recipe_;
    std::vector<Feature> best_snapshot_;

    RunResult result_;
};

} // namespace

RunResult run(const RunConfig& config, const Dataset& data) {
    if (config.mode != Mode::Raw &&
        (config.episodes < 1 || config.steps_per_episode < 1))
        throw usage_error("episodes and steps_per_episode must be positive");
    CrossingRun runner(config, data);
    return runner.execute();
}

} // namespace crossforge
