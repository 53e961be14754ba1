#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/binning.hpp"
#include "core/dataset.hpp"
#include "core/downstream.hpp"
#include "core/hashing.hpp"
#include "core/metrics.hpp"
#include "core/rl.hpp"
#include "core/state.hpp"

namespace crossforge {

struct Lineage {
    enum class Kind { Original, Crossed };
    Kind kind = Kind::Original;
    std::string column_name; // Original
    int left_parent = -1;    // Crossed: feature ids within the set
    int right_parent = -1;
};

// Interned categorical column: per-row code into a first-appearance vocab.
struct CategoricalColumn {
    std::vector<int32_t> codes;
    std::vector<std::string> vocab;

    size_t n_rows() const { return codes.size(); }
    const std::string& token(size_t row) const {
        return vocab[static_cast<size_t>(codes[row])];
    }
};

struct Feature {
    int id = -1;
    std::string name;
    Lineage lineage;
    // Lineage fingerprint; two features get the same signature iff they were
    // built by the same cross tree over the same original columns. Used to
    // memoize downstream evaluations.
    uint64_t signature = 0;
    CategoricalColumn column;    // all rows
    std::vector<int32_t> hashed; // all rows, in [0, M)
    std::vector<int32_t> hashed_train;
    FeatureRep rep{}; // describe() of hashed_train
};

struct FeatureSet {
    std::vector<Feature> features;
    int next_id = 0;
    std::set<std::pair<int, int>> crossed_pairs; // unordered parent-id pairs

    size_t size() const { return features.size(); }
    const Feature& by_id(int id) const;
    size_t index_of(int id) const;
    bool pair_crossed(int a, int b) const;
    // Partners j of meta: j != meta and {meta, j} not crossed yet.
    std::vector<int> legal_partners(int meta_id) const;
    // Features that still have at least one legal partner.
    std::vector<int> legal_metas() const;
};

struct RewardWeights {
    double w1 = 1.0, w2 = 1.0, w3 = 1.0; // meta controller
    double w4 = 1.0, w5 = 1.0, w6 = 1.0; // controller
};

enum class Mode { Hrc, HrcStar, HrcHash, HrcBang, Raw };
enum class RewardVariant { Acc, Rv, Rd, RvRd, AccRvRd };

std::string to_string(Mode m);
std::string to_string(RewardVariant v);
Mode mode_from_string(const std::string& s);
RewardVariant variant_from_string(const std::string& s);

// Zeroes the weights the variant excludes; the kept terms retain their Eq.-3/4
// signs (the redundancy term always enters negatively).
RewardWeights apply_variant(RewardWeights w, RewardVariant v);

enum class MiInput { Hashed, RawCategories };

struct RunConfig {
    size_t episodes = 15;
    size_t steps_per_episode = 70;
    double split_fraction = 0.8;
    uint64_t seed = 0;
    Mode mode = Mode::Hrc;
    RewardVariant reward_variant = RewardVariant::AccRvRd;
    RewardWeights weights;
    AgentConfig agent; // per-agent seeds are derived from `seed`
    HashConfig hash;
    BinningConfig binning;
    DownstreamConfig downstream;
    size_t max_feature_set_size = 0; // 0 = unbounded
    MiInput mi_on = MiInput::Hashed;
};

struct CrossOp {
    // Feature references: an original column name, or "#k" for the k-th cross
    // of this recipe (0-based).
    std::string left;
    std::string right;
    std::string name;
};

// The replayable generation path. Applying it to a dataset with the original
// columns reproduces the generated feature columns exactly; imputation values
// and the original-column order are stored so replay does not depend on the
// split that produced them.
struct CrossRecipe {
    HashConfig hash;
    std::string label_column;
    std::vector<std::string> originals;                       // feature order
    std::vector<BinningSpec> binning;                         // numeric columns
    std::vector<std::pair<std::string, double>> imputation;   // column -> fill value
    std::vector<CrossOp> crosses;

    std::string to_json_string() const;
    static CrossRecipe from_json_string(const std::string& text);
    void save(const std::string& path) const;
    static CrossRecipe load(const std::string& path);
};

struct StepLog {
    size_t episode = 0; // 1-based
    size_t step = 0;    // 0-based within the episode
    std::optional<std::string> action_meta;
    std::optional<std::string> action_partner;
    double acc = 0.0, rv = 0.0, rd = 0.0, r1 = 0.0, r2 = 0.0;
    size_t n_features = 0;
    double best_acc = 0.0; // global best after this step
    bool skipped = false;

    std::string to_json_line() const;
};

struct EpisodeSummary {
    size_t episode = 0;
    double return_meta = 0.0;       // sum_t gamma1^t r1_t
    double return_controller = 0.0; // sum_t gamma2^t r2_t
    double best_acc_end = 0.0;      // global best at episode end
};

struct RunResult {
    ClassificationMetrics baseline; // original post-binning feature set
    ClassificationMetrics best;
    size_t best_episode = 0; // 0 = the baseline evaluation
    size_t best_step = 0;
    CrossRecipe best_recipe;
    std::vector<Feature> best_snapshot; // live columns of the best set
    std::vector<StepLog> steps;
    std::vector<EpisodeSummary> episodes;
};

// Original features from a dataset and split: numeric columns are imputed
// with the train-split median and discretized by ChiMerge fitted on train
// rows; categorical columns pass through. All columns are hashed.
struct PreparedFeatures {
    std::vector<Feature> originals;
    CrossRecipe recipe_base; // hash, binning, imputation; no crosses
    LabelEncoding labels;
};
PreparedFeatures prepare_features(const Dataset& data, const Split& split,
                                  const HashConfig& hash_cfg,
                                  const BinningConfig& binning_cfg);

// Cartesian cross: token = left_token & right_token, name = leftxright.
// Throws on self-cross. Train-row gathering and the feature rep are filled
// when train_rows is non-empty.
Feature cartesian_cross(const Feature& left, const Feature& right, int new_id,
                        const HashConfig& hash_cfg,
                        std::span<const size_t> train_rows = {});

std::pair<double, double> compute_rewards(double acc, double acc_best, double rv,
                                          double rd, const RewardWeights& w);

RunResult run(const RunConfig& config, const Dataset& data);

// Replays a recipe against a dataset; throws a data error when a referenced
// column is absent. Unseen category tokens pass through (the hash covers any
// token). Feature reps are not filled.
std::vector<Feature> apply_recipe(const CrossRecipe& recipe, const Dataset& data);

} // namespace crossforge
