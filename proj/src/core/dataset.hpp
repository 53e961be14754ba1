#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace crossforge {

enum class ColumnKind { Numeric, Categorical };

struct SchemaColumn {
    std::string name;
    ColumnKind kind;
};

struct Schema {
    std::vector<SchemaColumn> columns; // includes the label column
    std::string label_column;

    size_t column_index(const std::string& name) const; // throws if absent
};

// Token used for categorical cells whose CSV field was empty.
inline constexpr const char* kMissingToken = "__MISSING__";

// One loaded table. Cells are kept as raw tokens plus, for numeric columns,
// the parsed value and a missing flag; imputation happens later because the
// fill value depends on the train split.
struct Dataset {
    Schema schema;
    size_t n_samples = 0;

    // Per column (schema order). Numeric columns fill `numeric` and `missing`;
    // categorical columns fill `tokens` (missing cells already hold
    // kMissingToken).
    struct Column {
        std::vector<double> numeric;
        std::vector<uint8_t> missing;
        std::vector<std::string> tokens;
    };
    std::vector<Column> columns;

    std::vector<std::string> labels; // tokens of the label column, per row

    bool operator==(const Dataset& other) const;
};

struct Split {
    std::vector<size_t> train_indices; // sorted ascending
    std::vector<size_t> test_indices;  // sorted ascending
    uint64_t seed = 0;
};

// Loads an RFC-4180-style CSV (comma separated, double-quote quoting, header
// row mandatory, at least one data row). A column is numeric iff every
// non-missing cell parses as a finite real and no hint overrides it; the label
// column is always categorical. Column names starting with '#' are rejected
// (reserved for cross references in recipe files).
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::map<std::string, ColumnKind>& type_hints = {});

// Same, but from an in-memory CSV body.
Dataset load_csv_text(const std::string& text, const std::string& source_name,
                      const std::string& label_column,
                      const std::map<std::string, ColumnKind>& type_hints = {});

// Deterministic shuffled split; |train| = round(fraction * n) clamped to
// [1, n-1]. Index sets are disjoint, exhaustive and sorted.
Split split_train_test(const Dataset& d, double fraction, uint64_t seed);

// Class ids for the label tokens: 0..C-1 by first appearance over the train
// indices, then (for tokens seen only in test rows) by first appearance over
// the test indices.
struct LabelEncoding {
    std::vector<int32_t> ids;             // per row
    std::vector<std::string> classes;     // id -> token
    int32_t n_train_classes = 0;          // classes observed in the train split
};
LabelEncoding encode_labels(const Dataset& d, const Split& split);

// Median of the non-missing values of a numeric column over the given rows;
// 0.0 when every value is missing.
double train_median(const Dataset::Column& col, const std::vector<size_t>& rows);

// The numeric-cell rule used by schema inference: finite real, surrounding
// spaces tolerated. Recipe replay parses tokens with the same rule.
bool parse_finite_real(const std::string& s, double& out);

} // namespace crossforge
