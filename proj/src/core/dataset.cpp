#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace crossforge {

size_t Schema::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return i;
    throw data_error("column not found in schema: " + name);
}

bool Dataset::operator==(const Dataset& other) const {
    if (n_samples != other.n_samples || schema.label_column != other.schema.label_column)
        return false;
    if (schema.columns.size() != other.schema.columns.size()) return false;
    for (size_t i = 0; i < schema.columns.size(); ++i) {
        if (schema.columns[i].name != other.schema.columns[i].name) return false;
        if (schema.columns[i].kind != other.schema.columns[i].kind) return false;
    }

    for (size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].numeric != other.columns[i].numeric) return false;
        if (columns[i].missing != other.columns[i].missing) return false;
        if (columns[i].tokens != other.columns[i].tokens) return false;
    }
    return labels == other.labels;
}

namespace {

// Whole-file RFC-4180 field scanner. Quoted fields may contain commas,
// doubled quotes and newlines. Returns rows of raw fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                const std::string& source) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&]() {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&]() {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
        } else if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
            ++i;
        } else if (c == ',') {
            end_field();
            ++i;
        } else if (c == '\r') {
            ++i; // swallow; row ends at the \n
            if (i >= n || text[i] != '\n') end_row();
        } else if (c == '\n') {
            end_row();
            ++i;
        } else {
            field.push_back(c);
            field_started = true;
            ++i;
        }
    }
    if (in_quotes) throw data_error(source + ": unterminated quoted field");
    if (field_started || !row.empty()) end_row();
    return rows;
}

} // namespace

bool parse_finite_real(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    // Tolerate surrounding spaces, as they appear in the wild.
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    if (begin == end) return false;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return false;
    if (!std::isfinite(value)) return false;
    out = value;
    return true;
}

Dataset load_csv_text(const std::string& text, const std::string& source_name,
                      const std::string& label_column,
                      const std::map<std::string, ColumnKind>& type_hints) {
    auto rows = parse_csv(text, source_name);
    if (rows.empty()) throw data_error(source_name + ": empty file");
    if (rows.size() < 2) throw data_error(source_name + ": no data rows");

    const auto& header = rows.front();
    const size_t n_cols = header.size();
    std::set<std::string> seen;
    for (const auto& name : header) {
        if (name.empty()) throw data_error(source_name + ": empty column name in header");
        if (name.front() == '#')
            throw data_error(source_name + ": column names may not start with '#': " + name);
        if (!seen.insert(name).second)
            throw data_error(source_name + ": duplicate column name: " + name);
    }

    size_t label_idx = n_cols;
    for (size_t i = 0; i < n_cols; ++i)
        if (header[i] == label_column) label_idx = i;
    if (label_idx == n_cols)
        throw data_error(source_name + ": label column not found: " + label_column);

    const size_t n_samples = rows.size() - 1;
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != n_cols) {
            std::ostringstream msg;
            msg << source_name << ": row " << r << " has " << rows[r].size()
                << " fields, expected " << n_cols;
            throw data_error(msg.str());
        }
    }

    // Kind inference. The label column is always categorical.
    std::vector<ColumnKind> kinds(n_cols, ColumnKind::Numeric);
    for (size_t c = 0; c < n_cols; ++c) {
        auto hint = type_hints.find(header[c]);
        if (c == label_idx) {
            kinds[c] = ColumnKind::Categorical;
            continue;
        }
        if (hint != type_hints.end()) {
            kinds[c] = hint->second;
            continue;
        }
        bool numeric = true;
        bool any_value = false;
        for (size_t r = 1; r < rows.size() && numeric; ++r) {
            const std::string& cell = rows[r][c];
            if (cell.empty()) continue; // missing
            any_value = true;
            double v;
            if (!parse_finite_real(cell, v)) numeric = false;
        }
        kinds[c] = (numeric && any_value) ? ColumnKind::Numeric : ColumnKind::Categorical;
    }

    Dataset d;
    d.n_samples = n_samples;
    d.schema.label_column = label_column;
    for (size_t c = 0; c < n_cols; ++c)
        d.schema.columns.push_back({header[c], kinds[c]});

    d.columns.resize(n_cols);
    for (size_t c = 0; c < n_cols; ++c) {
        auto& col = d.columns[c];
        if (kinds[c] == ColumnKind::Numeric) {
            col.numeric.resize(n_samples, 0.0);
            col.missing.resize(n_samples, 0);
            for (size_t r = 0; r < n_samples; ++r) {
                const std::string& cell = rows[r + 1][c];
                if (cell.empty()) {
                    col.missing[r] = 1;
                } else {
                    double v;
                    if (!parse_finite_real(cell, v))
                        throw internal_error("numeric inference inconsistent for " + header[c]);
                    col.numeric[r] = v;
                }
            }
        } else {
            col.tokens.resize(n_samples);
            for (size_t r = 0; r < n_samples; ++r) {
                const std::string& cell = rows[r + 1][c];
                col.tokens[r] = cell.empty() ? kMissingToken : cell;
            }
        }
    }

    d.labels = d.columns[label_idx].tokens;
    std::set<std::string> distinct_labels(d.labels.begin(), d.labels.end());
    if (distinct_labels.size() < 2)
        throw data_error(source_name + ": label column has fewer than 2 distinct values");
    return d;
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::map<std::string, ColumnKind>& type_hints) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_csv_text(buf.str(), path, label_column, type_hints);
}

Split split_train_test(const Dataset& d, double fraction, uint64_t seed) {
    const size_t n = d.n_samples;
    if (!(fraction > 0.0 && fraction < 1.0))
        throw data_error("split fraction must be in (0,1)");
    // Small slack: 0.8 * 5 is 3.9999... in binary.
    if (fraction * static_cast<double>(n) < 1.0 - 1e-9 ||
        (1.0 - fraction) * static_cast<double>(n) < 1.0 - 1e-9)
        throw data_error("split fraction leaves an empty side");

    size_t k = static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
    k = std::clamp<size_t>(k, 1, n - 1);

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    Split s;
    s.seed = seed;
    s.train_indices.assign(order.begin(), order.begin() + static_cast<long>(k));
    s.test_indices.assign(order.begin() + static_cast<long>(k), order.end());
    std::sort(s.train_indices.begin(), s.train_indices.end());
    std::sort(s.test_indices.begin(), s.test_indices.end());
    return s;
}

LabelEncoding encode_labels(const Dataset& d, const Split& split) {
    LabelEncoding enc;
    enc.ids.assign(d.n_samples, -1);
    std::map<std::string, int32_t> table;
    auto assign = [&](const std::vector<size_t>& rows) {
        for (size_t r : rows) {
            auto it = table.find(d.labels[r]);
            if (it == table.end()) {
                int32_t id = static_cast<int32_t>(enc.classes.size());
                table.emplace(d.labels[r], id);
                enc.classes.push_back(d.labels[r]);
            }
        }
    };
    assign(split.train_indices);
    enc.n_train_classes = static_cast<int32_t>(enc.classes.size());
    assign(split.test_indices);
    for (size_t r = 0; r < d.n_samples; ++r) enc.ids[r] = table.at(d.labels[r]);
    return enc;
}

double train_median(const Dataset::Column& col, const std::vector<size_t>& rows) {
    std::vector<double> vals;
    vals.reserve(rows.size());
    for (size_t r : rows)
        if (!col.missing[r]) vals.push_back(col.numeric[r]);
    if (vals.empty()) return 0.0;
    std::sort(vals.begin(), vals.end());
    const size_t n = vals.size();
    if (n % 2 == 1) return vals[n / 2];
    return 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
}

} // namespace crossforge
