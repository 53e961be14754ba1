#include "core/hashing.hpp"

#include "core/error.hpp"

namespace crossforge {

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

int64_t hash_category(std::string_view feature_name, std::string_view token,
                      const HashConfig& cfg) {
    if (cfg.modulus < 2) throw data_error("hash modulus must be >= 2");
    std::string buf;
    buf.reserve(feature_name.size() + 1 + token.size());
    buf.append(feature_name);
    buf.push_back('\x1f');
    buf.append(token);
    return static_cast<int64_t>(fnv1a64(buf) % static_cast<uint64_t>(cfg.modulus));
}

HashedTable hash_table(const std::vector<std::string>& column_names,
                       const std::vector<std::vector<std::string>>& token_columns,
                       const HashConfig& cfg) {
    if (column_names.size() != token_columns.size())
        throw data_error("hash_table: name/column count mismatch");
    HashedTable out;
    out.columns.resize(token_columns.size());
    for (size_t f = 0; f < token_columns.size(); ++f) {
        out.columns[f].reserve(token_columns[f].size());
        for (const std::string& tok : token_columns[f])
            out.columns[f].push_back(
                static_cast<int32_t>(hash_category(column_names[f], tok, cfg)));
    }
    return out;
}

} // namespace crossforge
