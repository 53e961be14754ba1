#include "core/json_util.hpp"

#include <bit>
#include <cstring>

#include "core/error.hpp"

namespace crossforge {

namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

} // namespace

std::string base64_encode_f64(std::span<const double> values) {
    std::vector<uint8_t> bytes;
    bytes.reserve(values.size() * 8);
    for (double d : values) {
        uint64_t bits = std::bit_cast<uint64_t>(d);
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<uint8_t>(bits >> (8 * i)));
    }

    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (size_t i = 0; i < bytes.size(); i += 3) {
        uint32_t chunk = static_cast<uint32_t>(bytes[i]) << 16;
        if (i + 1 < bytes.size()) chunk |= static_cast<uint32_t>(bytes[i + 1]) << 8;
        if (i + 2 < bytes.size()) chunk |= bytes[i + 2];
        out.push_back(kAlphabet[(chunk >> 18) & 63]);
        out.push_back(kAlphabet[(chunk >> 12) & 63]);
        out.push_back(i + 1 < bytes.size() ? kAlphabet[(chunk >> 6) & 63] : '=');
        out.push_back(i + 2 < bytes.size() ? kAlphabet[chunk & 63] : '=');
    }
    return out;
}

std::vector<double> base64_decode_f64(const std::string& text) {
    if (text.size() % 4 != 0) throw data_error("base64 length not a multiple of 4");
    std::vector<uint8_t> bytes;
    bytes.reserve(text.size() / 4 * 3);
    for (size_t i = 0; i < text.size(); i += 4) {
        int vals[4];
        int pad = 0;
        for (int k = 0; k < 4; ++k) {
            char c = text[i + k];
            if (c == '=') {
                vals[k] = 0;
                ++pad;
            } else {
                vals[k] = decode_char(c);
                if (vals[k] < 0 || pad > 0) throw data_error("bad base64 input");
            }
        }
        uint32_t chunk = (static_cast<uint32_t>(vals[0]) << 18) |
                         (static_cast<uint32_t>(vals[1]) << 12) |
                         (static_cast<uint32_t>(vals[2]) << 6) |
                         static_cast<uint32_t>(vals[3]);
        bytes.push_back(static_cast<uint8_t>((chunk >> 16) & 0xff));
        if (pad < 2) bytes.push_back(static_cast<uint8_t>((chunk >> 8) & 0xff));
        if (pad < 1) bytes.push_back(static_cast<uint8_t>(chunk & 0xff));
    }
    if (bytes.size() % 8 != 0) throw data_error("base64 payload is not doubles");

    std::vector<double> out;
    out.reserve(bytes.size() / 8);
    for (size_t i = 0; i < bytes.size(); i += 8) {
        uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) bits |= static_cast<uint64_t>(bytes[i + k]) << (8 * k);
        out.push_back(std::bit_cast<double>(bits));
    }
    return out;
}

} // namespace crossforge
