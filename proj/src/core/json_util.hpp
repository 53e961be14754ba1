#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace crossforge {

// Base64 (RFC 4648, with padding) of doubles serialized as little-endian
// 64-bit IEEE values.
std::string base64_encode_f64(std::span<const double> values);
std::vector<double> base64_decode_f64(const std::string& text);

} // namespace crossforge
