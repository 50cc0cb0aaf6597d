#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace warenav {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string base64_encode(std::span<const std::uint8_t> data);

}  // namespace warenav
