#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace sla::detail {

bool is_valid_utf8(std::string_view s);
// Number of scalar values; input assumed valid UTF-8.
std::size_t scalar_count(std::string_view s);
// Byte offset of the scalar at index `n` (or s.size() when n == count).
std::size_t byte_offset(std::string_view s, std::size_t n);
std::string substr_scalars(std::string_view s, std::size_t begin, std::size_t end);
std::string to_nfc(std::string_view s);

}  // namespace sla::detail
