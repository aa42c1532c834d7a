#include "sla/document_id.hpp"

#include <cctype>
#include <cstdio>
#include <random>

namespace sla {

DocumentId agreement_level_owner() { return DocumentId::local("@agreement"); }

namespace {

bool is_lower_hex(std::string_view s) {
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return !s.empty();
}

bool is_uuid(std::string_view s) {
  if (s.size() != 36) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (s[i] != '-') return false;
    } else if (!std::isxdigit(static_cast<unsigned char>(s[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool is_valid_document_id(const DocumentId& id) {
  if (id.value.empty()) return false;
  if (id.scope == IdScope::local) return true;
  return is_uuid(id.value) || (is_lower_hex(id.value) && (id.value.size() == 64 || id.value.size() == 40));
}

std::string to_string(const DocumentId& id) { return id.value; }

std::string to_string(IdScope scope) { return scope == IdScope::local ? "local" : "global"; }

DocumentId fresh_document_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_int_distribution<unsigned> byte(0, 255);
  unsigned char b[16];
  for (auto& x : b) x = static_cast<unsigned char>(byte(rng));
  b[6] = static_cast<unsigned char>((b[6] & 0x0f) | 0x40);
  b[8] = static_cast<unsigned char>((b[8] & 0x3f) | 0x80);
  char buf[37];
  std::snprintf(buf, sizeof buf, "%02x%02x%02x%02x-%02x%02x-%02x%02x-%02x%02x-%02x%02x%02x%02x%02x%02x", b[0], b[1],
                b[2], b[3], b[4], b[5], b[6], b[7], b[8], b[9], b[10], b[11], b[12], b[13], b[14], b[15]);
  return DocumentId::global(buf);
}

}  // namespace sla
