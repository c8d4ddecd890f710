#include "delaudit/bytes.hpp"

#include <stdexcept>

namespace delaudit {

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(const Bytes& b) {
  std::string out;
  out.reserve(b.size() * 2);
  for (unsigned char c : b) {
    out.push_back(kHexDigits[c >> 4]);
    out.push_back(kHexDigits[c & 0xf]);
  }
  return out;
}

static int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("bad hex digit");
}

Bytes from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<char>(hex_val(hex[i]) * 16 + hex_val(hex[i + 1])));
  }
  return out;
}

namespace enc {

void put_u64(Bytes& out, uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i64(Bytes& out, int64_t v) { put_u64(out, static_cast<uint64_t>(v)); }

void put_bytes(Bytes& out, const Bytes& b) {
  put_u64(out, b.size());
  out += b;
}

Bytes u64(uint64_t v) {
  Bytes out;
  put_u64(out, v);
  return out;
}

Bytes i64(int64_t v) {
  Bytes out;
  put_i64(out, v);
  return out;
}

Bytes bytes(const Bytes& b) {
  Bytes out;
  put_bytes(out, b);
  return out;
}

Bytes pair(const Bytes& a, const Bytes& b) {
  Bytes out;
  put_bytes(out, a);
  put_bytes(out, b);
  return out;
}

Bytes list(const std::vector<Bytes>& items) {
  Bytes out;
  put_u64(out, items.size());
  for (const auto& it : items) put_bytes(out, it);
  return out;
}

Bytes sorted_map(const std::map<Bytes, Bytes>& m) {
  Bytes out;
  put_u64(out, m.size());
  for (const auto& [k, v] : m) {
    put_bytes(out, k);
    put_bytes(out, v);
  }
  return out;
}

}  // namespace enc
}  // namespace delaudit
