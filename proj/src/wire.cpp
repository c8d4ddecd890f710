#include "delaudit/wire.hpp"

namespace delaudit {

Bytes encode_wire_op(const std::string& kind, const std::vector<Bytes>& args) {
  Bytes out;
  out.push_back(static_cast<char>(kind.size() & 0xff));
  out += kind;
  out.push_back(static_cast<char>(args.size() & 0xff));
  for (const auto& a : args) {
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<char>((a.size() >> (8 * i)) & 0xff));
    out += a;
  }
  return out;
}

std::optional<WireOp> decode_wire_op(const Bytes& payload) {
  size_t pos = 0;
  auto need = [&](size_t n) { return pos + n <= payload.size(); };
  if (!need(1)) return std::nullopt;
  size_t kind_len = static_cast<unsigned char>(payload[pos++]);
  if (!need(kind_len)) return std::nullopt;
  WireOp op;
  op.kind = payload.substr(pos, kind_len);
  pos += kind_len;
  if (!need(1)) return std::nullopt;
  size_t argc = static_cast<unsigned char>(payload[pos++]);
  for (size_t i = 0; i < argc; ++i) {
    if (!need(4)) return std::nullopt;
    uint32_t len = 0;
    for (int b = 0; b < 4; ++b) len = (len << 8) | static_cast<unsigned char>(payload[pos++]);
    if (!need(len)) return std::nullopt;
    op.args.push_back(payload.substr(pos, len));
    pos += len;
  }
  if (pos != payload.size()) return std::nullopt;
  return op;
}

}  // namespace delaudit
