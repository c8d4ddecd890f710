#pragma once

#include <optional>
#include <string>
#include <vector>

#include "delaudit/bytes.hpp"

namespace delaudit {

// Payload format for Data messages carrying structured operations:
// [u8 kind length][kind][u8 arg count]([u32 length][bytes])*.
struct WireOp {
  std::string kind;
  std::vector<Bytes> args;

  Bytes arg(size_t i) const { return i < args.size() ? args[i] : Bytes(); }
};

Bytes encode_wire_op(const std::string& kind, const std::vector<Bytes>& args = {});
std::optional<WireOp> decode_wire_op(const Bytes& payload);

}  // namespace delaudit
