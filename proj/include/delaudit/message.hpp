#pragma once

#include <string>

#include "delaudit/bytes.hpp"

namespace delaudit {

// Opaque channel token. A controller only ever sees tokens; it cannot tell
// which party sits on the far end.
struct ChannelId {
  std::string token;

  bool operator==(const ChannelId& o) const { return token == o.token; }
  bool operator!=(const ChannelId& o) const { return token != o.token; }
  bool operator<(const ChannelId& o) const { return token < o.token; }
};

enum class MsgKind {
  kData,
  kDelete,
  kTick,
  kFail,
  // Harness-level end-of-interaction signal used by the confidentiality
  // experiment's environment; never delivered to a controller.
  kFinish,
};

struct Message {
  MsgKind kind = MsgKind::kData;
  Bytes payload;  // meaningful only for kData

  static Message data(Bytes p) { return Message{MsgKind::kData, std::move(p)}; }
  static Message del() { return Message{MsgKind::kDelete, {}}; }
  static Message tick() { return Message{MsgKind::kTick, {}}; }
  static Message fail() { return Message{MsgKind::kFail, {}}; }
  static Message finish() { return Message{MsgKind::kFinish, {}}; }

  bool operator==(const Message& o) const { return kind == o.kind && payload == o.payload; }

  Bytes encode() const;
};

const char* msg_kind_name(MsgKind k);

}  // namespace delaudit
