#include "delaudit/message.hpp"

namespace delaudit {

Bytes Message::encode() const {
  Bytes out;
  out.push_back(static_cast<char>(kind));
  enc::put_bytes(out, payload);
  return out;
}

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::kData:
      return "data";
    case MsgKind::kDelete:
      return "delete";
    case MsgKind::kTick:
      return "tick";
    case MsgKind::kFail:
      return "fail";
    case MsgKind::kFinish:
      return "finish";
  }
  return "?";
}

}  // namespace delaudit
