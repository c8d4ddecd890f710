#include "delaudit/pp_controller.hpp"

namespace delaudit {

PpController::PpController(const MechanismSpec* mech, OpFilter filter)
    : spec_(mech), filter_(std::move(filter)), mech_(mech->make()) {}

void PpController::init(RandomTape& tape) {
  // Tape partition: the mechanism owns the leading region, the membership
  // dictionary the (empty) remainder.
  mech_tape_ = tape.region(0, spec_->layout.total_bits());
  mech_->init(mech_tape_);
}

std::optional<PartyIo> PpController::activate(const std::optional<PartyIo>& incoming,
                                              RandomTape&) {
  if (halted_ || !incoming) return std::nullopt;
  const auto& [channel, msg] = *incoming;
  if (msg.kind == MsgKind::kFail) {
    halted_ = true;
    return std::nullopt;
  }
  if (msg.kind == MsgKind::kTick) {
    Op tick{kOpTick, {}, {}};
    delivered_.push_back(tick);
    return PartyIo{channel, Message::data(mech_->process(tick, mech_tape_))};
  }
  if (msg.kind == MsgKind::kDelete) {
    members_.apply(Op{kOpDelete, channel.token, {}});  // the mechanism is unaffected
    return PartyIo{channel, Message::data(bot_output())};
  }
  if (msg.kind != MsgKind::kData) return std::nullopt;

  auto wire = decode_wire_op(msg.payload);
  if (!wire) return PartyIo{channel, Message::data(bot_output())};
  auto op = filter_(*wire, channel);
  if (!op) return PartyIo{channel, Message::data(bot_output())};
  if (op->kind == kOpTick) {
    // Data ops the filter maps to ticks (a directory's count query) bypass
    // the membership check, like tick messages themselves.
    delivered_.push_back(*op);
    return PartyIo{channel, Message::data(mech_->process(*op, mech_tape_))};
  }
  if (members_.contains(channel.token)) {
    return PartyIo{channel, Message::data(bot_output())};
  }
  members_.apply(Op{kOpInsert, channel.token, {}});
  delivered_.push_back(*op);
  mech_->process(*op, mech_tape_);
  return PartyIo{channel, Message::data(bot_output())};
}

Bytes PpController::canonical_state() const {
  Bytes out;
  enc::put_bytes(out, mech_->state_bytes());
  out += members_.canonical_bytes();
  return out;
}

PpController::OpFilter feed_everything_filter() {
  return [](const WireOp& wire, const ChannelId& ch) -> std::optional<Op> {
    return Op{wire.kind, ch.token, wire.args.empty() ? Bytes() : wire.args[0]};
  };
}

}  // namespace delaudit
