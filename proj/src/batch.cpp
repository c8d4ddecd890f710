#include "delaudit/batch.hpp"

#include "delaudit/wire.hpp"

namespace delaudit {

namespace {

BatchMechanism additive_noise_mechanism(std::string name, double eps, int bound,
                                        int draw_width,
                                        std::function<int64_t(const std::map<Bytes, Bytes>&)>
                                            statistic) {
  auto noise = std::make_shared<TruncatedGeometricNoise>(eps, bound, draw_width);
  BatchMechanism m;
  m.name = std::move(name);
  m.tail_deficit = noise->tail_deficit();
  m.layout.segments.push_back(TapeSegment::draw(noise));
  m.run = [noise, statistic](const std::map<Bytes, Bytes>& data, RandomTape& tape) {
    return enc::i64(statistic(data) + noise->sample(tape));
  };
  m.preimage = [noise, statistic](const std::map<Bytes, Bytes>& data, const Bytes& target) {
    std::vector<DrawVector> out;
    if (target.size() != 8) return out;
    int64_t value = 0;
    for (char c : target) value = (value << 8) | static_cast<unsigned char>(c);
    int64_t z = value - statistic(data);
    if (z < -noise->bound() || z > noise->bound()) return out;
    out.push_back(DrawVector{static_cast<uint32_t>(z + noise->bound())});
    return out;
  };
  return m;
}

}  // namespace

BatchMechanism noisy_count_mechanism(double eps, int bound, int draw_width) {
  return additive_noise_mechanism(
      "noisy-count", eps, bound, draw_width,
      [](const std::map<Bytes, Bytes>& data) { return static_cast<int64_t>(data.size()); });
}

BatchMechanism noisy_sum_mechanism(double eps, int bound, int draw_width) {
  return additive_noise_mechanism("noisy-sum", eps, bound, draw_width,
                                  [](const std::map<Bytes, Bytes>& data) {
                                    int64_t s = 0;
                                    for (const auto& [k, v] : data) {
                                      if (!v.empty() && v[0] != '\x00') s += 1;
                                    }
                                    return s;
                                  });
}

std::optional<PartyIo> BatchController::activate(const std::optional<PartyIo>& incoming,
                                                 RandomTape& tape) {
  if (halted_ || !incoming) return std::nullopt;
  const auto& [channel, msg] = *incoming;
  if (msg.kind == MsgKind::kFail) {
    halted_ = true;
    return std::nullopt;
  }

  if (out_.has_value()) {
    // After the tick the answer never changes, deletion requests included.
    return PartyIo{channel, Message::data(*out_)};
  }

  if (msg.kind == MsgKind::kTick) {
    out_ = mech_->run(dict_.entries(), tape);
    dict_.clear();
    return PartyIo{channel, Message::data(*out_)};
  }

  if (msg.kind == MsgKind::kDelete) {
    dict_.apply(Op{kOpDelete, channel.token, {}});
    return PartyIo{channel, Message::data(bot_output())};
  }

  if (msg.kind == MsgKind::kData) {
    if (auto wire = decode_wire_op(msg.payload)) {
      dict_.apply(Op{wire->kind, channel.token, wire->arg(0)});
    }
    return PartyIo{channel, Message::data(bot_output())};
  }
  return std::nullopt;
}

Bytes BatchController::canonical_state() const {
  Bytes out;
  enc::put_bytes(out, out_.value_or(Bytes()));
  out += dict_.canonical_bytes();
  return out;
}

}  // namespace delaudit
