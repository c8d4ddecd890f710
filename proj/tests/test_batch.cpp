#include <doctest.h>

#include "delaudit/controllers.hpp"
#include "delaudit/execution.hpp"

using namespace delaudit;

namespace {

int64_t decode_i64(const Bytes& b) {
  REQUIRE(b.size() == 8);
  uint64_t v = 0;
  for (char c : b) v = (v << 8) | static_cast<unsigned char>(c);
  return static_cast<int64_t>(v);
}

}  // namespace

TEST_CASE("batch controller phases: dictionary, mechanism, constant answer") {
  auto ctrl = batch_controller_spec(noisy_count_mechanism(1.0, 16, 10));
  auto party = ctrl.make();
  RandomTape tape(77, ctrl.layout.total_bits());
  party->init(tape);
  auto topo = make_topology(4);

  auto send = [&](const ChannelId& ch, Message m) {
    auto reply = party->activate(PartyIo{ch, std::move(m)}, tape);
    REQUIRE(reply.has_value());
    return reply->msg.payload;
  };

  CHECK(send(topo.env_ctrl[0], Message::data(wire_ins())) == bot_output());
  CHECK(send(topo.env_ctrl[1], Message::data(wire_ins())) == bot_output());
  Bytes out = send(topo.env_ctrl[0], Message::tick());
  int64_t count = decode_i64(out);
  CHECK(count >= 2 - 16);
  CHECK(count <= 2 + 16);

  // After the tick every query returns the same bytes, deletes included.
  CHECK(send(topo.env_ctrl[2], Message::data(wire_get())) == out);
  CHECK(send(topo.env_ctrl[0], Message::del()) == out);
  CHECK(send(topo.env_ctrl[1], Message::tick()) == out);
  CHECK(send(topo.subj_ctrl, Message::data(wire_ins())) == out);
}

TEST_CASE("empty dataset tick returns pure noise around zero") {
  auto ctrl = batch_controller_spec(noisy_count_mechanism(1.0, 8, 10));
  auto party = ctrl.make();
  RandomTape tape(5, ctrl.layout.total_bits());
  party->init(tape);
  auto topo = make_topology(1);
  auto reply = party->activate(PartyIo{topo.env_ctrl[0], Message::tick()}, tape);
  int64_t out = decode_i64(reply->msg.payload);
  CHECK(out >= -8);
  CHECK(out <= 8);
}

TEST_CASE("mechanism noise draw matches the tape's inverse-CDF value") {
  auto noise = std::make_shared<TruncatedGeometricNoise>(1.0, 16, 10);
  auto mech = noisy_count_mechanism(1.0, 16, 10);
  RandomTape t1(123, 10);
  RandomTape t2(123, 10);
  std::map<Bytes, Bytes> data{{"a", {}}, {"b", {}}, {"c", {}}};
  Bytes out = mech.run(data, t1);
  CHECK(decode_i64(out) == 3 + noise->sample(t2));

  // Inverse view: the preimage of an output pins the noise draw.
  auto pre = mech.preimage(data, enc::i64(5));
  REQUIRE(pre.size() == 1);
  CHECK(int64_t(pre[0][0]) - 16 == 2);
  CHECK(mech.preimage(data, enc::i64(100)).empty());
}

TEST_CASE("noisy sum clips values to {0,1}") {
  auto mech = noisy_sum_mechanism(1.0, 8, 10);
  RandomTape t1(9, 10);
  RandomTape t2(9, 10);
  auto noise = std::make_shared<TruncatedGeometricNoise>(1.0, 8, 10);
  std::map<Bytes, Bytes> data{{"a", Bytes(1, '\x01')}, {"b", Bytes(1, '\x00')},
                              {"c", Bytes(1, '\x07')}};
  CHECK(decode_i64(mech.run(data, t1)) == 2 + noise->sample(t2));
}

TEST_CASE("batch controller is not a deterministic functionality; dict controller is") {
  auto batch = batch_controller_spec(noisy_count_mechanism(1.0, 16, 12));
  auto dict = sorted_dict_controller_spec();
  auto xr = xor_controller_spec(8);
  auto topo = make_topology(2);
  std::vector<QuerySeq> traces = {{{topo.env_ctrl[0], Message::data(wire_ins())},
                                   {topo.env_ctrl[0], Message::tick()},
                                   {topo.env_ctrl[1], Message::data(wire_get())}}};
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK_FALSE(check_deterministic_functionality(batch, traces, seeds));
  CHECK(check_deterministic_functionality(dict, traces, seeds));
  std::vector<QuerySeq> raw_traces = {{{topo.env_ctrl[0], Message::data(Bytes("\x33", 1))}}};
  CHECK(check_deterministic_functionality(xr, raw_traces, seeds));
}

TEST_CASE("query-response checks") {
  auto dict = sorted_dict_controller_spec();
  auto topo = make_topology(2);
  std::vector<QuerySeq> traces = {{{topo.env_ctrl[0], Message::data(wire_ins())},
                                   {topo.env_ctrl[1], Message::data(wire_get())},
                                   {topo.env_ctrl[0], Message::del()}}};
  CHECK(check_query_response(dict, traces));

  // A push-style controller that replies on a third channel is not.
  struct PushController : Party {
    std::optional<PartyIo> activate(const std::optional<PartyIo>& in, RandomTape&) override {
      if (!in) return std::nullopt;
      if (!first_channel) {
        first_channel = in->channel;
        return PartyIo{in->channel, Message::data(bot_output())};
      }
      return PartyIo{*first_channel, Message::data("pushed")};
    }
    std::optional<ChannelId> first_channel;
  };
  ControllerSpec push;
  push.name = "push";
  push.make = [] { return std::make_unique<PushController>(); };
  CHECK_FALSE(check_query_response(push, traces));

  // The xor controller replies nothing: vacuously query-response.
  std::vector<QuerySeq> raw_traces = {{{topo.env_ctrl[0], Message::data(Bytes("\x01", 1))}}};
  CHECK(check_query_response(xor_controller_spec(8), raw_traces));
}
