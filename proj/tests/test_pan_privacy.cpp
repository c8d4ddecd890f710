#include <doctest.h>

#include "delaudit/execution.hpp"
#include "delaudit/pp_controller.hpp"
#include "delaudit/tree_counter.hpp"

using namespace delaudit;

namespace {

PpQuery regular(Op op) { return PpQuery{PpQuery::Code::kRegular, std::move(op)}; }
PpQuery rtick() { return regular(Op{kOpTick, {}, {}}); }
Op feed1(const Bytes& id) { return Op{kOpFeed, id, Bytes(1, '\x01')}; }

}  // namespace

TEST_CASE("second intrusion halts the game identically on both sides") {
  auto mech = TreeCounterMechanism::spec(2, 1.0, 8, 10);
  RandomTape tape(12, mech.layout.total_bits());
  auto in_view = run_pp_game(mech, double_intrusion_adversary(), PpSide::kIn, tape);
  auto out_view = run_pp_game(mech, double_intrusion_adversary(), PpSide::kOut, tape);
  CHECK(in_view.halted_by_assert);
  CHECK(out_view.halted_by_assert);
  CHECK(in_view.view_bytes() == out_view.view_bytes());
}

TEST_CASE("without a challenge the two sides are identical runs") {
  auto mech = TreeCounterMechanism::spec(2, 1.0, 8, 10);
  auto adversary = scripted_pp_adversary(
      {regular(feed1("a")), rtick(), PpQuery{PpQuery::Code::kIntrusion, Op{}}, rtick()});
  RandomTape tape(3, mech.layout.total_bits());
  CHECK(run_pp_game(mech, adversary, PpSide::kIn, tape).view_bytes() ==
        run_pp_game(mech, adversary, PpSide::kOut, tape).view_bytes());
}

TEST_CASE("challenged feed shifts the first release by one") {
  auto mech = TreeCounterMechanism::spec(2, 1.0, 8, 10);
  auto adversary = tracing_pp_adversary(2);
  auto noise = mech.layout.segments[0].noise;
  DrawVector v = {uint32_t(noise->bound()), uint32_t(noise->bound()),
                  uint32_t(noise->bound()), uint32_t(noise->bound())};  // all-zero noise
  RandomTape tape = mech.layout.tape_for(v);
  auto in_view = run_pp_game(mech, adversary, PpSide::kIn, tape);
  auto out_view = run_pp_game(mech, adversary, PpSide::kOut, tape);
  // Transcript entries: challenge, tick (o1), intrusion, tick (o2).
  auto out_of = [](const PpView& view, size_t i) {
    uint64_t raw = 0;
    for (char c : view.transcript[i].second) raw = (raw << 8) | static_cast<unsigned char>(c);
    return static_cast<int64_t>(raw);
  };
  CHECK(out_of(in_view, 1) == 1);
  CHECK(out_of(out_view, 1) == 0);
  CHECK(in_view.transcript[2].second != out_view.transcript[2].second);
}

TEST_CASE("tick challenges violate the assertion") {
  auto mech = TreeCounterMechanism::spec(1, 1.0, 8, 10);
  auto adversary =
      scripted_pp_adversary({PpQuery{PpQuery::Code::kChallenge, Op{kOpTick, {}, {}}}, rtick()});
  RandomTape tape(8, mech.layout.total_bits());
  auto view = run_pp_game(mech, adversary, PpSide::kIn, tape);
  CHECK(view.halted_by_assert);
}

TEST_CASE("game transcripts are deterministic given side and tape") {
  auto mech = TreeCounterMechanism::spec(2, 0.5, 8, 10);
  auto adversary = tracing_pp_adversary(2);
  RandomTape tape(42, mech.layout.total_bits());
  CHECK(run_pp_game(mech, adversary, PpSide::kIn, tape).view_bytes() ==
        run_pp_game(mech, adversary, PpSide::kIn, tape).view_bytes());
}

TEST_CASE("a mechanism that stores the raw stream fails at any reasonable budget") {
  struct RawStore : OnlineMechanism {
    Bytes process(const Op& op, RandomTape&) override {
      log.push_back(op);
      return op.kind == kOpTick ? enc::i64(0) : bot_output();
    }
    Bytes state_bytes() const override {
      std::vector<Bytes> items;
      for (const auto& op : log) items.push_back(op.encode());
      return enc::list(items);
    }
    OpSeq log;
  };
  MechanismSpec raw{"raw-store", [] { return std::make_unique<RawStore>(); },
                    TapeLayout::empty(), 0};
  PpAuditOptions opt;
  auto report = audit_pp(raw, tracing_pp_adversary(1), 5.0, 0.9, opt);
  CHECK_FALSE(report.passed);
  CHECK(report.delta_forward == 1.0);
}

TEST_CASE("a silent stateless mechanism passes at (0,0)") {
  struct Silent : OnlineMechanism {
    Bytes process(const Op&, RandomTape&) override { return bot_output(); }
    Bytes state_bytes() const override { return {}; }
  };
  MechanismSpec silent{"silent", [] { return std::make_unique<Silent>(); },
                       TapeLayout::empty(), 0};
  PpAuditOptions opt;
  CHECK(audit_pp(silent, tracing_pp_adversary(1), 0.0, 0.0, opt).passed);
}

TEST_CASE("tree counter passes the exact pan-privacy audit at its design budget") {
  // Small parameters keep the four-draw enumeration tiny; the reported
  // deficit covers truncation and quantization honestly.
  auto mech = TreeCounterMechanism::spec(2, 1.0, 8, 8);
  PpAuditOptions opt;
  auto report = audit_pp(mech, tracing_pp_adversary(2), 1.0, 0.02 + mech.tail_deficit, opt);
  CHECK(report.method == "exact");
  CHECK(report.passed);
}

TEST_CASE("pp controller: alg-style membership filter") {
  auto mech = TreeCounterMechanism::spec(2, 1.0, 8, 10);
  PpController ctrl(&mech, feed_everything_filter());
  RandomTape tape(6, mech.layout.total_bits());
  ctrl.init(tape);
  auto topo = make_topology(3);
  auto send = [&](const ChannelId& ch, Message m) {
    auto r = ctrl.activate(PartyIo{ch, std::move(m)}, tape);
    return r ? r->msg.payload : Bytes();
  };

  // Same id twice: the mechanism sees one feed.
  send(topo.env_ctrl[0], Message::data(encode_wire_op(kOpFeed, {Bytes(1, '\x01')})));
  send(topo.env_ctrl[0], Message::data(encode_wire_op(kOpFeed, {Bytes(1, '\x01')})));
  CHECK(ctrl.delivered_ops().size() == 1);

  // Delete removes membership only; a deleted user can feed again.
  send(topo.env_ctrl[0], Message::del());
  send(topo.env_ctrl[0], Message::data(encode_wire_op(kOpFeed, {Bytes(1, '\x01')})));
  CHECK(ctrl.delivered_ops().size() == 2);

  // Delete of a never-seen id: nothing happens.
  auto st = ctrl.canonical_state();
  send(topo.env_ctrl[2], Message::del());
  CHECK(ctrl.canonical_state() == st);

  // Ticks pass through and return the mechanism's output.
  Bytes out = send(topo.env_ctrl[1], Message::tick());
  CHECK(out.size() == 8);
  CHECK(ctrl.delivered_ops().size() == 3);  // two feeds and the tick
}

TEST_CASE("pp controller filter invariant: first op per membership interval") {
  auto mech = TreeCounterMechanism::spec(4, 1.0, 8, 10);
  PpController ctrl(&mech, feed_everything_filter());
  RandomTape tape(6, mech.layout.total_bits());
  ctrl.init(tape);
  auto topo = make_topology(4);
  auto data = [&](int i) {
    ctrl.activate(PartyIo{topo.env_ctrl[i], Message::data(encode_wire_op(kOpFeed, {Bytes(1, '\x01')}))},
                  tape);
  };
  data(0);
  data(1);
  data(0);  // filtered: still a member
  ctrl.activate(PartyIo{topo.env_ctrl[0], Message::del()}, tape);
  data(0);  // new membership interval
  int feeds = 0;
  for (const auto& op : ctrl.delivered_ops()) {
    if (op.kind == kOpFeed) ++feeds;
  }
  CHECK(feeds == 3);
}
