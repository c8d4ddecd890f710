#include <doctest.h>

#include "delaudit/deletion_game.hpp"
#include "delaudit/tree_counter.hpp"

using namespace delaudit;

namespace {

struct Bench {
  std::unique_ptr<Party> party;
  RandomTape tape;
  RealTopology topo = make_topology(6);

  explicit Bench(const ControllerSpec& spec, uint64_t seed = 0)
      : party(spec.make()), tape(seed, spec.layout.total_bits()) {
    party->init(tape);
  }

  Bytes send(const ChannelId& ch, Message m) {
    auto r = party->activate(PartyIo{ch, std::move(m)}, tape);
    return r ? r->msg.payload : Bytes("<none>");
  }
};

}  // namespace

TEST_CASE("cloud storage: owner-only downloads, first writer wins") {
  Bench b(cloud_storage_controller_spec());
  auto& alice = b.topo.env_ctrl[0];
  auto& bob = b.topo.env_ctrl[1];

  CHECK(b.send(alice, Message::data(wire_upload("f", "FILE"))) == bot_output());
  CHECK(b.send(alice, Message::data(wire_download("f"))) == enc::pair("v", "FILE"));
  // Another channel cannot see it.
  CHECK(b.send(bob, Message::data(wire_download("f"))) == bot_output());
  // Duplicate upload: the first file is retained.
  CHECK(b.send(alice, Message::data(wire_upload("f", "OTHER"))) == bot_output());
  CHECK(b.send(alice, Message::data(wire_download("f"))) == enc::pair("v", "FILE"));
  // Missing names are bot.
  CHECK(b.send(alice, Message::data(wire_download("nope"))) == bot_output());
  // Delete removes the whole per-user dictionary.
  b.send(alice, Message::del());
  CHECK(b.send(alice, Message::data(wire_download("f"))) == bot_output());
}

TEST_CASE("bulletin board: ordered posts, per-user deletion, empty reads") {
  Bench b(bulletin_board_controller_spec());
  auto& a = b.topo.env_ctrl[0];
  auto& c = b.topo.env_ctrl[1];

  CHECK(b.send(a, Message::data(wire_read())) == enc::list({}));
  b.send(a, Message::data(wire_post("m1")));
  b.send(c, Message::data(wire_post("m2")));
  Bytes both = b.send(c, Message::data(wire_read()));
  CHECK(both == enc::list({enc::pair(a.token, "m1"), enc::pair(c.token, "m2")}));
  b.send(a, Message::del());
  CHECK(b.send(a, Message::data(wire_read())) == enc::list({enc::pair(c.token, "m2")}));
}

TEST_CASE("ignore-delete controller honors deletes unless blacklisted") {
  auto spec = ignore_delete_controller_spec();
  auto& topo_ref = *new RealTopology(make_topology(3));  // shared across benches below
  (void)topo_ref;

  Bench plain(spec);
  auto& y = plain.topo.env_ctrl[0];
  plain.send(y, Message::data(wire_ins()));
  plain.send(y, Message::del());
  CHECK(plain.party->canonical_state() ==
        enc::pair(enc::sorted_map({}), enc::sorted_map({})));

  Bench blocked(spec);
  auto& y2 = blocked.topo.env_ctrl[0];
  auto& e2 = blocked.topo.env_ctrl[1];
  blocked.send(y2, Message::data(wire_ins()));
  blocked.send(e2, Message::data(wire_block(y2.token)));
  blocked.send(y2, Message::del());  // ignored: entry persists
  std::map<Bytes, Bytes> expect_dict{{y2.token, top_value()}};
  std::map<Bytes, Bytes> expect_block{{y2.token, {}}};
  CHECK(blocked.party->canonical_state() ==
        enc::pair(enc::sorted_map(expect_dict), enc::sorted_map(expect_block)));

  // Self-blacklisting is ignored: the delete still lands.
  Bench selfish(spec);
  auto& y3 = selfish.topo.env_ctrl[0];
  selfish.send(y3, Message::data(wire_ins()));
  selfish.send(y3, Message::data(wire_block(y3.token)));
  selfish.send(y3, Message::del());
  CHECK(selfish.party->canonical_state() ==
        enc::pair(enc::sorted_map({}), enc::sorted_map({})));
}

TEST_CASE("timing controller: trap replies in range, deferred removal semantics") {
  const int T = 8;
  auto spec = timing_controller_spec(T, 4);
  for (uint64_t seed : {1u, 2u, 3u, 9u}) {
    Bench b(spec, seed);
    Bytes reply = b.send(b.topo.env_ctrl[0], Message::data(wire_ins()));
    REQUIRE(reply.size() == 8);
    uint64_t t = 0;
    for (char c : reply) t = (t << 8) | static_cast<unsigned char>(c);
    CHECK(t >= 1);
    CHECK(t <= T);
  }

  // Force trap == 1 via an all-zeros tape: |D| == 1 at the delete, so the
  // removal is deferred to the next activation.
  Bench b(spec);
  std::vector<bool> zeros(spec.layout.total_bits(), false);
  b.tape = RandomTape::from_bits(zeros);
  auto& ch = b.topo.env_ctrl[0];
  Bytes r = b.send(ch, Message::data(wire_ins()));
  CHECK(r == enc::u64(1));
  b.send(ch, Message::del());
  std::map<Bytes, Bytes> still{{ch.token, enc::u64(1)}};
  CHECK(b.party->canonical_state() == enc::pair(enc::sorted_map(still), enc::bytes(ch.token)));
  // Next activation resolves the pending removal first.
  b.send(b.topo.env_ctrl[1], Message::data(wire_ins()));
  auto state = b.party->canonical_state();
  CHECK(state.find(ch.token) == std::string::npos);

  // Immediate removal when |D| != trap.
  Bench c(spec, 4);
  Bytes r0 = c.send(c.topo.env_ctrl[0], Message::data(wire_ins()));
  Bytes r1 = c.send(c.topo.env_ctrl[1], Message::data(wire_ins()));
  uint64_t t0 = 0;
  for (char ch2 : r0) t0 = (t0 << 8) | static_cast<unsigned char>(ch2);
  if (t0 != 2) {
    c.send(c.topo.env_ctrl[0], Message::del());
    CHECK(c.party->canonical_state().find(c.topo.env_ctrl[0].token) == std::string::npos);
  }
}

TEST_CASE("parallel composition pairs outputs and keeps paired state") {
  auto composed = parallel_compose_spec(xor_controller_spec(8), sorted_dict_controller_spec());
  Bench b(composed, 5);
  auto& ch = b.topo.env_ctrl[0];
  Bytes paired = b.send(ch, Message::data(wire_ins()));
  // The xor half stays silent on wire ops (wrong payload size), the dict
  // half replies bot: (none, m(bot)).
  Bytes expect =
      enc::pair(enc::pair("none", ""), enc::pair("m", Message::data(bot_output()).encode()));
  CHECK(paired == expect);

  // The composed state carries both halves.
  Bytes state = b.party->canonical_state();
  CHECK(state.find(enc::u64(8)) != std::string::npos);  // xor half header

  // Two inert halves compose to an inert pair.
  auto noop = parallel_compose_spec(xor_controller_spec(4), xor_controller_spec(4));
  Bench n(noop, 9);
  Bytes pair2 = n.send(ch, Message::data(Bytes("\x10", 1)));
  CHECK(pair2 == enc::pair(enc::pair("none", ""), enc::pair("none", "")));
}

TEST_CASE("composed halves read disjoint tape regions") {
  auto composed = parallel_compose_spec(xor_controller_spec(8), xor_controller_spec(8));
  auto party = composed.make();
  RandomTape tape(3, composed.layout.total_bits());
  party->init(tape);
  // Each half consumed its init bits from its own region.
  CHECK(party->extra_bits_consumed() == 16);

  // A half overrunning its region trips the split guard.
  struct Greedy : Party {
    void init(RandomTape& t) override { t.next_bits(9); }
    std::optional<PartyIo> activate(const std::optional<PartyIo>&, RandomTape&) override {
      return std::nullopt;
    }
  };
  ControllerSpec greedy;
  greedy.name = "greedy";
  greedy.make = [] { return std::make_unique<Greedy>(); };
  greedy.layout = TapeLayout::raw(8);
  auto bad = parallel_compose_spec(greedy, sorted_dict_controller_spec());
  auto bad_party = bad.make();
  RandomTape bad_tape(0, bad.layout.total_bits());
  CHECK_THROWS_AS(bad_party->init(bad_tape), TapeSplitError);
}

TEST_CASE("composed directory is transcript-identical to the monolith") {
  const int T = 2, B = 8, W = 8;
  auto mono = directory_stats_monolithic_spec(T, 1.0, B, W);
  auto comp = directory_stats_composed_spec(T, 1.0, B, W);
  auto topo = make_topology(4);

  Rng rng(77);
  for (int trace = 0; trace < 100; ++trace) {
    auto m = mono.make();
    auto c = comp.make();
    RandomTape mt(trace, mono.layout.total_bits());
    RandomTape ct(trace, comp.layout.total_bits());
    m->init(mt);
    c->init(ct);
    for (int step = 0; step < 12; ++step) {
      const ChannelId& ch = topo.env_ctrl[rng.below(4)];
      Message msg;
      switch (rng.below(5)) {
        case 0:
          msg = Message::data(wire_dir_set(Bytes(1, char('0' + rng.below(10)))));
          break;
        case 1:
          msg = Message::data(wire_dir_get(topo.env_ctrl[rng.below(4)].token));
          break;
        case 2:
          msg = Message::data(wire_get_count());
          break;
        case 3:
          msg = Message::del();
          break;
        default:
          msg = Message::data(wire_dir_get("missing"));
          break;
      }
      auto rm = m->activate(PartyIo{ch, msg}, mt);
      auto rc = c->activate(PartyIo{ch, msg}, ct);
      REQUIRE(rm.has_value());
      REQUIRE(rc.has_value());
      CHECK(rm->channel == rc->channel);
      CHECK(rm->msg == rc->msg);
    }
  }
}

TEST_CASE("directory semantics: counts are fed by first lookups only") {
  const int T = 2, B = 8, W = 8;
  auto spec = directory_stats_monolithic_spec(T, 1.0, B, W);
  auto noise = TreeCounterMechanism::spec(T, 1.0, B, W).layout.segments[0].noise;

  // Zero-noise tape makes counts exact.
  std::vector<bool> bits;
  for (const auto& seg : spec.layout.segments) {
    uint64_t u = seg.noise->fiber_begin(0);
    for (int i = seg.noise->draw_width() - 1; i >= 0; --i) bits.push_back((u >> i) & 1);
  }
  Bench b(spec);
  b.tape = RandomTape::from_bits(bits);
  b.party = spec.make();
  b.party->init(b.tape);

  auto& a = b.topo.env_ctrl[0];
  auto& c = b.topo.env_ctrl[1];
  CHECK(b.send(a, Message::data(wire_dir_set("555"))) == bot_output());
  CHECK(b.send(c, Message::data(wire_dir_get(a.token))) == enc::pair("v", "555"));
  b.send(c, Message::data(wire_dir_get(a.token)));  // second lookup: not counted
  // The deleted user's lookup contribution persists in the count.
  b.send(c, Message::del());
  Bytes count = b.send(a, Message::data(wire_get_count()));
  CHECK(count == enc::i64(1));
}

TEST_CASE("theorem-style composition: the composed directory passes the paired audit") {
  const int T = 2, B = 8, W = 8;
  auto ctrl = directory_stats_composed_spec(T, 1.0, B, W);
  const auto& fx = fixture_by_name("directory_lookup");
  DeletionAuditOptions opt;
  opt.enumeration_cap = 1u << 21;
  auto sim = paired_simulator(&ctrl, opt.max_steps, opt.attempt_cap);
  auto report = audit_deletion_as_control(ctrl, fx.env, fx.subj, *sim, 1.0,
                                          0.001 + ctrl.tail_deficit, opt);
  CHECK(report.passed);
}
