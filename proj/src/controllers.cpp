#include "delaudit/controllers.hpp"

#include <set>

#include "delaudit/errors.hpp"
#include "delaudit/tree_counter.hpp"

namespace delaudit {

Bytes wire_ins() { return encode_wire_op(kOpInsert); }
Bytes wire_set(const Bytes& value) { return encode_wire_op(kOpSet, {value}); }
Bytes wire_get() { return encode_wire_op(kOpGet); }
Bytes wire_block(const Bytes& token) { return encode_wire_op("block", {token}); }
Bytes wire_post(const Bytes& msg) { return encode_wire_op("post", {msg}); }
Bytes wire_read() { return encode_wire_op("read"); }
Bytes wire_upload(const Bytes& name, const Bytes& file) {
  return encode_wire_op("upload", {name, file});
}
Bytes wire_download(const Bytes& name) { return encode_wire_op("download", {name}); }
Bytes wire_dir_set(const Bytes& listing) { return encode_wire_op(kOpSet, {listing}); }
Bytes wire_dir_get(const Bytes& key) { return encode_wire_op(kOpGet, {key}); }
Bytes wire_get_count() { return encode_wire_op("getCount"); }

namespace {

// Shared shape of the dictionary-style controllers: reply on the incoming
// channel, halt on fail.
class QueryResponseController : public Party {
 public:
  std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                  RandomTape& tape) override {
    if (halted_ || !incoming) return std::nullopt;
    if (incoming->msg.kind == MsgKind::kFail) {
      halted_ = true;
      return std::nullopt;
    }
    return PartyIo{incoming->channel,
                   Message::data(respond(incoming->channel, incoming->msg, tape))};
  }

 protected:
  virtual Bytes respond(const ChannelId& channel, const Message& msg, RandomTape& tape) = 0;

 private:
  bool halted_ = false;
};

class XorController : public Party {
 public:
  explicit XorController(int k) : k_(k) {}

  void init(RandomTape& tape) override {
    state_.assign(k_, false);
    for (int i = 0; i < k_; ++i) state_[i] = tape.next_bit();
  }

  std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                  RandomTape&) override {
    if (!incoming || incoming->msg.kind != MsgKind::kData) return std::nullopt;
    const Bytes& p = incoming->msg.payload;
    if (p.size() != static_cast<size_t>((k_ + 7) / 8)) return std::nullopt;
    // Trailing bits beyond k must be clear, otherwise the payload is not a
    // k-bit string and is dropped.
    for (size_t b = k_; b < p.size() * 8; ++b) {
      if ((p[b / 8] >> (7 - b % 8)) & 1) return std::nullopt;
    }
    for (int b = 0; b < k_; ++b) {
      bool bit = (p[b / 8] >> (7 - b % 8)) & 1;
      state_[b] = state_[b] != bit;
    }
    return std::nullopt;
  }

  Bytes canonical_state() const override {
    Bytes packed((k_ + 7) / 8, '\x00');
    for (int b = 0; b < k_; ++b) {
      if (state_[b]) packed[b / 8] |= static_cast<char>(1 << (7 - b % 8));
    }
    return enc::pair(enc::u64(k_), packed);
  }

 private:
  int k_;
  std::vector<bool> state_;
};

class SortedDictController : public QueryResponseController {
 public:
  Bytes canonical_state() const override { return dict_.canonical_bytes(); }

 protected:
  Bytes respond(const ChannelId& ch, const Message& msg, RandomTape&) override {
    if (msg.kind == MsgKind::kDelete) return dict_.apply(Op{kOpDelete, ch.token, {}});
    if (msg.kind != MsgKind::kData) return bot_output();
    auto wire = decode_wire_op(msg.payload);
    if (!wire) return bot_output();
    return dict_.apply(Op{wire->kind, ch.token, wire->arg(0)});
  }

 private:
  SortedDict dict_;
};

class CloudStorageController : public QueryResponseController {
 public:
  Bytes canonical_state() const override {
    std::map<Bytes, Bytes> outer;
    for (const auto& [user, files] : dicts_) outer[user] = enc::sorted_map(files);
    return enc::sorted_map(outer);
  }

 protected:
  Bytes respond(const ChannelId& ch, const Message& msg, RandomTape&) override {
    if (msg.kind == MsgKind::kDelete) {
      dicts_.erase(ch.token);
      return bot_output();
    }
    if (msg.kind != MsgKind::kData) return bot_output();
    auto wire = decode_wire_op(msg.payload);
    if (!wire) return bot_output();
    if (wire->kind == "upload") {
      auto& files = dicts_[ch.token];
      files.emplace(wire->arg(0), wire->arg(1));  // existing names are kept
      return bot_output();
    }
    if (wire->kind == "download") {
      auto user = dicts_.find(ch.token);
      if (user == dicts_.end()) return bot_output();
      auto file = user->second.find(wire->arg(0));
      if (file == user->second.end()) return bot_output();
      return enc::pair("v", file->second);
    }
    return bot_output();
  }

 private:
  std::map<Bytes, std::map<Bytes, Bytes>> dicts_;
};

class BulletinBoardController : public QueryResponseController {
 public:
  Bytes canonical_state() const override {
    std::vector<Bytes> items;
    for (const auto& [id, m] : posts_) items.push_back(enc::pair(id, m));
    return enc::list(items);
  }

 protected:
  Bytes respond(const ChannelId& ch, const Message& msg, RandomTape&) override {
    if (msg.kind == MsgKind::kDelete) {
      // Stable compaction: everyone else's posts keep their order.
      std::vector<std::pair<Bytes, Bytes>> kept;
      for (auto& p : posts_) {
        if (p.first != ch.token) kept.push_back(std::move(p));
      }
      posts_ = std::move(kept);
      return bot_output();
    }
    if (msg.kind != MsgKind::kData) return bot_output();
    auto wire = decode_wire_op(msg.payload);
    if (!wire) return bot_output();
    if (wire->kind == "post") {
      posts_.emplace_back(ch.token, wire->arg(0));
      return bot_output();
    }
    if (wire->kind == "read") return canonical_state();
    return bot_output();
  }

 private:
  std::vector<std::pair<Bytes, Bytes>> posts_;
};

class IgnoreDeleteController : public QueryResponseController {
 public:
  Bytes canonical_state() const override {
    std::map<Bytes, Bytes> blocked;
    for (const auto& t : blacklist_) blocked[t] = {};
    return enc::pair(dict_.canonical_bytes(), enc::sorted_map(blocked));
  }

 protected:
  Bytes respond(const ChannelId& ch, const Message& msg, RandomTape&) override {
    if (msg.kind == MsgKind::kDelete) {
      if (!blacklist_.count(ch.token)) dict_.apply(Op{kOpDelete, ch.token, {}});
      return bot_output();
    }
    if (msg.kind != MsgKind::kData) return bot_output();
    auto wire = decode_wire_op(msg.payload);
    if (!wire) return bot_output();
    if (wire->kind == "block") {
      // A self-blacklist attempt is ignored; deletes stay honored.
      if (wire->arg(0) != ch.token) blacklist_.insert(wire->arg(0));
      return bot_output();
    }
    if (wire->kind == kOpInsert || wire->kind == kOpSet) {
      dict_.apply(Op{wire->kind, ch.token, wire->arg(0)});
    }
    return bot_output();  // write-only
  }

 private:
  SortedDict dict_;
  std::set<Bytes> blacklist_;
};

class TimingController : public QueryResponseController {
 public:
  TimingController(int horizon, int bits) : horizon_(horizon), bits_(bits) {}

  Bytes canonical_state() const override {
    return enc::pair(dict_.canonical_bytes(), enc::bytes(pending_.value_or(Bytes())));
  }

 protected:
  Bytes respond(const ChannelId& ch, const Message& msg, RandomTape& tape) override {
    if (pending_) {
      // A deferred removal resolves at the next activation, whichever it is.
      dict_.apply(Op{kOpDelete, *pending_, {}});
      pending_.reset();
    }
    if (msg.kind == MsgKind::kDelete) {
      if (dict_.contains(ch.token)) {
        if (dict_.size() == trap_of(ch.token)) {
          pending_ = ch.token;
        } else {
          dict_.apply(Op{kOpDelete, ch.token, {}});
        }
      }
      return bot_output();
    }
    if (msg.kind != MsgKind::kData) return bot_output();
    if (dict_.contains(ch.token)) return bot_output();  // write-once per channel
    // First contact: sample the trap time (exact uniform: horizon is a
    // power of two) and reply with it.
    uint64_t t = tape.next_bits(bits_) + 1;
    dict_.apply(Op{kOpSet, ch.token, enc::u64(t)});
    return enc::u64(t);
  }

 private:
  uint64_t trap_of(const Bytes& token) const {
    auto it = dict_.entries().find(token);
    uint64_t t = 0;
    for (char c : it->second) t = (t << 8) | static_cast<unsigned char>(c);
    return t;
  }

  int horizon_;
  int bits_;
  SortedDict dict_;
  std::optional<Bytes> pending_;
};

// Runs both halves on every query over disjoint tape regions; outputs and
// states are paired.
class ParallelController : public Party {
 public:
  ParallelController(std::unique_ptr<Party> c0, std::unique_ptr<Party> c1, uint64_t bits0,
                     uint64_t bits1)
      : c0_(std::move(c0)), c1_(std::move(c1)), bits0_(bits0), bits1_(bits1) {}

  void init(RandomTape& tape) override {
    t0_ = tape.region(0, bits0_);
    t1_ = tape.region(bits0_, bits1_);
    c0_->init(t0_);
    c1_->init(t1_);
  }

  std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                  RandomTape&) override {
    if (!incoming) return std::nullopt;
    if (incoming->msg.kind == MsgKind::kFail) return std::nullopt;
    auto r0 = c0_->activate(incoming, t0_);
    auto r1 = c1_->activate(incoming, t1_);
    auto half = [](const std::optional<PartyIo>& r) {
      return r ? enc::pair("m", r->msg.encode()) : enc::pair("none", "");
    };
    return PartyIo{incoming->channel, Message::data(enc::pair(half(r0), half(r1)))};
  }

  Bytes canonical_state() const override {
    return enc::pair(c0_->canonical_state(), c1_->canonical_state());
  }

  uint64_t extra_bits_consumed() const override {
    return t0_.cursor() + t1_.cursor() + c0_->extra_bits_consumed() +
           c1_->extra_bits_consumed();
  }

 private:
  std::unique_ptr<Party> c0_, c1_;
  uint64_t bits0_, bits1_;
  RandomTape t0_, t1_;
};

// The directory's dictionary half: set/delete keyed by the caller's channel,
// lookups keyed by the queried listing.
class DirectoryDictController : public QueryResponseController {
 public:
  Bytes canonical_state() const override { return dict_.canonical_bytes(); }

 protected:
  Bytes respond(const ChannelId& ch, const Message& msg, RandomTape&) override {
    if (msg.kind == MsgKind::kDelete) return dict_.apply(Op{kOpDelete, ch.token, {}});
    if (msg.kind != MsgKind::kData) return bot_output();
    auto wire = decode_wire_op(msg.payload);
    if (!wire) return bot_output();
    if (wire->kind == kOpSet) return dict_.apply(Op{kOpSet, ch.token, wire->arg(0)});
    if (wire->kind == kOpGet) return dict_.apply(Op{kOpGet, wire->arg(0), {}});
    return bot_output();
  }

 private:
  SortedDict dict_;
};

PpController::OpFilter directory_counter_filter() {
  return [](const WireOp& wire, const ChannelId& ch) -> std::optional<Op> {
    if (wire.kind == kOpGet) return Op{kOpFeed, ch.token, Bytes(1, '\x01')};
    if (wire.kind == "getCount") return Op{kOpTick, {}, {}};
    return std::nullopt;
  };
}

// Collapses the composed directory's paired outputs onto the single-valued
// directory protocol.
class DirectoryAdapter : public Party {
 public:
  explicit DirectoryAdapter(std::unique_ptr<ParallelController> inner)
      : inner_(std::move(inner)) {}

  void init(RandomTape& tape) override { inner_->init(tape); }

  std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                  RandomTape& tape) override {
    if (!incoming) return std::nullopt;
    auto paired = inner_->activate(incoming, tape);
    if (!paired) return std::nullopt;
    std::string pick = "none";
    if (incoming->msg.kind == MsgKind::kData) {
      if (auto wire = decode_wire_op(incoming->msg.payload)) {
        if (wire->kind == kOpGet) pick = "dict";
        if (wire->kind == "getCount") pick = "counter";
      }
    }
    if (pick == "none") return PartyIo{incoming->channel, Message::data(bot_output())};
    Bytes payload = extract_half(paired->msg.payload, pick == "counter" ? 0 : 1);
    return PartyIo{incoming->channel, Message::data(payload)};
  }

  Bytes canonical_state() const override { return inner_->canonical_state(); }
  uint64_t extra_bits_consumed() const override { return inner_->extra_bits_consumed(); }

 private:
  static Bytes extract_half(const Bytes& pair_payload, int which) {
    // enc::pair of two enc::pair("m"/"none", message-encoding) values.
    size_t pos = 0;
    auto read_len = [&]() {
      uint64_t v = 0;
      for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(pair_payload[pos++]);
      return v;
    };
    Bytes halves[2];
    for (int h = 0; h < 2; ++h) {
      uint64_t len = read_len();
      halves[h] = pair_payload.substr(pos, len);
      pos += len;
    }
    const Bytes& half = halves[which];
    // Unwrap ("m", message) -> message payload; kind byte + payload bytes.
    size_t p = 0;
    auto rd = [&]() {
      uint64_t v = 0;
      for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(half[p++]);
      return v;
    };
    uint64_t tag_len = rd();
    Bytes tag = half.substr(p, tag_len);
    p += tag_len;
    if (tag != "m") return bot_output();
    uint64_t msg_len = rd();
    Bytes msg = half.substr(p, msg_len);
    // Message::encode is kind byte followed by length-prefixed payload.
    return msg.substr(1 + 8);
  }

  std::unique_ptr<ParallelController> inner_;
};

}  // namespace

ControllerSpec xor_controller_spec(int k_bits) {
  if (k_bits < 1) throw ParameterError("xor controller needs k >= 1");
  ControllerSpec s;
  s.name = "xor";
  s.make = [k_bits] { return std::make_unique<XorController>(k_bits); };
  s.layout = TapeLayout::raw(k_bits);
  return s;
}

ControllerSpec sorted_dict_controller_spec() {
  ControllerSpec s;
  s.name = "sorted_dict";
  s.make = [] { return std::make_unique<SortedDictController>(); };
  return s;
}

ControllerSpec cloud_storage_controller_spec() {
  ControllerSpec s;
  s.name = "cloud_storage";
  s.make = [] { return std::make_unique<CloudStorageController>(); };
  return s;
}

ControllerSpec bulletin_board_controller_spec() {
  ControllerSpec s;
  s.name = "bulletin_board";
  s.make = [] { return std::make_unique<BulletinBoardController>(); };
  return s;
}

ControllerSpec ignore_delete_controller_spec() {
  ControllerSpec s;
  s.name = "counterexample_ignore_delete";
  s.make = [] { return std::make_unique<IgnoreDeleteController>(); };
  return s;
}

ControllerSpec timing_controller_spec(int horizon, int max_contacts) {
  if (horizon < 2 || (horizon & (horizon - 1)) != 0) {
    throw ParameterError("timing controller horizon must be a power of two >= 2");
  }
  int bits = 0;
  while ((1 << bits) < horizon) ++bits;
  ControllerSpec s;
  s.name = "counterexample_timing";
  s.make = [horizon, bits] { return std::make_unique<TimingController>(horizon, bits); };
  for (int i = 0; i < max_contacts; ++i) s.layout.segments.push_back(TapeSegment::raw(bits));
  return s;
}

ControllerSpec batch_controller_spec(BatchMechanism mech) {
  auto shared = std::make_shared<const BatchMechanism>(std::move(mech));
  ControllerSpec s;
  s.name = "batch_" + shared->name;
  s.make = [shared] { return std::make_unique<BatchController>(shared.get()); };
  s.layout = shared->layout;
  s.tail_deficit = shared->tail_deficit;
  s.batch_mech = shared;
  return s;
}

ControllerSpec pp_controller_spec(MechanismSpec mech) {
  auto shared = std::make_shared<const MechanismSpec>(std::move(mech));
  ControllerSpec s;
  s.name = "pp_" + shared->name;
  s.make = [shared] { return std::make_unique<PpController>(shared.get(), feed_everything_filter()); };
  s.layout = shared->layout;
  s.tail_deficit = shared->tail_deficit;
  return s;
}

ControllerSpec parallel_compose_spec(ControllerSpec c0, ControllerSpec c1) {
  auto h0 = std::make_shared<const ControllerSpec>(std::move(c0));
  auto h1 = std::make_shared<const ControllerSpec>(std::move(c1));
  ControllerSpec s;
  s.name = h0->name + "||" + h1->name;
  uint64_t bits0 = h0->layout.total_bits();
  uint64_t bits1 = h1->layout.total_bits();
  s.make = [h0, h1, bits0, bits1] {
    return std::make_unique<ParallelController>(h0->make(), h1->make(), bits0, bits1);
  };
  s.layout = TapeLayout::concat(h0->layout, h1->layout);
  s.tail_deficit = h0->tail_deficit + h1->tail_deficit;
  s.split_segment = h0->layout.segments.size();
  s.half0 = h0;
  s.half1 = h1;
  return s;
}

namespace {

std::unique_ptr<ParallelController> make_directory_parallel(
    const std::shared_ptr<const MechanismSpec>& mech) {
  auto counter_half =
      std::make_unique<PpController>(mech.get(), directory_counter_filter());
  auto dict_half = std::make_unique<DirectoryDictController>();
  return std::make_unique<ParallelController>(std::move(counter_half), std::move(dict_half),
                                              mech->layout.total_bits(), 0);
}

}  // namespace

ControllerSpec directory_stats_composed_spec(int horizon, double eps, int bound,
                                             int draw_width) {
  auto mech = std::make_shared<const MechanismSpec>(
      TreeCounterMechanism::spec(horizon, eps, bound, draw_width));
  ControllerSpec s;
  s.name = "directory_stats";
  s.make = [mech] { return std::make_unique<DirectoryAdapter>(make_directory_parallel(mech)); };
  s.layout = mech->layout;
  s.tail_deficit = mech->tail_deficit;
  s.split_segment = mech->layout.segments.size();
  return s;
}

namespace {

// Direct transliteration of the directory-with-statistics controller, used
// to cross-check the composed build.
class DirectoryMonolith : public QueryResponseController {
 public:
  explicit DirectoryMonolith(std::shared_ptr<const MechanismSpec> mech)
      : spec_(std::move(mech)), mech_(spec_->make()) {}

  void init(RandomTape& tape) override {
    mech_tape_ = tape.region(0, spec_->layout.total_bits());
    mech_->init(mech_tape_);
  }

  Bytes canonical_state() const override {
    Bytes pp_half;
    enc::put_bytes(pp_half, mech_->state_bytes());
    pp_half += users_.canonical_bytes();
    return enc::pair(pp_half, directory_.canonical_bytes());
  }

  uint64_t extra_bits_consumed() const override { return mech_tape_.cursor(); }

 protected:
  Bytes respond(const ChannelId& ch, const Message& msg, RandomTape&) override {
    if (msg.kind == MsgKind::kDelete) {
      directory_.apply(Op{kOpDelete, ch.token, {}});
      users_.apply(Op{kOpDelete, ch.token, {}});
      return bot_output();
    }
    if (msg.kind != MsgKind::kData) return bot_output();
    auto wire = decode_wire_op(msg.payload);
    if (!wire) return bot_output();
    if (wire->kind == kOpSet) {
      directory_.apply(Op{kOpSet, ch.token, wire->arg(0)});
      return bot_output();
    }
    if (wire->kind == kOpGet) {
      if (!users_.contains(ch.token)) {
        users_.apply(Op{kOpSet, ch.token, Bytes(1, '\x01')});
        mech_->process(Op{kOpFeed, ch.token, Bytes(1, '\x01')}, mech_tape_);
      }
      return directory_.apply(Op{kOpGet, wire->arg(0), {}});
    }
    if (wire->kind == "getCount") {
      return mech_->process(Op{kOpTick, {}, {}}, mech_tape_);
    }
    return bot_output();
  }

 private:
  std::shared_ptr<const MechanismSpec> spec_;
  std::unique_ptr<OnlineMechanism> mech_;
  RandomTape mech_tape_;
  SortedDict directory_;
  SortedDict users_;
};

}  // namespace

ControllerSpec directory_stats_monolithic_spec(int horizon, double eps, int bound,
                                               int draw_width) {
  auto mech = std::make_shared<const MechanismSpec>(
      TreeCounterMechanism::spec(horizon, eps, bound, draw_width));
  ControllerSpec s;
  s.name = "directory_stats_monolithic";
  s.make = [mech] { return std::make_unique<DirectoryMonolith>(mech); };
  s.layout = mech->layout;
  s.tail_deficit = mech->tail_deficit;
  return s;
}

bool check_query_response(const ControllerSpec& spec, const std::vector<QuerySeq>& traces) {
  for (const auto& trace : traces) {
    auto party = spec.make();
    RandomTape tape(0, spec.layout.total_bits());
    party->init(tape);
    for (const auto& io : trace) {
      auto reply = party->activate(io, tape);
      if (reply && reply->channel != io.channel) return false;
    }
  }
  return true;
}

bool check_deterministic_functionality(const ControllerSpec& spec,
                                       const std::vector<QuerySeq>& traces,
                                       const std::vector<uint64_t>& seeds) {
  for (const auto& trace : traces) {
    std::optional<Bytes> reference;
    for (uint64_t seed : seeds) {
      auto party = spec.make();
      RandomTape tape(seed, spec.layout.total_bits());
      party->init(tape);
      Bytes transcript;
      for (const auto& io : trace) {
        auto reply = party->activate(io, tape);
        enc::put_bytes(transcript, reply ? reply->msg.encode() : Bytes());
      }
      if (!reference) {
        reference = transcript;
      } else if (*reference != transcript) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace delaudit
