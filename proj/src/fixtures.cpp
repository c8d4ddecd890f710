#include "delaudit/fixtures.hpp"

#include <map>

#include "delaudit/errors.hpp"

namespace delaudit {

Bytes subj_cmd_delete() { return encode_wire_op("cmd-delete"); }
Bytes subj_cmd_send(const Bytes& wire_payload) {
  return encode_wire_op("cmd-send", {wire_payload});
}

namespace {

class ScriptedEnv : public Party {
 public:
  ScriptedEnv(EnvView view, std::vector<EnvAction> script, int loop_from)
      : view_(std::move(view)), script_(std::move(script)), loop_from_(loop_from) {}

  std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                  RandomTape&) override {
    if (incoming && incoming->channel == view_.env_subj) {
      last_subj_payload_ = incoming->msg.payload;
    }
    if (next_ >= script_.size()) {
      if (loop_from_ < 0) return std::nullopt;
      next_ = static_cast<size_t>(loop_from_);
    }
    const EnvAction& a = script_[next_++];
    switch (a.kind) {
      case EnvAction::Kind::kSendCtrl:
        return PartyIo{pool(a.channel), a.msg};
      case EnvAction::Kind::kSendCtrlFresh:
        return PartyIo{pool(fresh_++), a.msg};
      case EnvAction::Kind::kSendSubj:
        return PartyIo{view_.env_subj, Message::data(a.subj_payload)};
      case EnvAction::Kind::kBlockLastToken:
        return PartyIo{pool(a.channel), Message::data(wire_block(last_subj_payload_))};
      case EnvAction::Kind::kFinish:
        return PartyIo{pool(0), Message::finish()};
    }
    return std::nullopt;
  }

 private:
  const ChannelId& pool(int i) const {
    if (i < 0 || static_cast<size_t>(i) >= view_.env_ctrl.size()) {
      throw ConfigError("environment fixture ran out of pool channels");
    }
    return view_.env_ctrl[i];
  }

  EnvView view_;
  std::vector<EnvAction> script_;
  int loop_from_;
  size_t next_ = 0;
  int fresh_ = 1;  // channel 0 is reserved for scripted fixed sends
  Bytes last_subj_payload_;
};

class CommandedSubject : public Party {
 public:
  explicit CommandedSubject(SubjView view) : view_(std::move(view)) {}

  std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                  RandomTape&) override {
    if (!incoming || incoming->channel != view_.env_subj) return std::nullopt;
    auto wire = decode_wire_op(incoming->msg.payload);
    if (!wire) return std::nullopt;
    if (wire->kind == "cmd-delete") return PartyIo{view_.subj_ctrl, Message::del()};
    if (wire->kind == "cmd-send") {
      return PartyIo{view_.subj_ctrl, Message::data(wire->arg(0))};
    }
    return std::nullopt;
  }

 private:
  SubjView view_;
};

class ChattySubject : public Party {
 public:
  explicit ChattySubject(SubjView view) : view_(std::move(view)) {}

  std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                  RandomTape&) override {
    // Advance only on environment wakes; controller replies are ignored.
    if (!incoming || incoming->channel != view_.env_subj) return std::nullopt;
    switch (step_++) {
      case 0:
        return PartyIo{view_.subj_ctrl, Message::data(wire_ins())};
      case 1:
        return PartyIo{view_.env_subj, Message::data(view_.subj_ctrl.token)};
      case 2:
        return PartyIo{view_.subj_ctrl, Message::del()};
      default:
        return std::nullopt;
    }
  }

 private:
  SubjView view_;
  int step_ = 0;
};

class TimingSubject : public Party {
 public:
  explicit TimingSubject(SubjView view) : view_(std::move(view)) {}

  std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                  RandomTape&) override {
    if (!incoming) return std::nullopt;
    if (incoming->channel == view_.subj_ctrl) {
      // The first-contact reply carries the trap time.
      if (!trap_.has_value() && incoming->msg.kind == MsgKind::kData &&
          incoming->msg.payload.size() == 8) {
        uint64_t t = 0;
        for (char c : incoming->msg.payload) t = (t << 8) | static_cast<unsigned char>(c);
        trap_ = t;
        if (t == 1) return PartyIo{view_.subj_ctrl, Message::del()};
      }
      return std::nullopt;
    }
    if (incoming->channel != view_.env_subj) return std::nullopt;
    if (!inserted_) {
      inserted_ = true;
      return PartyIo{view_.subj_ctrl, Message::data(wire_ins())};
    }
    if (trap_ && !deleted_ && ++wakes_after_trap_ >= *trap_ - 1) {
      deleted_ = true;
      return PartyIo{view_.subj_ctrl, Message::del()};
    }
    return std::nullopt;
  }

 private:
  SubjView view_;
  bool inserted_ = false;
  bool deleted_ = false;
  std::optional<uint64_t> trap_;
  uint64_t wakes_after_trap_ = 0;
};

}  // namespace

EnvSpec scripted_env(std::string name, std::vector<EnvAction> script, int env_channels,
                     int loop_from) {
  EnvSpec spec;
  spec.name = std::move(name);
  spec.env_channels = env_channels;
  spec.make = [script = std::move(script), loop_from](const EnvView& view) {
    return std::make_unique<ScriptedEnv>(view, script, loop_from);
  };
  return spec;
}

SubjSpec commanded_subject() {
  SubjSpec s;
  s.name = "commanded";
  s.make = [](const SubjView& v) { return std::make_unique<CommandedSubject>(v); };
  s.silent = true;
  s.lift = true;
  return s;
}

SubjSpec chatty_subject() {
  SubjSpec s;
  s.name = "chatty";
  s.make = [](const SubjView& v) { return std::make_unique<ChattySubject>(v); };
  s.silent = false;
  s.lift = false;
  return s;
}

SubjSpec timing_subject() {
  SubjSpec s;
  s.name = "timing";
  s.make = [](const SubjView& v) { return std::make_unique<TimingSubject>(v); };
  s.silent = true;
  s.lift = false;  // deletes on its own schedule
  return s;
}

namespace {

using A = EnvAction;

std::vector<Fixture> build_catalog() {
  std::vector<Fixture> out;
  auto add = [&](const std::string& name, std::vector<EnvAction> script, SubjSpec subj,
                 int channels = 8, int loop_from = -1) {
    out.push_back(Fixture{name, scripted_env(name, std::move(script), channels, loop_from),
                          std::move(subj)});
  };

  // Dictionary family.
  add("dict_writer", {A::send_subj(subj_cmd_send(wire_ins())),
                      A::send_ctrl(0, Message::data(wire_set("v1"))),
                      A::send_ctrl(1, Message::data(wire_ins())),
                      A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());
  add("dict_reader", {A::send_ctrl(0, Message::data(wire_ins())),
                      A::send_subj(subj_cmd_send(wire_set("y"))),
                      A::send_ctrl(0, Message::data(wire_get())),
                      A::send_subj(subj_cmd_delete()),
                      A::send_ctrl(1, Message::data(wire_get())), A::finish()},
      commanded_subject());
  add("dict_mixer", {A::send_ctrl(0, Message::data(wire_set("a"))),
                     A::send_ctrl(1, Message::data(wire_ins())),
                     A::send_subj(subj_cmd_send(wire_ins())),
                     A::send_ctrl(0, Message::del()), A::send_subj(subj_cmd_delete()),
                     A::finish()},
      commanded_subject());

  // Cloud storage family.
  add("cloud_basic", {A::send_ctrl(0, Message::data(wire_upload("f", "F0"))),
                      A::send_subj(subj_cmd_send(wire_upload("g", "G1"))),
                      A::send_ctrl(0, Message::data(wire_download("f"))),
                      A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());
  add("cloud_cross_read", {A::send_subj(subj_cmd_send(wire_upload("s", "S"))),
                           A::send_ctrl(0, Message::data(wire_download("s"))),
                           A::send_ctrl(0, Message::data(wire_upload("s", "E"))),
                           A::send_ctrl(0, Message::data(wire_download("s"))),
                           A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());
  add("cloud_dupes", {A::send_ctrl(0, Message::data(wire_upload("a", "1"))),
                      A::send_ctrl(0, Message::data(wire_upload("a", "2"))),
                      A::send_subj(subj_cmd_send(wire_upload("a", "3"))),
                      A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());

  // Bulletin board family.
  add("bulletin_writer", {A::send_ctrl(0, Message::data(wire_post("hello"))),
                          A::send_subj(subj_cmd_send(wire_post("mine"))),
                          A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());
  add("bulletin_reader", {A::send_subj(subj_cmd_send(wire_post("secret"))),
                          A::send_ctrl(0, Message::data(wire_read())),
                          A::send_subj(subj_cmd_delete()),
                          A::send_ctrl(1, Message::data(wire_read())), A::finish()},
      commanded_subject());
  add("bulletin_mixed", {A::send_ctrl(0, Message::data(wire_post("m1"))),
                         A::send_subj(subj_cmd_send(wire_post("m2"))),
                         A::send_ctrl(1, Message::data(wire_post("m3"))),
                         A::send_ctrl(0, Message::del()), A::send_subj(subj_cmd_delete()),
                         A::finish()},
      commanded_subject());

  // Batch family (the tick comes from the environment).
  add("batch_tick", {A::send_ctrl(0, Message::data(wire_ins())),
                     A::send_subj(subj_cmd_send(wire_ins())),
                     A::send_ctrl(1, Message::data(wire_ins())),
                     A::send_ctrl(0, Message::tick()),
                     A::send_ctrl(1, Message::data(wire_get())),
                     A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());
  add("batch_no_tick", {A::send_ctrl(0, Message::data(wire_ins())),
                        A::send_subj(subj_cmd_send(wire_ins())),
                        A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());
  add("batch_late_ops", {A::send_subj(subj_cmd_send(wire_ins())),
                         A::send_ctrl(0, Message::tick()),
                         A::send_ctrl(1, Message::data(wire_ins())),
                         A::send_ctrl(0, Message::del()),
                         A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());

  // XOR family: raw k-bit payloads (k = 8 in shipped configs).
  add("xor_pair", {A::send_ctrl(0, Message::data(Bytes("\x5a", 1))),
                   A::send_subj(subj_cmd_send(Bytes("\xc3", 1))),
                   A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());
  add("xor_burst", {A::send_ctrl(0, Message::data(Bytes("\x01", 1))),
                    A::send_ctrl(1, Message::data(Bytes("\x02", 1))),
                    A::send_ctrl(0, Message::data(Bytes("\x04", 1))),
                    A::send_subj(subj_cmd_send(Bytes("\xff", 1))),
                    A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());
  add("xor_silent", {A::send_subj(subj_cmd_delete()), A::finish()}, commanded_subject());

  // Directory family.
  add("directory_basic", {A::send_subj(subj_cmd_send(wire_dir_set("555"))),
                          A::send_ctrl(0, Message::data(wire_dir_set("111"))),
                          A::send_ctrl(0, Message::data(wire_get_count())),
                          A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());
  add("directory_lookup", {A::send_subj(subj_cmd_send(wire_dir_set("777"))),
                           A::send_subj(subj_cmd_send(wire_dir_get("self"))),
                           A::send_ctrl(0, Message::data(wire_get_count())),
                           A::send_subj(subj_cmd_delete()),
                           A::send_ctrl(1, Message::data(wire_get_count())), A::finish()},
      commanded_subject());

  // Counterexample triggers.
  add("blacklist_trigger", {A::send_subj(subj_cmd_send(wire_ins())),  // wake 0: insert
                            A::send_subj({}),                         // wake 1: leak token
                            A::block_last_token(0),                   // env blacklists it
                            A::send_subj({}),                         // wake 2: delete
                            A::finish()},
      chatty_subject());
  add("blacklist_quiet", {A::send_subj(subj_cmd_send(wire_ins())),
                          A::send_ctrl(0, Message::data(wire_ins())),
                          A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());
  // Claim-style trigger: one fresh insert per cycle, waking the subject in
  // between; the subject deletes exactly when |D| hits its trap time.
  add("timing_trigger", {A::send_subj({}),  // subject inserts first
                         A::send_ctrl_fresh(Message::data(wire_ins())), A::send_subj({})},
      timing_subject(), 160, 1);
  add("timing_silent", {A::send_subj(subj_cmd_send(wire_ins())),
                        A::send_ctrl(0, Message::data(wire_ins())),
                        A::send_subj(subj_cmd_delete()), A::finish()},
      commanded_subject());

  return out;
}

}  // namespace

const std::vector<Fixture>& fixture_catalog() {
  static const std::vector<Fixture> catalog = build_catalog();
  return catalog;
}

const Fixture& fixture_by_name(const std::string& name) {
  for (const auto& f : fixture_catalog()) {
    if (f.name == name) return f;
  }
  throw ConfigError("unknown fixture: " + name);
}

std::vector<std::string> fixtures_for_family(const std::string& family) {
  static const std::map<std::string, std::vector<std::string>> groups = {
      {"dict", {"dict_writer", "dict_reader", "dict_mixer"}},
      {"cloud", {"cloud_basic", "cloud_cross_read", "cloud_dupes"}},
      {"bulletin", {"bulletin_writer", "bulletin_reader", "bulletin_mixed"}},
      {"batch", {"batch_tick", "batch_no_tick", "batch_late_ops"}},
      {"xor", {"xor_pair", "xor_burst", "xor_silent"}},
      {"directory", {"directory_basic", "directory_lookup"}},
  };
  auto it = groups.find(family);
  if (it == groups.end()) throw ConfigError("unknown fixture family: " + family);
  return it->second;
}

}  // namespace delaudit
