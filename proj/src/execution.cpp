#include "delaudit/execution.hpp"

#include <json.hpp>

#include "delaudit/confidentiality_exec.hpp"
#include "delaudit/errors.hpp"

namespace delaudit {

const char* role_name(Role r) {
  switch (r) {
    case Role::kController:
      return "controller";
    case Role::kEnvironment:
      return "environment";
    case Role::kSubject:
      return "subject";
    case Role::kDummy:
      return "dummy";
  }
  return "?";
}

QuerySeq project_queries(const Transcript& t) {
  QuerySeq q;
  for (const auto& e : t.entries) {
    if (e.sender == Role::kEnvironment && e.receiver == Role::kController) {
      q.push_back(PartyIo{e.channel, e.msg});
    }
  }
  return q;
}

RealTopology make_topology(int env_channels) {
  auto token = [](uint64_t i) {
    uint64_t h = splitmix64(0xd17ac0de5eedULL + i * 0x9e3779b97f4a7c15ULL);
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return ChannelId{std::string(buf)};
  };
  RealTopology topo;
  topo.subj_ctrl = token(0);
  for (int j = 0; j < env_channels; ++j) topo.env_ctrl.push_back(token(1 + j));
  topo.env_subj = token(1u << 20);
  return topo;
}

namespace {

struct InteractionOptions {
  uint64_t max_steps = 0;
  bool confidentiality = false;        // finish semantics instead of delete-ends-run
  bool drop_subject_traffic = false;   // GGV ideal world
  bool enforce_silent_subject = false;
};

class RealInteraction {
 public:
  RealInteraction(const RealParties& parties, const RealTapes& tapes,
                  const InteractionOptions& opt)
      : opt_(opt), topo_(make_topology(parties.env_channels)), tapes_(tapes) {
    ctrl_ = parties.controller();
    env_ = parties.environment(EnvView{topo_.env_ctrl, topo_.env_subj});
    subj_ = parties.subject(SubjView{topo_.subj_ctrl, topo_.env_subj});
  }

  ExecutionOutcome run() {
    Role current = Role::kEnvironment;
    std::optional<PartyIo> input;
    bool end_after_ctrl = false;

    while (true) {
      if (++steps_ > opt_.max_steps) return bottom();
      std::optional<PartyIo> out = activate(current, input);
      if (current == Role::kController && end_after_ctrl) {
        if (out) record(Role::kController, peer_of(Role::kController, out->channel), *out);
        return done();
      }
      if (!out) {
        current = Role::kEnvironment;
        input.reset();
        continue;
      }
      const ChannelId& ch = out->channel;
      const Message& msg = out->msg;

      if (current == Role::kSubject && msg.kind == MsgKind::kTick) {
        throw ModelViolationError("subject emitted tick");
      }
      if (opt_.enforce_silent_subject && current == Role::kSubject && ch == topo_.env_subj) {
        throw SubjectClassError("subject messaged the environment in a silent-class audit");
      }
      if (current == Role::kEnvironment && msg.kind == MsgKind::kFinish) {
        if (opt_.confidentiality) return finish_protocol();
        // Finish is a confidentiality-experiment signal; in the control
        // experiment the environment simply stays silent from here on.
        current = Role::kEnvironment;
        input.reset();
        continue;
      }

      Role dest;
      if (!route(current, ch, &dest)) {
        // Unknown channel for this sender: fail is written back to it.
        input = PartyIo{ch, Message::fail()};
        continue;
      }

      if (current == Role::kSubject && dest == Role::kController) {
        if (msg.kind == MsgKind::kDelete) subject_sent_delete_ = true;
        if (opt_.drop_subject_traffic) {
          current = Role::kEnvironment;
          input.reset();
          continue;
        }
        if (!opt_.confidentiality && msg.kind == MsgKind::kDelete) end_after_ctrl = true;
      }
      if (current == Role::kController && dest == Role::kSubject && opt_.drop_subject_traffic) {
        current = Role::kEnvironment;
        input.reset();
        continue;
      }

      if (current == Role::kController || dest == Role::kController) record(current, dest, *out);
      current = dest;
      input = out;
    }
  }

  Bytes env_view() const {
    // The environment's randomness followed by its controller-facing
    // message transcript, in order.
    Bytes out;
    enc::put_u64(out, tapes_.environment.budget());
    std::vector<Bytes> msgs;
    for (const auto& e : transcript_.entries) {
      bool from_env = e.sender == Role::kEnvironment && e.receiver == Role::kController;
      bool to_env = e.sender == Role::kController && e.receiver == Role::kEnvironment;
      if (!from_env && !to_env) continue;
      Bytes m;
      m.push_back(from_env ? 'q' : 'a');
      enc::put_bytes(m, e.channel.token);
      enc::put_bytes(m, e.msg.encode());
      msgs.push_back(std::move(m));
    }
    out += enc::list(msgs);
    return out;
  }

 private:
  std::optional<PartyIo> activate(Role who, const std::optional<PartyIo>& input) {
    Party& p = party(who);
    RandomTape& t = tape(who);
    if (who == Role::kController && !ctrl_inited_) {
      p.init(t);
      ctrl_inited_ = true;
    }
    return p.activate(input, t);
  }

  // Resolves the destination of channel `ch` as seen from `sender`.
  // Returns false if the sender has no endpoint on that channel.
  bool route(Role sender, const ChannelId& ch, Role* dest) {
    if (sender == Role::kController) {
      // The controller may only use channels it has received on.
      auto it = learned_.find(ch.token);
      if (it == learned_.end()) return false;
      *dest = it->second;
      return true;
    }
    if (ch == topo_.env_subj) {
      *dest = sender == Role::kEnvironment ? Role::kSubject : Role::kEnvironment;
      return true;
    }
    if (sender == Role::kSubject) {
      if (ch == topo_.subj_ctrl) {
        *dest = Role::kController;
        return true;
      }
      return false;
    }
    for (const auto& c : topo_.env_ctrl) {
      if (c == ch) {
        *dest = Role::kController;
        return true;
      }
    }
    return false;
  }

  Role peer_of(Role sender, const ChannelId& ch) {
    Role dest = Role::kEnvironment;
    route(sender, ch, &dest);
    return dest;
  }

  void record(Role sender, Role receiver, const PartyIo& io) {
    if (receiver == Role::kController) learned_[io.channel.token] = sender;
    transcript_.entries.push_back(TranscriptEntry{steps_, sender, receiver, io.channel, io.msg});
  }

  ExecutionOutcome finish_protocol() {
    if (!subject_sent_delete_) {
      // The subject's delete is forced at finish time.
      subject_sent_delete_ = true;
      if (!opt_.drop_subject_traffic) {
        PartyIo forced{topo_.subj_ctrl, Message::del()};
        record(Role::kSubject, Role::kController, forced);
        ++steps_;
        auto out = activate(Role::kController, forced);
        if (out) record(Role::kController, peer_of(Role::kController, out->channel), *out);
      }
    }
    return done();
  }

  ExecutionOutcome done() {
    ExecutionOutcome o;
    if (!ctrl_inited_) {
      ctrl_->init(tapes_.controller);
      ctrl_inited_ = true;
    }
    o.transcript = transcript_;
    o.controller_state = ctrl_->canonical_state();
    o.tape_bits_consumed = tapes_.controller.cursor() + ctrl_->extra_bits_consumed();
    return o;
  }

  ExecutionOutcome bottom() {
    ExecutionOutcome o;
    o.controller_state.reset();
    o.tape_bits_consumed = tapes_.controller.cursor() + ctrl_->extra_bits_consumed();
    return o;
  }

  Party& party(Role r) {
    switch (r) {
      case Role::kController:
        return *ctrl_;
      case Role::kEnvironment:
        return *env_;
      default:
        return *subj_;
    }
  }
  RandomTape& tape(Role r) {
    switch (r) {
      case Role::kController:
        return tapes_.controller;
      case Role::kEnvironment:
        return tapes_.environment;
      default:
        return tapes_.subject;
    }
  }

  InteractionOptions opt_;
  RealTopology topo_;
  RealTapes tapes_;
  std::unique_ptr<Party> ctrl_, env_, subj_;
  Transcript transcript_;
  std::map<std::string, Role> learned_;
  uint64_t steps_ = 0;
  bool ctrl_inited_ = false;
  bool subject_sent_delete_ = false;
};

}  // namespace

ExecutionOutcome run_real(const RealParties& parties, const RealTapes& tapes,
                          uint64_t max_steps) {
  InteractionOptions opt;
  opt.max_steps = max_steps;
  RealInteraction run(parties, tapes, opt);
  return run.run();
}

GgvOutcome run_ggv(const RealParties& parties, const RealTapes& tapes, uint64_t max_steps,
                   bool drop_subject_traffic, bool enforce_silent_subject) {
  InteractionOptions opt;
  opt.max_steps = max_steps;
  opt.confidentiality = true;
  opt.drop_subject_traffic = drop_subject_traffic;
  opt.enforce_silent_subject = enforce_silent_subject;
  RealInteraction run(parties, tapes, opt);
  ExecutionOutcome out = run.run();
  GgvOutcome g;
  g.env_view = run.env_view();
  g.controller_state = out.controller_state;
  g.tape_bits_consumed = out.tape_bits_consumed;
  return g;
}

namespace {

// Replays q_E verbatim on the original channels, ignoring all responses.
class DummyParty {
 public:
  explicit DummyParty(const QuerySeq& q) : q_(q) {}
  bool exhausted() const { return next_ >= q_.size(); }
  PartyIo next() { return q_[next_++]; }

 private:
  const QuerySeq& q_;
  size_t next_ = 0;
};

}  // namespace

ExecutionOutcome run_ideal(const ControllerFactory& controller, const QuerySeq& q_e,
                           const RandomTape& tape, uint64_t max_steps) {
  auto ctrl = controller();
  RandomTape t = tape;
  DummyParty dummy(q_e);
  Transcript transcript;
  uint64_t steps = 0;
  bool inited = false;

  auto ensure_init = [&]() {
    if (!inited) {
      ctrl->init(t);
      inited = true;
    }
  };

  auto deliver_and_activate = [&](const PartyIo& io) -> std::optional<PartyIo> {
    transcript.entries.push_back(
        TranscriptEntry{steps, Role::kDummy, Role::kController, io.channel, io.msg});
    ensure_init();
    return ctrl->activate(io, t);
  };

  while (!dummy.exhausted()) {
    if (++steps > max_steps) {
      ExecutionOutcome o;
      o.controller_state.reset();
      o.tape_bits_consumed = t.cursor() + ctrl->extra_bits_consumed();
      return o;
    }
    PartyIo io = dummy.next();
    bool last = dummy.exhausted();
    auto reply = deliver_and_activate(io);
    if (reply) {
      transcript.entries.push_back(
          TranscriptEntry{steps, Role::kController, Role::kDummy, reply->channel, reply->msg});
    }
    if (last) break;
  }

  ensure_init();
  ExecutionOutcome o;
  o.transcript = std::move(transcript);
  o.controller_state = ctrl->canonical_state();
  o.tape_bits_consumed = t.cursor() + ctrl->extra_bits_consumed();
  return o;
}

std::string to_ldjson(const ExecutionOutcome& outcome) {
  std::string out;
  for (const auto& e : outcome.transcript.entries) {
    nlohmann::json j;
    j["step"] = e.step;
    j["sender"] = role_name(e.sender);
    j["receiver"] = role_name(e.receiver);
    j["channel"] = e.channel.token;
    j["kind"] = msg_kind_name(e.msg.kind);
    j["payload_hex"] = to_hex(e.msg.payload);
    out += j.dump();
    out += '\n';
  }
  nlohmann::json trailer;
  if (outcome.controller_state) {
    trailer["controller_state"] = to_hex(*outcome.controller_state);
  } else {
    trailer["controller_state"] = nullptr;
  }
  trailer["tape_bits_consumed"] = outcome.tape_bits_consumed;
  out += trailer.dump();
  out += '\n';
  return out;
}

namespace {

Role role_from_name(const std::string& s) {
  if (s == "controller") return Role::kController;
  if (s == "environment") return Role::kEnvironment;
  if (s == "subject") return Role::kSubject;
  if (s == "dummy") return Role::kDummy;
  throw ConfigError("unknown role: " + s);
}

MsgKind kind_from_name(const std::string& s) {
  if (s == "data") return MsgKind::kData;
  if (s == "delete") return MsgKind::kDelete;
  if (s == "tick") return MsgKind::kTick;
  if (s == "fail") return MsgKind::kFail;
  if (s == "finish") return MsgKind::kFinish;
  throw ConfigError("unknown message kind: " + s);
}

}  // namespace

ExecutionOutcome from_ldjson(const std::string& text) {
  ExecutionOutcome o;
  size_t pos = 0;
  std::vector<nlohmann::json> lines;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    lines.push_back(nlohmann::json::parse(line));
  }
  if (lines.empty()) throw ConfigError("empty transcript record");
  for (size_t i = 0; i + 1 < lines.size(); ++i) {
    const auto& j = lines[i];
    TranscriptEntry e;
    e.step = j.at("step").get<uint64_t>();
    e.sender = role_from_name(j.at("sender").get<std::string>());
    e.receiver = role_from_name(j.at("receiver").get<std::string>());
    e.channel = ChannelId{j.at("channel").get<std::string>()};
    e.msg.kind = kind_from_name(j.at("kind").get<std::string>());
    e.msg.payload = from_hex(j.at("payload_hex").get<std::string>());
    o.transcript.entries.push_back(std::move(e));
  }
  const auto& trailer = lines.back();
  if (trailer.at("controller_state").is_null()) {
    o.controller_state.reset();
  } else {
    o.controller_state = from_hex(trailer.at("controller_state").get<std::string>());
  }
  o.tape_bits_consumed = trailer.at("tape_bits_consumed").get<uint64_t>();
  return o;
}

}  // namespace delaudit
