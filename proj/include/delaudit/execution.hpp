#pragma once

#include <optional>
#include <string>
#include <vector>

#include "delaudit/party.hpp"

namespace delaudit {

enum class Role { kController, kEnvironment, kSubject, kDummy };
const char* role_name(Role r);

// Ordered record of every message sent to or received by the controller.
// Environment<->subject traffic is excluded by construction.
struct TranscriptEntry {
  uint64_t step = 0;
  Role sender = Role::kEnvironment;
  Role receiver = Role::kController;
  ChannelId channel;
  Message msg;
};

struct Transcript {
  std::vector<TranscriptEntry> entries;
};

using QuerySeq = std::vector<PartyIo>;

struct ExecutionOutcome {
  Transcript transcript;
  // nullopt encodes the paper's bottom state: the step bound was exhausted
  // before the termination condition fired. The transcript is then empty.
  std::optional<Bytes> controller_state;
  uint64_t tape_bits_consumed = 0;

  bool is_bottom() const { return !controller_state.has_value(); }
};

// The subsequence of queries from the environment to the controller,
// order-preserving.
QuerySeq project_queries(const Transcript& t);

struct RealTopology {
  ChannelId subj_ctrl;
  std::vector<ChannelId> env_ctrl;
  ChannelId env_subj;
};

RealTopology make_topology(int env_channels);

struct RealParties {
  ControllerFactory controller;
  EnvFactory environment;
  SubjFactory subject;
  int env_channels = 8;
};

struct RealTapes {
  RandomTape controller;
  RandomTape environment;
  RandomTape subject;
};

// Real execution: activation starts with the environment; the run ends after
// the controller's final activation following the subject's Delete, or turns
// into bottom when max_steps is exhausted first.
ExecutionOutcome run_real(const RealParties& parties, const RealTapes& tapes,
                          uint64_t max_steps);

// Ideal execution: a dummy party replays q_E on the original channels
// regardless of responses; empty q_E leaves the controller at its
// initialization state.
ExecutionOutcome run_ideal(const ControllerFactory& controller, const QuerySeq& q_e,
                           const RandomTape& tape, uint64_t max_steps);

// Line-delimited JSON: one object per transcript entry with fields
// {step, sender, receiver, channel, kind, payload_hex}, then one trailer
// object carrying controller_state (lowercase hex) and tape_bits_consumed.
std::string to_ldjson(const ExecutionOutcome& outcome);
ExecutionOutcome from_ldjson(const std::string& text);

}  // namespace delaudit
