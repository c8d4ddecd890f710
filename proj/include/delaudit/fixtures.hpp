#pragma once

#include <string>
#include <vector>

#include "delaudit/controllers.hpp"
#include "delaudit/execution.hpp"

namespace delaudit {

// Deterministic environment/subject fixtures; audits quantify over these.
struct EnvSpec {
  std::string name;
  EnvFactory make;
  int env_channels = 8;
};

struct SubjSpec {
  std::string name;
  SubjFactory make;
  bool silent = true;  // never messages the environment
  bool lift = true;    // additionally deletes only when instructed
};

struct EnvAction {
  enum class Kind {
    kSendCtrl,        // message on a fixed pool channel
    kSendCtrlFresh,   // message on the next unused pool channel
    kSendSubj,        // command payload to the subject
    kBlockLastToken,  // wire_block(last payload heard from the subject)
    kFinish,
  };
  Kind kind = Kind::kFinish;
  int channel = 0;
  Message msg;
  Bytes subj_payload;

  static EnvAction send_ctrl(int channel, Message msg) {
    return EnvAction{Kind::kSendCtrl, channel, std::move(msg), {}};
  }
  static EnvAction send_ctrl_fresh(Message msg) {
    return EnvAction{Kind::kSendCtrlFresh, 0, std::move(msg), {}};
  }
  static EnvAction send_subj(Bytes command) {
    return EnvAction{Kind::kSendSubj, 0, {}, std::move(command)};
  }
  static EnvAction block_last_token(int channel) {
    return EnvAction{Kind::kBlockLastToken, channel, {}, {}};
  }
  static EnvAction finish() { return EnvAction{}; }
};

// Subject command vocabulary (payloads on the env<->subject channel).
Bytes subj_cmd_delete();
Bytes subj_cmd_send(const Bytes& wire_payload);

EnvSpec scripted_env(std::string name, std::vector<EnvAction> script, int env_channels = 8,
                     int loop_from = -1);

// Sends the given wire payloads to the controller when commanded, deletes on
// command, never messages the environment.
SubjSpec commanded_subject();

// Inserts, leaks its controller channel token to the environment, then
// deletes: the blacklist-trigger subject.
SubjSpec chatty_subject();

// Inserts on the first wake, reads the trap time from the reply, then
// deletes on exactly the wake where the dictionary size equals it.
SubjSpec timing_subject();

// Fixture catalog, keyed by names the CLI accepts.
struct Fixture {
  std::string name;
  EnvSpec env;
  SubjSpec subj;
};

const std::vector<Fixture>& fixture_catalog();
const Fixture& fixture_by_name(const std::string& name);

// Fixture groups per controller family, used by the lift-theorem sweep.
std::vector<std::string> fixtures_for_family(const std::string& family);

}  // namespace delaudit
