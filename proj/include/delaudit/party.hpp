#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "delaudit/message.hpp"
#include "delaudit/tape.hpp"

namespace delaudit {

struct PartyIo {
  ChannelId channel;
  Message msg;
};

// An activatable state machine. The scheduler activates a party with an
// incoming (channel, message) pair -- or with nullopt when it wakes the
// driving party without new input -- and the party replies with at most one
// outgoing message, which deactivates it.
class Party {
 public:
  virtual ~Party() = default;

  // Run once before the first activation (and before state extraction if the
  // party is never activated). Work done here models the paper-style
  // initialization that may read tape bits.
  virtual void init(RandomTape&) {}

  virtual std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                          RandomTape& tape) = 0;

  // Deterministic injective encoding of the work state. Equal logical states
  // encode to equal bytes.
  virtual Bytes canonical_state() const { return {}; }

  // Tape bits consumed through internal sub-tapes (parallel composition);
  // most parties read only through the tape the scheduler hands them.
  virtual uint64_t extra_bits_consumed() const { return 0; }
};

// Channel endpoints a real-world environment knows about.
struct EnvView {
  std::vector<ChannelId> env_ctrl;  // many channels to the controller
  ChannelId env_subj;               // one channel to the subject
};

// Channel endpoints the subject knows about.
struct SubjView {
  ChannelId subj_ctrl;
  ChannelId env_subj;
};

using ControllerFactory = std::function<std::unique_ptr<Party>()>;
using EnvFactory = std::function<std::unique_ptr<Party>(const EnvView&)>;
using SubjFactory = std::function<std::unique_ptr<Party>(const SubjView&)>;

}  // namespace delaudit
