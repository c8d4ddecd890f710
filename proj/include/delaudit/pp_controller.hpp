#pragma once

#include "delaudit/impls.hpp"
#include "delaudit/pan_privacy.hpp"
#include "delaudit/party.hpp"
#include "delaudit/wire.hpp"

namespace delaudit {

// Event-to-user wrapper around an online mechanism: the first non-delete
// operation per id while the id is absent from the membership dictionary is
// forwarded to the mechanism; ticks pass through and return the mechanism's
// output; Delete removes the id from the dictionary only, the mechanism is
// unaffected. The controller's tape is split into the mechanism prefix and a
// (zero-width for the sorted dictionary) membership region.
class PpController : public Party {
 public:
  // `op_filter` maps an incoming wire op to the mechanism op to forward, or
  // nullopt to ignore the message entirely (used by the directory half to
  // pass only lookups to its counter).
  using OpFilter = std::function<std::optional<Op>(const WireOp&, const ChannelId&)>;

  PpController(const MechanismSpec* mech, OpFilter filter);

  void init(RandomTape& tape) override;
  std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                  RandomTape& tape) override;
  Bytes canonical_state() const override;
  uint64_t extra_bits_consumed() const override { return mech_tape_.cursor(); }

  // Multiset of operations actually delivered to the mechanism; audit
  // instrumentation for the membership-filter invariant.
  const OpSeq& delivered_ops() const { return delivered_; }

 private:
  const MechanismSpec* spec_;
  OpFilter filter_;
  std::unique_ptr<OnlineMechanism> mech_;
  RandomTape mech_tape_;
  SortedDict members_;
  OpSeq delivered_;
  bool halted_ = false;
};

// The plain Alg-style wrapper: every data op is a candidate feed.
PpController::OpFilter feed_everything_filter();

}  // namespace delaudit
