#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "delaudit/adt.hpp"
#include "delaudit/layout.hpp"
#include "delaudit/pmf.hpp"

namespace delaudit {

inline constexpr const char* kOpFeed = "feed";

// An online algorithm processing a stream of operations, producing output
// only on tick. The internal state snapshot is what a single intrusion sees.
class OnlineMechanism {
 public:
  virtual ~OnlineMechanism() = default;
  virtual void init(RandomTape&) {}
  virtual Bytes process(const Op& op, RandomTape& tape) = 0;
  virtual Bytes state_bytes() const = 0;
};

struct MechanismSpec {
  std::string name;
  std::function<std::unique_ptr<OnlineMechanism>()> make;
  TapeLayout layout;
  double tail_deficit = 0;  // summed delta surcharge of every declared draw
};

enum class PpSide { kIn, kOut };
const char* pp_side_name(PpSide s);

struct PpQuery {
  enum class Code { kRegular, kIntrusion, kChallenge, kEnd };
  Code code = Code::kEnd;
  Op op;
};

// Issues game queries adaptively given the last response. Deterministic
// adversaries (the only kind exact audits accept) carry no randomness.
class PpAdversary {
 public:
  virtual ~PpAdversary() = default;
  virtual PpQuery next(const Bytes& last_response) = 0;
};
using PpAdversaryFactory = std::function<std::unique_ptr<PpAdversary>()>;

struct PpView {
  std::vector<std::pair<PpQuery, Bytes>> transcript;
  bool halted_by_assert = false;
  Bytes view_bytes() const;  // adversary randomness slot + message transcript
};

// The adaptive event-level pan-privacy game: at most one intrusion (returns
// the mechanism state verbatim) and one non-tick challenge (delivered to the
// mechanism only on the `in` side). A failed assertion halts the game; the
// truncated view is still returned, it is part of the distribution.
PpView run_pp_game(const MechanismSpec& mech, const PpAdversaryFactory& adversary,
                   PpSide side, const RandomTape& mech_tape, uint64_t op_bound = 10000);

struct PpAuditOptions {
  bool exact = true;
  uint64_t enumeration_cap = 1u << 24;
  uint64_t trials = 20000;
  double confidence = 0.95;
  uint64_t seed = 1;
  uint64_t op_bound = 10000;
};

// Closeness of the adversary's views across sides.
ClosenessReport audit_pp(const MechanismSpec& mech, const PpAdversaryFactory& adversary,
                         double eps, double delta, const PpAuditOptions& opt);

// Fixture adversaries.
PpAdversaryFactory scripted_pp_adversary(std::vector<PpQuery> script);
// challenge feed(1) before the first tick, tick, intrusion, tick, end.
PpAdversaryFactory tracing_pp_adversary(int ticks);
// Two intrusions: exercises the assertion-halt path.
PpAdversaryFactory double_intrusion_adversary();

}  // namespace delaudit
