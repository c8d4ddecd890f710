#pragma once

#include <functional>
#include <memory>

#include "delaudit/impls.hpp"
#include "delaudit/pmf.hpp"

namespace delaudit {

enum class AhiVariant { kIdentical, kFresh };
const char* ahi_variant_name(AhiVariant v);

// Adaptively chooses operations given outputs, then names a logically
// equivalent sequence to replay.
class AhiAdversary {
 public:
  virtual ~AhiAdversary() = default;
  virtual void begin(const std::optional<Bytes>& init_output) { (void)init_output; }
  // nullopt ends the interaction.
  virtual std::optional<Op> next_op(const Bytes& last_output) = 0;
  virtual OpSeq equivalent_sequence() const = 0;
};

using AhiAdversaryFactory = std::function<std::unique_ptr<AhiAdversary>()>;

struct AhiGameRecord {
  OpSeq seq;
  OpSeq seq_star;
  std::optional<Bytes> init_out;
  std::vector<Bytes> outputs;
  Bytes s_p;
  Bytes s_p_star;
  bool forced = false;  // seq_star was not logically equivalent to seq
  AhiVariant variant = AhiVariant::kIdentical;

  // The adversary's view (seq, seq*, outputs) as canonical bytes.
  Bytes view_bytes() const;
  std::string to_json() const;
};

// One run of the adaptive history independence game: realize seq against the
// implementation on `tape`, replay the adversary's equivalent sequence on
// `tape` again (identical) or on `fresh_tape` (fresh), forcing s_P* <- s_P
// when the claimed equivalence fails.
AhiGameRecord run_ahi_game(const ImplSpec& impl, const AhiAdversaryFactory& adversary,
                           AhiVariant variant, const RandomTape& tape,
                           const RandomTape& fresh_tape, uint64_t op_bound = 10000);

struct AhiAuditOptions {
  AhiVariant variant = AhiVariant::kIdentical;
  bool exact = true;
  uint64_t enumeration_cap = 1u << 22;
  uint64_t trials = 20000;  // sampled mode
  double confidence = 0.95;
  uint64_t seed = 1;
  uint64_t op_bound = 10000;
};

// Closeness of (view, s_P) against (view, s_P*) over the game's randomness.
ClosenessReport audit_ahi(const ImplSpec& impl, const AhiAdversaryFactory& adversary,
                          double eps, double delta, const AhiAuditOptions& opt);

// Fixture adversaries.

// Plays a fixed script and replays a fixed equivalent sequence.
AhiAdversaryFactory scripted_adversary(OpSeq script, OpSeq equivalent);

// Echoes a leaked init output as its first insert, pads with an
// insert/delete pair, and replays the canonical one-insert sequence.
AhiAdversaryFactory echo_adversary();

// Issues pseudorandom dictionary traffic and replays the canonical sequence.
AhiAdversaryFactory random_dict_adversary(const AdtSpec* adt, uint64_t seed, int ops);

// Plays a script, then replays a stably shuffled but logically equivalent
// reordering of it.
AhiAdversaryFactory shuffling_adversary(const AdtSpec* adt, OpSeq script, uint64_t seed);

}  // namespace delaudit
