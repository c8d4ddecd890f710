#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "delaudit/adt.hpp"
#include "delaudit/layout.hpp"
#include "delaudit/tape.hpp"

namespace delaudit {

// Sorted key-value store with a canonical byte representation: the physical
// state is a pure function of the logical map and no tape bits are consumed,
// which is exactly what makes it strongly history independent.
class SortedDict {
 public:
  Bytes apply(const Op& op);  // returns the operation's output
  bool contains(const Bytes& id) const { return entries_.count(id) > 0; }
  size_t size() const { return entries_.size(); }
  void clear() { entries_.clear(); }
  const std::map<Bytes, Bytes>& entries() const { return entries_; }
  Bytes canonical_bytes() const { return enc::sorted_map(entries_); }

 private:
  std::map<Bytes, Bytes> entries_;
};

// A concrete randomized implementation of an ADT: step consumes operations
// and possibly tape bits, producing outputs and physical states.
class ImplInstance {
 public:
  virtual ~ImplInstance() = default;
  // Output emitted at initialization time, before the first operation
  // (visible to adaptive adversaries).
  virtual std::optional<Bytes> init_output(RandomTape&) { return std::nullopt; }
  virtual Bytes step(const Op& op, RandomTape& tape) = 0;
  virtual Bytes physical_state() const = 0;
};

using ImplFactory = std::function<std::unique_ptr<ImplInstance>()>;

struct ImplSpec {
  std::string name;
  ImplFactory make;
  TapeLayout layout;       // declared tape consumption per full run
  const AdtSpec* adt;      // logical semantics the implementation realizes
};

// Left-fold of step over a sequence from the initial state.
std::pair<Bytes, std::vector<Bytes>> apply_sequence(const ImplFactory& make, const OpSeq& seq,
                                                    RandomTape& tape);

class SortedListDictImpl : public ImplInstance {
 public:
  Bytes step(const Op& op, RandomTape&) override { return dict_.apply(op); }
  Bytes physical_state() const override { return dict_.canonical_bytes(); }

 private:
  SortedDict dict_;
};

// The adaptivity counterexample: leaks its first n tape bits at init, then
// stores the whole operation log if the first operation echoes the leak and
// ignores everything otherwise.
class LeakyDictImpl : public ImplInstance {
 public:
  explicit LeakyDictImpl(int leak_bits) : leak_bits_(leak_bits) {}
  std::optional<Bytes> init_output(RandomTape& tape) override;
  Bytes step(const Op& op, RandomTape&) override;
  Bytes physical_state() const override;
  static TapeLayout layout(int leak_bits) { return TapeLayout::raw(leak_bits); }

 private:
  enum class Mode { kWaiting, kLogging, kInert };
  int leak_bits_;
  Bytes leaked_;  // '0'/'1' characters
  Mode mode_ = Mode::kWaiting;
  OpSeq log_;
};

// Batch controller internals viewed as an implementation: dictionary ops
// before the first tick, then out <- |D| + Z and the dictionary is erased.
class BatchCountImpl : public ImplInstance {
 public:
  explicit BatchCountImpl(NoisePtr noise) : noise_(std::move(noise)) {}
  Bytes step(const Op& op, RandomTape& tape) override;
  Bytes physical_state() const override;
  static TapeLayout layout(const NoisePtr& noise);

 private:
  NoisePtr noise_;
  SortedDict dict_;
  std::optional<int64_t> out_;
};

// The bulletin board's backing structure: the stored list is the logical
// list, so the representation is canonical.
class BulletinListImpl : public ImplInstance {
 public:
  Bytes step(const Op& op, RandomTape&) override;
  Bytes physical_state() const override { return state_; }

 private:
  Bytes state_;
  bool inited_ = false;
};

ImplSpec sorted_list_dict_spec();
ImplSpec leaky_dict_spec(int leak_bits);
ImplSpec batch_count_spec(const NoisePtr& noise);
ImplSpec bulletin_list_spec();
// The directory's internals viewed as an implementation: get(id) feeds a
// pan-private counter that deletion never touches.
ImplSpec directory_counter_spec(int horizon, double eps, int bound, int draw_width);

}  // namespace delaudit
