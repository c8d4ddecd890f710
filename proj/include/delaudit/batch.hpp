#pragma once

#include <functional>
#include <map>

#include "delaudit/impls.hpp"
#include "delaudit/layout.hpp"
#include "delaudit/party.hpp"

namespace delaudit {

// A one-shot mechanism evaluated on the logical contents of the dictionary
// at tick time. It may read tape bits only through its declared layout.
struct BatchMechanism {
  std::string name;
  std::function<Bytes(const std::map<Bytes, Bytes>&, RandomTape&)> run;
  TapeLayout layout;
  double tail_deficit = 0;
  // Inverse view for the two-branch simulator: draw values (per layout
  // segment) that make `run` produce `target` on `dataset`; empty if none.
  std::function<std::vector<DrawVector>(const std::map<Bytes, Bytes>&, const Bytes& target)>
      preimage;
};

// Noisy count of the dataset's keys.
BatchMechanism noisy_count_mechanism(double eps, int bound, int draw_width);
// Noisy sum of the first value byte of each entry (entries clipped to {0,1}).
BatchMechanism noisy_sum_mechanism(double eps, int bound, int draw_width);

// Batch controller: dictionary phase until the first Tick, one mechanism
// evaluation during the tick (the dictionary is erased), then the stored
// output answers every query, deletions included.
class BatchController : public Party {
 public:
  explicit BatchController(const BatchMechanism* mech) : mech_(mech) {}
  std::optional<PartyIo> activate(const std::optional<PartyIo>& incoming,
                                  RandomTape& tape) override;
  Bytes canonical_state() const override;

 private:
  const BatchMechanism* mech_;
  SortedDict dict_;
  std::optional<Bytes> out_;
  bool halted_ = false;
};

}  // namespace delaudit
