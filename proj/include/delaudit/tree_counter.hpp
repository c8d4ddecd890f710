#pragma once

#include "delaudit/pan_privacy.hpp"

namespace delaudit {

// Binary-tree partial-sum counter with continual release. Each dyadic
// interval that ever appears in a prefix decomposition gets an accumulator
// initialized with noise when its interval begins; feeds add to every live
// accumulator; each tick releases the decomposition sum plus fresh release
// noise. Per-node noise runs at eps/(2*(ceil(log2 T)+1)), the factor 2
// covering the init and release draws. After T ticks every activation
// returns bot.
class TreeCounterMechanism : public OnlineMechanism {
 public:
  TreeCounterMechanism(int horizon, double eps, int bound, int draw_width);

  void init(RandomTape& tape) override;
  Bytes process(const Op& op, RandomTape& tape) override;
  Bytes state_bytes() const override;

  static double node_eps(int horizon, double eps);
  // Declared tape consumption: node draws in schedule order interleaved with
  // release draws, one per tick.
  static TapeLayout layout(int horizon, double eps, int bound, int draw_width);
  static MechanismSpec spec(int horizon, double eps, int bound, int draw_width);

  // Noise component of the t-th release for a given draw assignment;
  // exactness harness: out_t minus this equals the true running sum.
  struct Node {
    int start;  // periods are 1-based
    int length;
    bool operator<(const Node& o) const {
      return start != o.start ? start < o.start : length < o.length;
    }
  };
  static std::vector<Node> needed_nodes(int horizon);
  static std::vector<Node> decomposition(int t);

 private:
  int horizon_;
  NoisePtr noise_;
  int ticks_ = 0;
  bool done_ = false;
  std::vector<std::pair<Node, int64_t>> accumulators_;  // creation order

  void open_nodes_for_period(int period, RandomTape& tape);
};

}  // namespace delaudit
