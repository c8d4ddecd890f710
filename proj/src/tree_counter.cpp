#include "delaudit/tree_counter.hpp"

#include <algorithm>
#include <cmath>

#include "delaudit/errors.hpp"

namespace delaudit {

double TreeCounterMechanism::node_eps(int horizon, double eps) {
  int levels = horizon <= 1 ? 1 : static_cast<int>(std::ceil(std::log2(horizon))) + 1;
  return eps / (2.0 * levels);
}

std::vector<TreeCounterMechanism::Node> TreeCounterMechanism::decomposition(int t) {
  // Greedy largest-first dyadic blocks covering [1, t].
  std::vector<Node> nodes;
  int start = 1;
  int remaining = t;
  while (remaining > 0) {
    int len = 1;
    while (len * 2 <= remaining) len *= 2;
    nodes.push_back(Node{start, len});
    start += len;
    remaining -= len;
  }
  return nodes;
}

std::vector<TreeCounterMechanism::Node> TreeCounterMechanism::needed_nodes(int horizon) {
  std::vector<Node> all;
  for (int t = 1; t <= horizon; ++t) {
    for (const auto& n : decomposition(t)) all.push_back(n);
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end(),
                        [](const Node& a, const Node& b) {
                          return a.start == b.start && a.length == b.length;
                        }),
            all.end());
  return all;
}

TreeCounterMechanism::TreeCounterMechanism(int horizon, double eps, int bound, int draw_width)
    : horizon_(horizon),
      noise_(std::make_shared<TruncatedGeometricNoise>(node_eps(horizon, eps), bound,
                                                       draw_width)) {
  if (horizon < 1) throw ParameterError("tree counter horizon must be >= 1");
}

void TreeCounterMechanism::open_nodes_for_period(int period, RandomTape& tape) {
  // Accumulators start at their init noise: the stored value never separates
  // signal from noise, which is what survives an intrusion.
  auto nodes = needed_nodes(horizon_);
  for (const auto& n : nodes) {
    if (n.start == period) accumulators_.emplace_back(n, noise_->sample(tape));
  }
}

void TreeCounterMechanism::init(RandomTape& tape) { open_nodes_for_period(1, tape); }

Bytes TreeCounterMechanism::process(const Op& op, RandomTape& tape) {
  if (done_) return bot_output();
  if (op.kind == kOpTick) {
    ++ticks_;
    int64_t out = noise_->sample(tape);  // release noise
    for (const auto& n : decomposition(ticks_)) {
      for (const auto& [node, acc] : accumulators_) {
        if (node.start == n.start && node.length == n.length) out += acc;
      }
    }
    if (ticks_ >= horizon_) {
      done_ = true;
    } else {
      open_nodes_for_period(ticks_ + 1, tape);
    }
    return enc::i64(out);
  }
  if (op.kind == kOpFeed) {
    int64_t x = op.value.empty() ? 0 : static_cast<unsigned char>(op.value[0]);
    int period = ticks_ + 1;
    for (auto& [node, acc] : accumulators_) {
      if (node.start <= period && period < node.start + node.length) acc += x;
    }
    return bot_output();
  }
  return bot_output();
}

Bytes TreeCounterMechanism::state_bytes() const {
  Bytes out;
  enc::put_u64(out, horizon_);
  enc::put_u64(out, ticks_);
  out.push_back(done_ ? '\x01' : '\x00');
  enc::put_u64(out, accumulators_.size());
  for (const auto& [node, acc] : accumulators_) {
    enc::put_u64(out, node.start);
    enc::put_u64(out, node.length);
    enc::put_i64(out, acc);
  }
  return out;
}

TapeLayout TreeCounterMechanism::layout(int horizon, double eps, int bound, int draw_width) {
  auto noise = std::make_shared<TruncatedGeometricNoise>(node_eps(horizon, eps), bound,
                                                         draw_width);
  auto nodes = needed_nodes(horizon);
  TapeLayout l;
  auto add_period_nodes = [&](int period) {
    for (const auto& n : nodes) {
      if (n.start == period) l.segments.push_back(TapeSegment::draw(noise));
    }
  };
  add_period_nodes(1);
  for (int t = 1; t <= horizon; ++t) {
    l.segments.push_back(TapeSegment::draw(noise));  // release draw at tick t
    if (t < horizon) add_period_nodes(t + 1);
  }
  return l;
}

MechanismSpec TreeCounterMechanism::spec(int horizon, double eps, int bound, int draw_width) {
  TapeLayout l = layout(horizon, eps, bound, draw_width);
  double deficit = 0;
  for (const auto& seg : l.segments) deficit += seg.noise->tail_deficit();
  return MechanismSpec{
      "tree-counter",
      [=] { return std::make_unique<TreeCounterMechanism>(horizon, eps, bound, draw_width); },
      l, deficit};
}

}  // namespace delaudit
