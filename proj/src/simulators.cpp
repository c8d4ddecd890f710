#include "delaudit/simulators.hpp"

#include "delaudit/errors.hpp"

namespace delaudit {

Bytes encode_query_seq(const QuerySeq& q_e) {
  std::vector<Bytes> items;
  items.reserve(q_e.size());
  for (const auto& io : q_e) items.push_back(enc::pair(io.channel.token, io.msg.encode()));
  return enc::list(items);
}

ExactContext::ExactContext(const ControllerSpec* ctrl, uint64_t max_steps,
                           uint64_t enumeration_cap)
    : ctrl_(ctrl), max_steps_(max_steps) {
  uint64_t size = ctrl_->layout.space_size(enumeration_cap);
  vectors_.reserve(size);
  weights_.reserve(size);
  LayoutEnumerator en(ctrl_->layout);
  DrawVector v;
  while (en.next(&v)) {
    vectors_.push_back(v);
    weights_.push_back(ctrl_->layout.weight(v));
  }
}

size_t ExactContext::index_of(const DrawVector& v) const {
  size_t idx = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    idx = idx * ctrl_->layout.segments[i].domain_size() + v[i];
  }
  return idx;
}

const std::vector<Bytes>& ExactContext::ideal_states(const QuerySeq& q_e) {
  Bytes key = encode_query_seq(q_e);
  auto it = ideal_cache_.find(key);
  if (it != ideal_cache_.end()) return it->second;
  std::vector<Bytes> states;
  states.reserve(vectors_.size());
  for (const auto& v : vectors_) {
    RandomTape tape = ctrl_->layout.tape_for(v);
    auto outcome = run_ideal(ctrl_->make, q_e, tape, max_steps_);
    states.push_back(outcome.controller_state.value_or(Bytes("\x00BOTTOM", 7)));
  }
  return ideal_cache_.emplace(std::move(key), std::move(states)).first->second;
}

const std::map<Bytes, std::vector<size_t>>& ExactContext::ideal_state_groups(
    const QuerySeq& q_e) {
  Bytes key = encode_query_seq(q_e);
  auto it = group_cache_.find(key);
  if (it != group_cache_.end()) return it->second;
  const auto& states = ideal_states(q_e);
  std::map<Bytes, std::vector<size_t>> groups;
  for (size_t i = 0; i < states.size(); ++i) groups[states[i]].push_back(i);
  return group_cache_.emplace(std::move(key), std::move(groups)).first->second;
}

namespace {

class IdentitySimulator : public Simulator {
 public:
  std::string name() const override { return "identity"; }
  SimSample sample(const QuerySeq&, const RandomTape& real_tape, const Bytes&,
                   Rng&) override {
    return SimSample{real_tape.rewound(), false, false};
  }
  ExactLaw exact_law(const QuerySeq&, size_t real_index, const Bytes&,
                     ExactContext&) override {
    return ExactLaw{{{real_index, Rat(1)}}, false};
  }
};

class XorAnalyticSimulator : public Simulator {
 public:
  explicit XorAnalyticSimulator(int k) : k_(k) {}
  std::string name() const override { return "xor_analytic"; }

  SimSample sample(const QuerySeq& q_e, const RandomTape& real_tape, const Bytes& state,
                   Rng&) override {
    auto bits = prime_bits(q_e, state);
    if (!bits) return SimSample{real_tape.rewound(), true, false};
    return SimSample{RandomTape::from_bits(*bits, real_tape.seed()), false, false};
  }

  ExactLaw exact_law(const QuerySeq& q_e, size_t real_index, const Bytes& state,
                     ExactContext& ctx) override {
    auto bits = prime_bits(q_e, state);
    if (!bits) return ExactLaw{{{real_index, Rat(1)}}, true};
    DrawVector v{0};
    uint64_t packed = 0;
    for (bool b : *bits) packed = (packed << 1) | (b ? 1 : 0);
    v[0] = static_cast<uint32_t>(packed);
    return ExactLaw{{{ctx.index_of(v), Rat(1)}}, false};
  }

 private:
  // state XOR x_E, as tape bits; nullopt when the state is bottom-like.
  std::optional<std::vector<bool>> prime_bits(const QuerySeq& q_e, const Bytes& state) const {
    const size_t packed_len = (k_ + 7) / 8;
    // canonical_state is enc::pair(u64 k, packed bits).
    if (state.size() != 8 + 8 + 8 + packed_len) return std::nullopt;
    Bytes packed = state.substr(state.size() - packed_len);
    std::vector<bool> bits(k_);
    for (int b = 0; b < k_; ++b) bits[b] = (packed[b / 8] >> (7 - b % 8)) & 1;
    for (const auto& io : q_e) {
      if (io.msg.kind != MsgKind::kData) continue;
      const Bytes& p = io.msg.payload;
      if (p.size() != packed_len) continue;
      bool well_formed = true;
      for (size_t b = k_; b < p.size() * 8; ++b) {
        if ((p[b / 8] >> (7 - b % 8)) & 1) well_formed = false;
      }
      if (!well_formed) continue;
      for (int b = 0; b < k_; ++b) {
        bool bit = (p[b / 8] >> (7 - b % 8)) & 1;
        bits[b] = bits[b] != bit;
      }
    }
    return bits;
  }

  int k_;
};

class DefaultSimulator : public Simulator {
 public:
  DefaultSimulator(const ControllerSpec* ctrl, uint64_t max_steps, uint64_t attempt_cap)
      : ctrl_(ctrl), max_steps_(max_steps), attempt_cap_(attempt_cap) {}
  std::string name() const override { return "default"; }

  SimSample sample(const QuerySeq& q_e, const RandomTape& real_tape, const Bytes& state,
                   Rng& rng) override {
    for (uint64_t attempt = 0; attempt < attempt_cap_; ++attempt) {
      RandomTape candidate(rng.next(), ctrl_->layout.total_bits());
      auto outcome = run_ideal(ctrl_->make, q_e, candidate, max_steps_);
      if (outcome.controller_state && *outcome.controller_state == state) {
        return SimSample{candidate, false, false};
      }
    }
    // Unknown whether the event is empty: conservative inconclusive flag.
    return SimSample{real_tape.rewound(), false, true};
  }

  ExactLaw exact_law(const QuerySeq& q_e, size_t real_index, const Bytes& state,
                     ExactContext& ctx) override {
    Bytes key = enc::pair(encode_query_seq(q_e), state);
    auto hit = cache_.find(key);
    if (hit == cache_.end()) {
      const auto& groups = ctx.ideal_state_groups(q_e);
      auto atoms = std::make_shared<std::vector<std::pair<size_t, Rat>>>();
      auto group = groups.find(state);
      if (group != groups.end()) {
        Rat event_mass(0);
        for (size_t i : group->second) {
          atoms->emplace_back(i, ctx.weight(i));
          event_mass += ctx.weight(i);
        }
        for (auto& [i, m] : *atoms) m = m / event_mass;
      }
      hit = cache_.emplace(std::move(key), std::move(atoms)).first;
    }
    if (hit->second->empty()) {
      // Def-style fallback: return the real tape itself.
      return ExactLaw{{{real_index, Rat(1)}}, true};
    }
    return ExactLaw{*hit->second, false};
  }

 private:
  const ControllerSpec* ctrl_;
  uint64_t max_steps_;
  uint64_t attempt_cap_;
  std::map<Bytes, std::shared_ptr<std::vector<std::pair<size_t, Rat>>>> cache_;
};

class BatchSimulator : public Simulator {
 public:
  BatchSimulator(const ControllerSpec* ctrl, uint64_t, uint64_t) : ctrl_(ctrl) {
    if (!ctrl->batch_mech) throw ParameterError("batch_simulator needs a batch controller");
  }
  std::string name() const override { return "batch"; }

  SimSample sample(const QuerySeq& q_e, const RandomTape& real_tape, const Bytes& state,
                   Rng& rng) override {
    if (!has_tick(q_e)) return SimSample{real_tape.rewound(), false, false};
    auto draws = tick_branch(q_e, state);
    if (!draws) {
      // Empty conditional event: uniform fresh tape, flagged.
      return SimSample{RandomTape(rng.next(), ctrl_->layout.total_bits()), true, false};
    }
    // Uniform over the draw's fiber: pick a uniform representative.
    const auto& noise = ctrl_->layout.segments[0].noise;
    int64_t z = int64_t((*draws)[0]) - noise->bound();
    uint64_t u = noise->fiber_begin(z) + rng.below(noise->count_of(z));
    std::vector<bool> bits;
    for (int i = noise->draw_width() - 1; i >= 0; --i) bits.push_back((u >> i) & 1);
    return SimSample{RandomTape::from_bits(bits, rng.next()), false, false};
  }

  ExactLaw exact_law(const QuerySeq& q_e, size_t real_index, const Bytes& state,
                     ExactContext& ctx) override {
    if (!has_tick(q_e)) return ExactLaw{{{real_index, Rat(1)}}, false};
    auto draws = tick_branch(q_e, state);
    if (!draws) {
      // Uniform over the whole tape space.
      ExactLaw law;
      law.fallback = true;
      law.atoms.reserve(ctx.space());
      for (size_t i = 0; i < ctx.space(); ++i) law.atoms.emplace_back(i, ctx.weight(i));
      return law;
    }
    return ExactLaw{{{ctx.index_of(*draws), Rat(1)}}, false};
  }

 private:
  static bool has_tick(const QuerySeq& q_e) {
    for (const auto& io : q_e) {
      if (io.msg.kind == MsgKind::kTick) return true;
    }
    return false;
  }

  // Ideal dataset at tick time, from the pre-tick dictionary traffic.
  std::optional<DrawVector> tick_branch(const QuerySeq& q_e, const Bytes& state) const {
    SortedDict dict;
    for (const auto& io : q_e) {
      if (io.msg.kind == MsgKind::kTick) break;
      if (io.msg.kind == MsgKind::kDelete) {
        dict.apply(Op{kOpDelete, io.channel.token, {}});
      } else if (io.msg.kind == MsgKind::kData) {
        if (auto wire = decode_wire_op(io.msg.payload)) {
          dict.apply(Op{wire->kind, io.channel.token, wire->arg(0)});
        }
      }
    }
    // canonical_state is enc::bytes(out) followed by the dictionary bytes.
    if (state.size() < 8) return std::nullopt;
    uint64_t out_len = 0;
    for (int i = 0; i < 8; ++i) out_len = (out_len << 8) | static_cast<unsigned char>(state[i]);
    Bytes out = state.substr(8, out_len);
    auto preimages = ctrl_->batch_mech->preimage(dict.entries(), out);
    if (preimages.empty()) return std::nullopt;
    return preimages.front();
  }

  const ControllerSpec* ctrl_;
};

class PairedSimulator : public Simulator {
 public:
  PairedSimulator(const ControllerSpec* composed, uint64_t max_steps, uint64_t attempt_cap)
      : ctrl_(composed), max_steps_(max_steps), attempt_cap_(attempt_cap) {
    if (!composed->split_segment) {
      throw ParameterError("paired_simulator needs a parallel composition");
    }
    split_ = *composed->split_segment;
  }
  std::string name() const override { return "paired"; }

  SimSample sample(const QuerySeq& q_e, const RandomTape& real_tape, const Bytes& state,
                   Rng& rng) override {
    // Identity on the second half: keep the real tape's suffix region bits.
    uint64_t bits0 = 0;
    for (size_t i = 0; i < split_; ++i) bits0 += ctrl_->layout.segments[i].bit_width();
    Bytes state0 = first_component(state);
    for (uint64_t attempt = 0; attempt < attempt_cap_; ++attempt) {
      RandomTape candidate = real_tape.rewound();
      RandomTape fresh(rng.next(), bits0);
      for (uint64_t b = 0; b < bits0; ++b) candidate.set_override(b, fresh.peek_bit(b));
      auto outcome = run_ideal(ctrl_->make, q_e, candidate, max_steps_);
      if (outcome.controller_state && first_component(*outcome.controller_state) == state0) {
        return SimSample{candidate, false, false};
      }
    }
    return SimSample{real_tape.rewound(), false, true};
  }

  ExactLaw exact_law(const QuerySeq& q_e, size_t real_index, const Bytes& state,
                     ExactContext& ctx) override {
    const auto& vectors = ctx.vectors();
    const DrawVector& real_v = vectors[real_index];
    Bytes qe_key = encode_query_seq(q_e);
    auto grouped = grouped_cache_.find(qe_key);
    if (grouped == grouped_cache_.end()) {
      // One pass: group draw indices by (projected state, identity suffix).
      const auto& states = ctx.ideal_states(q_e);
      std::map<Bytes, std::vector<size_t>> groups;
      for (size_t i = 0; i < states.size(); ++i) {
        groups[group_key(first_component(states[i]), vectors[i])].push_back(i);
      }
      grouped = grouped_cache_.emplace(std::move(qe_key), std::move(groups)).first;
    }

    Bytes gkey = group_key(first_component(state), real_v);
    Bytes key = enc::pair(grouped->first, gkey);
    auto law = law_cache_.find(key);
    if (law == law_cache_.end()) {
      auto atoms = std::make_shared<std::vector<std::pair<size_t, Rat>>>();
      auto group = grouped->second.find(gkey);
      if (group != grouped->second.end()) {
        Rat event_mass(0);
        for (size_t i : group->second) {
          atoms->emplace_back(i, ctx.weight(i));
          event_mass += ctx.weight(i);
        }
        for (auto& [i, m] : *atoms) m = m / event_mass;
      }
      law = law_cache_.emplace(std::move(key), std::move(atoms)).first;
    }
    if (law->second->empty()) return ExactLaw{{{real_index, Rat(1)}}, true};
    return ExactLaw{*law->second, false};
  }

 private:
  static Bytes first_component(const Bytes& pair_state) {
    if (pair_state.size() < 8) return pair_state;
    uint64_t len = 0;
    for (int i = 0; i < 8; ++i) len = (len << 8) | static_cast<unsigned char>(pair_state[i]);
    if (8 + len > pair_state.size()) return pair_state;
    return pair_state.substr(8, len);
  }

  Bytes group_key(const Bytes& state0, const DrawVector& v) const {
    Bytes suffix;
    for (size_t s = split_; s < v.size(); ++s) enc::put_u64(suffix, v[s]);
    return enc::pair(state0, suffix);
  }

  const ControllerSpec* ctrl_;
  uint64_t max_steps_;
  uint64_t attempt_cap_;
  size_t split_;
  std::map<Bytes, std::map<Bytes, std::vector<size_t>>> grouped_cache_;
  std::map<Bytes, std::shared_ptr<std::vector<std::pair<size_t, Rat>>>> law_cache_;
};

}  // namespace

SimulatorPtr identity_simulator() { return std::make_unique<IdentitySimulator>(); }

SimulatorPtr xor_analytic_simulator(int k_bits) {
  return std::make_unique<XorAnalyticSimulator>(k_bits);
}

SimulatorPtr default_simulator(const ControllerSpec* ctrl, uint64_t max_steps,
                               uint64_t attempt_cap) {
  return std::make_unique<DefaultSimulator>(ctrl, max_steps, attempt_cap);
}

SimulatorPtr batch_simulator(const ControllerSpec* ctrl, uint64_t max_steps,
                             uint64_t attempt_cap) {
  return std::make_unique<BatchSimulator>(ctrl, max_steps, attempt_cap);
}

SimulatorPtr paired_simulator(const ControllerSpec* composed, uint64_t max_steps,
                              uint64_t attempt_cap) {
  return std::make_unique<PairedSimulator>(composed, max_steps, attempt_cap);
}

SimulatorPtr make_simulator(const std::string& name, const ControllerSpec* ctrl,
                            uint64_t max_steps, uint64_t attempt_cap) {
  if (name == "identity") return identity_simulator();
  if (name == "default") return default_simulator(ctrl, max_steps, attempt_cap);
  if (name == "batch") return batch_simulator(ctrl, max_steps, attempt_cap);
  if (name == "paired") return paired_simulator(ctrl, max_steps, attempt_cap);
  if (name == "xor_analytic") {
    int k = static_cast<int>(ctrl->layout.total_bits());
    return xor_analytic_simulator(k);
  }
  throw ConfigError("unknown simulator: " + name);
}

}  // namespace delaudit
