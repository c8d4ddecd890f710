#include "delaudit/ahi.hpp"

#include <algorithm>
#include <unordered_map>

#include <json.hpp>

#include "delaudit/errors.hpp"

namespace delaudit {

const char* ahi_variant_name(AhiVariant v) {
  return v == AhiVariant::kIdentical ? "identical" : "fresh";
}

Bytes AhiGameRecord::view_bytes() const {
  std::vector<Bytes> seq_enc, star_enc;
  for (const auto& op : seq) seq_enc.push_back(op.encode());
  for (const auto& op : seq_star) star_enc.push_back(op.encode());
  std::vector<Bytes> outs = outputs;
  Bytes out;
  enc::put_bytes(out, init_out.value_or(Bytes()));
  out += enc::list(seq_enc);
  out += enc::list(star_enc);
  out += enc::list(outs);
  return out;
}

std::string AhiGameRecord::to_json() const {
  nlohmann::json j;
  j["seq"] = nlohmann::json::parse(opseq_to_json(seq));
  j["seq_star"] = nlohmann::json::parse(opseq_to_json(seq_star));
  j["init_out_hex"] = init_out ? to_hex(*init_out) : "";
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : outputs) outs.push_back(to_hex(o));
  j["outputs"] = outs;
  j["s_p"] = to_hex(s_p);
  j["s_p_star"] = to_hex(s_p_star);
  j["forced"] = forced;
  j["variant"] = ahi_variant_name(variant);
  return j.dump();
}

AhiGameRecord run_ahi_game(const ImplSpec& impl, const AhiAdversaryFactory& adversary,
                           AhiVariant variant, const RandomTape& tape,
                           const RandomTape& fresh_tape, uint64_t op_bound) {
  AhiGameRecord rec;
  rec.variant = variant;

  RandomTape real_tape = tape.rewound();
  auto inst = impl.make();
  auto adv = adversary();
  rec.init_out = inst->init_output(real_tape);
  adv->begin(rec.init_out);

  Bytes last = rec.init_out.value_or(Bytes());
  uint64_t ops = 0;
  while (auto op = adv->next_op(last)) {
    if (++ops > op_bound) throw InvalidAdversaryError("adversary exceeded the op bound");
    last = inst->step(*op, real_tape);
    rec.seq.push_back(*op);
    rec.outputs.push_back(last);
  }
  rec.seq_star = adv->equivalent_sequence();
  rec.s_p = inst->physical_state();

  RandomTape replay_tape =
      variant == AhiVariant::kIdentical ? tape.rewound() : fresh_tape.rewound();
  auto replay = impl.make();
  replay->init_output(replay_tape);  // replay outputs are not part of the view
  for (const auto& op : rec.seq_star) replay->step(op, replay_tape);
  rec.s_p_star = replay->physical_state();

  if (!logically_equivalent(*impl.adt, rec.seq_star, rec.seq)) {
    rec.s_p_star = rec.s_p;
    rec.forced = true;
  }
  return rec;
}

ClosenessReport audit_ahi(const ImplSpec& impl, const AhiAdversaryFactory& adversary,
                          double eps, double delta, const AhiAuditOptions& opt) {
  if (opt.exact) {
    TapeLayout space = impl.layout;
    const size_t real_segments = space.segments.size();
    if (opt.variant == AhiVariant::kFresh) space = TapeLayout::concat(space, impl.layout);
    space.space_size(opt.enumeration_cap);

    std::unordered_map<Bytes, Rat> p_atoms, q_atoms;
    LayoutEnumerator en(space);
    DrawVector v;
    while (en.next(&v)) {
      DrawVector real_v(v.begin(), v.begin() + real_segments);
      RandomTape real = impl.layout.tape_for(real_v);
      RandomTape fresh = real;
      if (opt.variant == AhiVariant::kFresh) {
        DrawVector fresh_v(v.begin() + real_segments, v.end());
        fresh = impl.layout.tape_for(fresh_v);
      }
      AhiGameRecord rec = run_ahi_game(impl, adversary, opt.variant, real, fresh, opt.op_bound);
      Rat w = space.weight(v);
      Bytes view = rec.view_bytes();
      p_atoms[enc::pair(view, rec.s_p)] += w;
      q_atoms[enc::pair(view, rec.s_p_star)] += w;
    }
    std::vector<std::pair<Bytes, Rat>> pa(p_atoms.begin(), p_atoms.end());
    std::vector<std::pair<Bytes, Rat>> qa(q_atoms.begin(), q_atoms.end());
    return check_indisting(FinitePmf::from_atoms(std::move(pa)),
                           FinitePmf::from_atoms(std::move(qa)), eps, delta);
  }

  uint64_t bits = impl.layout.total_bits();
  auto game_sampler = [&](bool star) {
    return [&, star](Rng& rng) {
      RandomTape real(rng.next(), bits);
      RandomTape fresh(rng.next(), bits);
      AhiGameRecord rec = run_ahi_game(impl, adversary, opt.variant, real, fresh, opt.op_bound);
      return enc::pair(rec.view_bytes(), star ? rec.s_p_star : rec.s_p);
    };
  };
  EstimateOptions eo;
  eo.trials = opt.trials;
  eo.confidence = opt.confidence;
  eo.seed = opt.seed;
  return estimate_indisting(game_sampler(false), game_sampler(true), eps, delta, eo);
}

namespace {

class ScriptedAdversary : public AhiAdversary {
 public:
  ScriptedAdversary(OpSeq script, OpSeq equivalent)
      : script_(std::move(script)), equivalent_(std::move(equivalent)) {}
  std::optional<Op> next_op(const Bytes&) override {
    if (next_ >= script_.size()) return std::nullopt;
    return script_[next_++];
  }
  OpSeq equivalent_sequence() const override { return equivalent_; }

 private:
  OpSeq script_, equivalent_;
  size_t next_ = 0;
};

class EchoAdversary : public AhiAdversary {
 public:
  void begin(const std::optional<Bytes>& init_output) override {
    leaked_ = init_output.value_or(Bytes());
    Bytes other = leaked_;
    if (other.empty()) {
      other = "x";
    } else {
      other.back() = other.back() == '1' ? '0' : '1';
    }
    script_ = {Op{kOpInsert, leaked_, {}}, Op{kOpInsert, other, {}}, Op{kOpDelete, other, {}}};
  }
  std::optional<Op> next_op(const Bytes&) override {
    if (next_ >= script_.size()) return std::nullopt;
    return script_[next_++];
  }
  OpSeq equivalent_sequence() const override { return {Op{kOpInsert, leaked_, {}}}; }

 private:
  Bytes leaked_;
  OpSeq script_;
  size_t next_ = 0;
};

class RandomDictAdversary : public AhiAdversary {
 public:
  RandomDictAdversary(const AdtSpec* adt, uint64_t seed, int ops)
      : adt_(adt), rng_(seed), remaining_(ops) {}
  std::optional<Op> next_op(const Bytes&) override {
    if (remaining_-- <= 0) return std::nullopt;
    static const char* kinds[] = {kOpInsert, kOpSet, kOpDelete, kOpGet};
    Op op;
    op.kind = kinds[rng_.below(4)];
    op.id = Bytes(1, static_cast<char>('a' + rng_.below(4)));
    if (op.kind == kOpSet) op.value = Bytes(1, static_cast<char>('0' + rng_.below(3)));
    seq_.push_back(op);
    return op;
  }
  OpSeq equivalent_sequence() const override { return canonicalize(*adt_, seq_); }

 private:
  const AdtSpec* adt_;
  Rng rng_;
  int remaining_;
  OpSeq seq_;
};

class ShufflingAdversary : public AhiAdversary {
 public:
  ShufflingAdversary(const AdtSpec* adt, OpSeq script, uint64_t seed)
      : adt_(adt), script_(std::move(script)), seed_(seed) {}
  std::optional<Op> next_op(const Bytes&) override {
    if (next_ >= script_.size()) return std::nullopt;
    return script_[next_++];
  }
  OpSeq equivalent_sequence() const override {
    // Random reorderings until one is logically equivalent; the canonical
    // sequence is always a fallback.
    Rng rng(seed_);
    for (int attempt = 0; attempt < 32; ++attempt) {
      OpSeq candidate = script_;
      for (size_t i = candidate.size(); i > 1; --i) {
        std::swap(candidate[i - 1], candidate[rng.below(i)]);
      }
      if (logically_equivalent(*adt_, candidate, script_)) return candidate;
    }
    return canonicalize(*adt_, script_);
  }

 private:
  const AdtSpec* adt_;
  OpSeq script_;
  uint64_t seed_;
  size_t next_ = 0;
};

}  // namespace

AhiAdversaryFactory scripted_adversary(OpSeq script, OpSeq equivalent) {
  return [script = std::move(script), equivalent = std::move(equivalent)] {
    return std::make_unique<ScriptedAdversary>(script, equivalent);
  };
}

AhiAdversaryFactory echo_adversary() {
  return [] { return std::make_unique<EchoAdversary>(); };
}

AhiAdversaryFactory random_dict_adversary(const AdtSpec* adt, uint64_t seed, int ops) {
  return [=] { return std::make_unique<RandomDictAdversary>(adt, seed, ops); };
}

AhiAdversaryFactory shuffling_adversary(const AdtSpec* adt, OpSeq script, uint64_t seed) {
  return [adt, script = std::move(script), seed] {
    return std::make_unique<ShufflingAdversary>(adt, script, seed);
  };
}

}  // namespace delaudit
