#include "delaudit/pan_privacy.hpp"

#include <unordered_map>

#include "delaudit/errors.hpp"

namespace delaudit {

const char* pp_side_name(PpSide s) { return s == PpSide::kIn ? "in" : "out"; }

static const char* code_name(PpQuery::Code c) {
  switch (c) {
    case PpQuery::Code::kRegular:
      return "regular";
    case PpQuery::Code::kIntrusion:
      return "intrusion";
    case PpQuery::Code::kChallenge:
      return "challenge";
    case PpQuery::Code::kEnd:
      return "end";
  }
  return "?";
}

Bytes PpView::view_bytes() const {
  Bytes out;
  enc::put_bytes(out, "");  // deterministic adversaries: empty randomness
  std::vector<Bytes> items;
  for (const auto& [q, resp] : transcript) {
    Bytes item;
    enc::put_bytes(item, code_name(q.code));
    enc::put_bytes(item, q.op.encode());
    enc::put_bytes(item, resp);
    items.push_back(std::move(item));
  }
  out += enc::list(items);
  out.push_back(halted_by_assert ? '\x01' : '\x00');
  return out;
}

PpView run_pp_game(const MechanismSpec& mech, const PpAdversaryFactory& adversary,
                   PpSide side, const RandomTape& mech_tape, uint64_t op_bound) {
  PpView view;
  RandomTape tape = mech_tape.rewound();
  auto m = mech.make();
  m->init(tape);
  auto adv = adversary();

  bool intruded = false;
  bool challenged = false;
  Bytes last = bot_output();
  uint64_t steps = 0;
  while (true) {
    if (++steps > op_bound) throw InvalidAdversaryError("pp adversary exceeded the op bound");
    PpQuery q = adv->next(last);
    if (q.code == PpQuery::Code::kEnd) break;

    Bytes response;
    if (q.code == PpQuery::Code::kIntrusion) {
      if (intruded) {
        view.halted_by_assert = true;
        view.transcript.emplace_back(q, Bytes("assert"));
        break;
      }
      intruded = true;
      response = m->state_bytes();
    } else if (q.code == PpQuery::Code::kChallenge) {
      if (challenged || q.op.kind == kOpTick) {
        view.halted_by_assert = true;
        view.transcript.emplace_back(q, Bytes("assert"));
        break;
      }
      challenged = true;
      if (side == PpSide::kIn) m->process(q.op, tape);  // response is bot by assumption
      response = bot_output();
    } else {
      response = m->process(q.op, tape);
    }
    view.transcript.emplace_back(q, response);
    last = response;
  }
  return view;
}

ClosenessReport audit_pp(const MechanismSpec& mech, const PpAdversaryFactory& adversary,
                         double eps, double delta, const PpAuditOptions& opt) {
  if (opt.exact) {
    mech.layout.space_size(opt.enumeration_cap);
    std::unordered_map<Bytes, Rat> in_atoms, out_atoms;
    LayoutEnumerator en(mech.layout);
    DrawVector v;
    while (en.next(&v)) {
      Rat w = mech.layout.weight(v);
      RandomTape tape = mech.layout.tape_for(v);
      in_atoms[run_pp_game(mech, adversary, PpSide::kIn, tape, opt.op_bound).view_bytes()] += w;
      out_atoms[run_pp_game(mech, adversary, PpSide::kOut, tape, opt.op_bound).view_bytes()] +=
          w;
    }
    std::vector<std::pair<Bytes, Rat>> ia(in_atoms.begin(), in_atoms.end());
    std::vector<std::pair<Bytes, Rat>> oa(out_atoms.begin(), out_atoms.end());
    return check_indisting(FinitePmf::from_atoms(std::move(ia)),
                           FinitePmf::from_atoms(std::move(oa)), eps, delta);
  }

  uint64_t bits = mech.layout.total_bits();
  auto sampler = [&](PpSide side) {
    return [&, side](Rng& rng) {
      RandomTape tape(rng.next(), bits);
      return run_pp_game(mech, adversary, side, tape, opt.op_bound).view_bytes();
    };
  };
  EstimateOptions eo;
  eo.trials = opt.trials;
  eo.confidence = opt.confidence;
  eo.seed = opt.seed;
  return estimate_indisting(sampler(PpSide::kIn), sampler(PpSide::kOut), eps, delta, eo);
}

namespace {

class ScriptedPpAdversary : public PpAdversary {
 public:
  explicit ScriptedPpAdversary(std::vector<PpQuery> script) : script_(std::move(script)) {}
  PpQuery next(const Bytes&) override {
    if (next_ >= script_.size()) return PpQuery{};
    return script_[next_++];
  }

 private:
  std::vector<PpQuery> script_;
  size_t next_ = 0;
};

}  // namespace

PpAdversaryFactory scripted_pp_adversary(std::vector<PpQuery> script) {
  return [script = std::move(script)] { return std::make_unique<ScriptedPpAdversary>(script); };
}

PpAdversaryFactory tracing_pp_adversary(int ticks) {
  std::vector<PpQuery> script;
  script.push_back(
      PpQuery{PpQuery::Code::kChallenge, Op{kOpFeed, Bytes("y"), Bytes(1, '\x01')}});
  script.push_back(PpQuery{PpQuery::Code::kRegular, Op{kOpTick, {}, {}}});
  script.push_back(PpQuery{PpQuery::Code::kIntrusion, Op{}});
  for (int t = 1; t < ticks; ++t) {
    script.push_back(PpQuery{PpQuery::Code::kRegular, Op{kOpTick, {}, {}}});
  }
  return scripted_pp_adversary(std::move(script));
}

PpAdversaryFactory double_intrusion_adversary() {
  return scripted_pp_adversary({PpQuery{PpQuery::Code::kIntrusion, Op{}},
                                PpQuery{PpQuery::Code::kRegular, Op{kOpTick, {}, {}}},
                                PpQuery{PpQuery::Code::kIntrusion, Op{}}});
}

}  // namespace delaudit
