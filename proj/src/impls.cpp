#include "delaudit/impls.hpp"

#include "delaudit/tree_counter.hpp"

namespace delaudit {

Bytes SortedDict::apply(const Op& op) {
  if (op.kind == kOpInsert) {
    entries_[op.id] = top_value();
    return bot_output();
  }
  if (op.kind == kOpSet) {
    entries_[op.id] = op.value;
    return bot_output();
  }
  if (op.kind == kOpDelete) {
    entries_.erase(op.id);
    return bot_output();
  }
  if (op.kind == kOpGet) {
    auto it = entries_.find(op.id);
    if (it != entries_.end()) return enc::pair("v", it->second);
    return bot_output();
  }
  return bot_output();
}

std::pair<Bytes, std::vector<Bytes>> apply_sequence(const ImplFactory& make, const OpSeq& seq,
                                                    RandomTape& tape) {
  auto impl = make();
  std::vector<Bytes> outputs;
  auto init = impl->init_output(tape);
  if (init) outputs.push_back(*init);
  for (const auto& op : seq) outputs.push_back(impl->step(op, tape));
  return {impl->physical_state(), std::move(outputs)};
}

std::optional<Bytes> LeakyDictImpl::init_output(RandomTape& tape) {
  leaked_.clear();
  for (int i = 0; i < leak_bits_; ++i) leaked_.push_back(tape.next_bit() ? '1' : '0');
  return leaked_;
}

Bytes LeakyDictImpl::step(const Op& op, RandomTape&) {
  if (mode_ == Mode::kWaiting) {
    mode_ = (op.kind == kOpInsert && op.id == leaked_) ? Mode::kLogging : Mode::kInert;
  }
  if (mode_ == Mode::kLogging) log_.push_back(op);
  return bot_output();
}

Bytes LeakyDictImpl::physical_state() const {
  Bytes out;
  if (mode_ == Mode::kLogging) {
    enc::put_bytes(out, "log");
    std::vector<Bytes> items;
    for (const auto& op : log_) items.push_back(op.encode());
    out += enc::list(items);
  } else {
    enc::put_bytes(out, "r");
    enc::put_bytes(out, leaked_);
  }
  return out;
}

Bytes BatchCountImpl::step(const Op& op, RandomTape& tape) {
  if (out_.has_value()) return enc::i64(*out_);  // post-tick: answer never changes
  if (op.kind == kOpTick) {
    int64_t z = noise_->sample(tape);
    out_ = static_cast<int64_t>(dict_.size()) + z;
    dict_.clear();
    return enc::i64(*out_);
  }
  dict_.apply(op);
  return bot_output();
}

Bytes BatchCountImpl::physical_state() const {
  Bytes out;
  enc::put_bytes(out, out_ ? enc::i64(*out_) : Bytes());
  out += dict_.canonical_bytes();
  return out;
}

TapeLayout BatchCountImpl::layout(const NoisePtr& noise) {
  TapeLayout l;
  l.segments.push_back(TapeSegment::draw(noise));
  return l;
}

Bytes BulletinListImpl::step(const Op& op, RandomTape&) {
  static const BulletinAdt adt;
  if (!inited_) {
    state_ = adt.initial_state();
    inited_ = true;
  }
  auto [next, out] = adt.transition(op, state_);
  state_ = std::move(next);
  return out;
}

namespace {

const DictionaryAdt kDictAdt;
const BulletinAdt kBulletinAdt;

class DirectoryCounterImpl : public ImplInstance {
 public:
  DirectoryCounterImpl(std::shared_ptr<const MechanismSpec> mech) : spec_(std::move(mech)) {}

  std::optional<Bytes> init_output(RandomTape& tape) override {
    mech_ = spec_->make();
    mech_->init(tape);
    return std::nullopt;
  }

  Bytes step(const Op& op, RandomTape& tape) override {
    if (op.kind == kOpSet) {
      directory_.apply(op);
      return bot_output();
    }
    if (op.kind == kOpGet) {
      if (!users_.contains(op.id)) {
        users_.apply(Op{kOpSet, op.id, Bytes(1, '\x01')});
        mech_->process(Op{kOpFeed, op.id, Bytes(1, '\x01')}, tape);
      }
      return directory_.apply(op);
    }
    if (op.kind == kOpDelete) {
      directory_.apply(op);
      users_.apply(op);
      return bot_output();
    }
    if (op.kind == "getCount") {
      return mech_->process(Op{kOpTick, {}, {}}, tape);
    }
    return bot_output();
  }

  Bytes physical_state() const override {
    Bytes out;
    enc::put_bytes(out, mech_ ? mech_->state_bytes() : Bytes());
    enc::put_bytes(out, users_.canonical_bytes());
    out += directory_.canonical_bytes();
    return out;
  }

 private:
  std::shared_ptr<const MechanismSpec> spec_;
  std::unique_ptr<OnlineMechanism> mech_;
  SortedDict directory_;
  SortedDict users_;
};

}  // namespace

ImplSpec sorted_list_dict_spec() {
  return ImplSpec{"sorted-list-dict", [] { return std::make_unique<SortedListDictImpl>(); },
                  TapeLayout::empty(), &kDictAdt};
}

ImplSpec leaky_dict_spec(int leak_bits) {
  return ImplSpec{"leaky-dict",
                  [leak_bits] { return std::make_unique<LeakyDictImpl>(leak_bits); },
                  LeakyDictImpl::layout(leak_bits), &kDictAdt};
}

ImplSpec batch_count_spec(const NoisePtr& noise) {
  return ImplSpec{"batch-count", [noise] { return std::make_unique<BatchCountImpl>(noise); },
                  BatchCountImpl::layout(noise), &kDictAdt};
}

ImplSpec bulletin_list_spec() {
  return ImplSpec{"bulletin-list", [] { return std::make_unique<BulletinListImpl>(); },
                  TapeLayout::empty(), &kBulletinAdt};
}

ImplSpec directory_counter_spec(int horizon, double eps, int bound, int draw_width) {
  auto mech = std::make_shared<const MechanismSpec>(
      TreeCounterMechanism::spec(horizon, eps, bound, draw_width));
  return ImplSpec{"directory-counter",
                  [mech] { return std::make_unique<DirectoryCounterImpl>(mech); },
                  mech->layout, &kDictAdt};
}

}  // namespace delaudit
