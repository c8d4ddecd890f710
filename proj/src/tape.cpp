#include "delaudit/tape.hpp"

namespace delaudit {

RandomTape RandomTape::from_bits(const std::vector<bool>& bits, uint64_t seed) {
  RandomTape t(seed, bits.size());
  for (uint64_t i = 0; i < bits.size(); ++i) t.overrides_[i] = bits[i];
  return t;
}

bool RandomTape::base_bit(uint64_t index) const {
  uint64_t abs = offset_ + index;
  uint64_t word = splitmix64(seed_ + (abs >> 6) * 0x9e3779b97f4a7c15ULL);
  return (word >> (abs & 63)) & 1;
}

bool RandomTape::peek_bit(uint64_t index) const {
  auto it = overrides_.find(offset_ + index);
  if (it != overrides_.end()) return it->second;
  return base_bit(index);
}

bool RandomTape::next_bit() {
  if (cursor_ >= budget_) {
    if (is_region_) throw TapeSplitError("sub-controller read outside its tape region");
    throw TapeBudgetError("tape budget exhausted");
  }
  bool b = peek_bit(cursor_);
  ++cursor_;
  return b;
}

uint64_t RandomTape::next_bits(int n) {
  uint64_t v = 0;
  for (int i = 0; i < n; ++i) v = (v << 1) | (next_bit() ? 1u : 0u);
  return v;
}

std::vector<bool> RandomTape::prefix_bits() const {
  std::vector<bool> out(budget_);
  for (uint64_t i = 0; i < budget_; ++i) out[i] = peek_bit(i);
  return out;
}

RandomTape RandomTape::region(uint64_t start, uint64_t length) const {
  RandomTape t;
  t.seed_ = seed_;
  t.offset_ = offset_ + start;
  t.budget_ = length;
  t.is_region_ = true;
  t.overrides_ = overrides_;
  return t;
}

RandomTape RandomTape::rewound() const {
  RandomTape t = *this;
  t.cursor_ = 0;
  return t;
}

}  // namespace delaudit
