#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "delaudit/errors.hpp"
#include "delaudit/rng.hpp"

namespace delaudit {

// A finite-budget, read-once random bit stream. With no overrides, bit i is a
// pure function of (seed, i); simulators rewrite finitely many bits through
// the sparse override map, which keeps tapes comparable. The only reading API
// advances the cursor, so a bit can never be read twice.
class RandomTape {
 public:
  RandomTape() : seed_(0), budget_(0) {}
  RandomTape(uint64_t seed, uint64_t budget_bits) : seed_(seed), budget_(budget_bits) {}

  // Tape whose first bits.size() bits are fixed; budget equals bits.size().
  static RandomTape from_bits(const std::vector<bool>& bits, uint64_t seed = 0);

  bool next_bit();
  // MSB-first; n <= 64.
  uint64_t next_bits(int n);

  uint64_t cursor() const { return cursor_; }
  uint64_t budget() const { return budget_; }
  uint64_t seed() const { return seed_; }
  uint64_t remaining() const { return budget_ - cursor_; }

  void set_override(uint64_t index, bool value) { overrides_[index] = value; }
  size_t override_count() const { return overrides_.size(); }

  // Value of bit i including overrides, without touching the cursor. Harness
  // and audit machinery only; parties must use next_bit().
  bool peek_bit(uint64_t index) const;
  // Seed-derived value ignoring overrides.
  bool base_bit(uint64_t index) const;

  // The budget-bit prefix as a vector; this is the sample-space element the
  // (eps, delta) laws over tapes are defined on.
  std::vector<bool> prefix_bits() const;

  // A view over bit range [start, start+length); reads are confined to the
  // region. Used by parallel composition to hand sub-controllers disjoint
  // tape portions.
  RandomTape region(uint64_t start, uint64_t length) const;

  // Fresh copy with the cursor rewound (same seed, overrides, budget).
  RandomTape rewound() const;

 private:
  uint64_t seed_ = 0;
  uint64_t offset_ = 0;
  uint64_t budget_ = 0;
  uint64_t cursor_ = 0;
  bool is_region_ = false;
  std::map<uint64_t, bool> overrides_;  // absolute indices
};

}  // namespace delaudit
