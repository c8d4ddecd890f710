#pragma once

#include <cstdint>
#include <vector>

#include "delaudit/noise.hpp"
#include "delaudit/rational.hpp"
#include "delaudit/tape.hpp"

namespace delaudit {

// Declared shape of a party's tape consumption, segment by segment. Exact
// audits enumerate draw vectors over this layout instead of raw bit vectors:
// draws with equal values are exchangeable (the consuming code only sees the
// decoded value), so laws over draw vectors capture laws over tapes exactly.
struct TapeSegment {
  int raw_bits = 0;  // used when noise is null
  NoisePtr noise;

  uint64_t domain_size() const;
  uint64_t bit_width() const;
  Rat weight(uint64_t value) const;
  // Representative bit pattern for a value (the first draw in its fiber).
  void append_bits(std::vector<bool>* out, uint64_t value) const;

  static TapeSegment raw(int bits) { return TapeSegment{bits, nullptr}; }
  static TapeSegment draw(NoisePtr n) { return TapeSegment{0, std::move(n)}; }
};

using DrawVector = std::vector<uint32_t>;

struct TapeLayout {
  std::vector<TapeSegment> segments;

  uint64_t total_bits() const;
  // Number of draw vectors; throws EnumerationCapError beyond `cap`.
  uint64_t space_size(uint64_t cap) const;
  Rat weight(const DrawVector& v) const;
  std::vector<bool> bits_for(const DrawVector& v) const;
  RandomTape tape_for(const DrawVector& v, uint64_t seed = 0) const;
  Bytes key_of(const DrawVector& v) const;
  DrawVector draws_of_tape(const RandomTape& tape) const;

  static TapeLayout empty() { return {}; }
  static TapeLayout raw(int bits);
  static TapeLayout concat(const TapeLayout& a, const TapeLayout& b);
};

// Odometer over the layout's draw space.
class LayoutEnumerator {
 public:
  explicit LayoutEnumerator(const TapeLayout& layout);
  // Fills *v with the next vector; false once exhausted.
  bool next(DrawVector* v);

 private:
  const TapeLayout& layout_;
  DrawVector current_;
  bool started_ = false;
  bool done_ = false;
};

}  // namespace delaudit
