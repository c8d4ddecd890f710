#include "delaudit/layout.hpp"

#include "delaudit/bytes.hpp"
#include "delaudit/errors.hpp"

namespace delaudit {

uint64_t TapeSegment::domain_size() const {
  if (noise) return uint64_t(2 * noise->bound() + 1);
  return uint64_t(1) << raw_bits;
}

uint64_t TapeSegment::bit_width() const {
  if (noise) return noise->draw_width();
  return raw_bits;
}

Rat TapeSegment::weight(uint64_t value) const {
  if (noise) {
    int64_t z = int64_t(value) - noise->bound();
    return Rat::from_ratio(noise->count_of(z), uint64_t(1) << noise->draw_width());
  }
  return Rat(1, Rat::I(1) << raw_bits);
}

void TapeSegment::append_bits(std::vector<bool>* out, uint64_t value) const {
  uint64_t pattern;
  int bits;
  if (noise) {
    int64_t z = int64_t(value) - noise->bound();
    pattern = noise->fiber_begin(z);
    bits = noise->draw_width();
  } else {
    pattern = value;
    bits = raw_bits;
  }
  for (int i = bits - 1; i >= 0; --i) out->push_back((pattern >> i) & 1);
}

uint64_t TapeLayout::total_bits() const {
  uint64_t t = 0;
  for (const auto& s : segments) t += s.bit_width();
  return t;
}

uint64_t TapeLayout::space_size(uint64_t cap) const {
  uint64_t size = 1;
  for (const auto& s : segments) {
    uint64_t d = s.domain_size();
    if (size > cap / d + 1) throw EnumerationCapError("draw space exceeds enumeration cap");
    size *= d;
    if (size > cap) throw EnumerationCapError("draw space exceeds enumeration cap");
  }
  return size;
}

Rat TapeLayout::weight(const DrawVector& v) const {
  Rat w(1);
  for (size_t i = 0; i < segments.size(); ++i) w *= segments[i].weight(v[i]);
  return w;
}

std::vector<bool> TapeLayout::bits_for(const DrawVector& v) const {
  std::vector<bool> bits;
  bits.reserve(total_bits());
  for (size_t i = 0; i < segments.size(); ++i) segments[i].append_bits(&bits, v[i]);
  return bits;
}

RandomTape TapeLayout::tape_for(const DrawVector& v, uint64_t seed) const {
  return RandomTape::from_bits(bits_for(v), seed);
}

Bytes TapeLayout::key_of(const DrawVector& v) const {
  Bytes out;
  enc::put_u64(out, v.size());
  for (uint32_t x : v) enc::put_u64(out, x);
  return out;
}

DrawVector TapeLayout::draws_of_tape(const RandomTape& tape) const {
  RandomTape t = tape.rewound();
  DrawVector v;
  v.reserve(segments.size());
  for (const auto& s : segments) {
    if (s.noise) {
      uint64_t u = t.next_bits(s.noise->draw_width());
      v.push_back(uint32_t(s.noise->value_of_draw(u) + s.noise->bound()));
    } else {
      v.push_back(uint32_t(t.next_bits(s.raw_bits)));
    }
  }
  return v;
}

TapeLayout TapeLayout::raw(int bits) {
  TapeLayout l;
  if (bits > 0) l.segments.push_back(TapeSegment::raw(bits));
  return l;
}

TapeLayout TapeLayout::concat(const TapeLayout& a, const TapeLayout& b) {
  TapeLayout l = a;
  l.segments.insert(l.segments.end(), b.segments.begin(), b.segments.end());
  return l;
}

LayoutEnumerator::LayoutEnumerator(const TapeLayout& layout) : layout_(layout) {
  current_.assign(layout_.segments.size(), 0);
}

bool LayoutEnumerator::next(DrawVector* v) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    *v = current_;
    return true;
  }
  for (size_t i = current_.size(); i-- > 0;) {
    if (++current_[i] < layout_.segments[i].domain_size()) {
      *v = current_;
      return true;
    }
    current_[i] = 0;
  }
  done_ = true;
  return false;
}

}  // namespace delaudit
