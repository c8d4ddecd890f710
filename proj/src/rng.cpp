#include "delaudit/rng.hpp"

namespace delaudit {

uint64_t hash_label(uint64_t seed, const std::string& label) {
  uint64_t h = seed ^ 0xcbf29ce484222325ULL;
  for (unsigned char c : label) h = splitmix64(h ^ c);
  return h;
}

uint64_t Rng::below(uint64_t n) {
  // Rejection keeps the draw exactly uniform.
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Rng Rng::child(const std::string& label) const { return Rng(hash_label(state_, label)); }

Rng Rng::child(uint64_t index) const { return Rng(hash_combine(state_, index)); }

uint64_t Rng::derive_seed(const std::string& label) const { return hash_label(state_, label); }

}  // namespace delaudit
