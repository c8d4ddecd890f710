#pragma once

#include <cstdint>
#include <string>

namespace delaudit {

// splitmix64: counter-based mix, the one randomness primitive of the project.
// Every stream (tapes, trial seeds, bootstrap draws) derives from a master
// seed through child(), so runs are reproducible regardless of thread count.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) {
  return splitmix64(a ^ (0x517cc1b727220a95ULL + b));
}

uint64_t hash_label(uint64_t seed, const std::string& label);

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Uniform in [0, n) by rejection; n > 0.
  uint64_t below(uint64_t n);
  double uniform01();  // 53-bit uniform in [0,1)

  Rng child(const std::string& label) const;
  Rng child(uint64_t index) const;
  uint64_t derive_seed(const std::string& label) const;

 private:
  uint64_t state_;
};

}  // namespace delaudit
