#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace depnet {

// FNV-1a, used wherever a stable cross-platform string hash is needed
// (std::hash is implementation-defined and would break reproducibility).
inline uint64_t fnv1a(const std::string& s, uint64_t seed = 1469598103934665603ULL) {
  uint64_t h = seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// All randomness flows from one root seed; sub-generators are derived by
// hashing (root, purpose) so that adding a consumer never shifts another
// consumer's stream.
inline uint64_t derive_seed(uint64_t root, const std::string& purpose) {
  uint64_t h = fnv1a(purpose);
  h ^= root + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

inline uint64_t derive_seed(uint64_t root, const std::string& purpose, uint64_t n) {
  return derive_seed(root, purpose + "#" + std::to_string(n));
}

// splitmix64: tiny, fast, and bit-identical everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // uniform integer in [0, n)
  uint64_t next_below(uint64_t n) { return n ? next_u64() % n : 0; }

  // Fisher-Yates
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace depnet
