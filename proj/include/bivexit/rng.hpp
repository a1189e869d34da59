#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace bivexit {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Seedable random stream. Identical (seed, stream) gives an identical
// sequence; distinct stream ids give independent sequences. Not shared
// across threads: each worker derives its own child stream.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {
    std::uint64_t s = seed;
    std::uint64_t a = detail::splitmix64(s);
    s ^= stream * 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = detail::splitmix64(s);
    gen_.seed(a ^ (b << 1) ^ stream);
    // decorrelate streams with nearby seeds
    gen_.discard(8);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  RngStream child(std::uint64_t substream) const {
    std::uint64_t s = seed_ ^ (stream_ * 0x94d049bb133111ebULL);
    std::uint64_t mixed = detail::splitmix64(s);
    return RngStream(mixed, substream);
  }

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller over the uniform stream
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stable cell seed for parallel grid work: result does not depend on
// worker count or iteration order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master;
  detail::splitmix64(s);
  s ^= a * 0xff51afd7ed558ccdULL;
  detail::splitmix64(s);
  s ^= b * 0xc4ceb9fe1a85ec53ULL;
  detail::splitmix64(s);
  s ^= c * 0x2545f4914f6cdd1dULL;
  return detail::splitmix64(s);
}

}  // namespace bivexit
