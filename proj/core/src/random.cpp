#include "rbnn/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rbnn {

namespace {

// Philox 4x64 round constants (Salmon et al., "Parallel Random Numbers:
// As Easy as 1, 2, 3").
constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t* hi) {
  const unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
  *hi = static_cast<std::uint64_t>(product >> 64);
  return static_cast<std::uint64_t>(product);
}

inline std::array<std::uint64_t, 4> philox_round(std::array<std::uint64_t, 4> ctr,
                                                 std::uint64_t k0, std::uint64_t k1) {
  std::uint64_t hi0 = 0;
  std::uint64_t hi1 = 0;
  const std::uint64_t lo0 = mulhilo(kPhiloxM0, ctr[0], &hi0);
  const std::uint64_t lo1 = mulhilo(kPhiloxM1, ctr[2], &hi1);
  return {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
}

std::array<std::uint64_t, 4> philox10(std::array<std::uint64_t, 4> ctr,
                                      std::uint64_t k0, std::uint64_t k1) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    ctr = philox_round(ctr, k0, k1);
  }
  return ctr;
}

// SplitMix64 finalizer: full-avalanche 64-bit mix.
inline std::uint64_t finalize64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t stream_id, std::uint64_t key) {
  return finalize64(stream_id + kWeyl0 * (key + 1));
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {}

RandomSource RandomSource::child(std::uint64_t key) const {
  return RandomSource(seed_, mix64(stream_id_, key));
}

void RandomSource::refill() {
  buf_ = philox10({block_, 0, 0, 0}, seed_, stream_id_);
  ++block_;
  buf_pos_ = 0;
}

std::uint64_t RandomSource::next_u64() {
  if (buf_pos_ >= 4) {
    refill();
  }
  return buf_[buf_pos_++];
}

double RandomSource::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::uint64_t RandomSource::uniform_below(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_below: n must be positive");
  }
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) {
      return r % n;
    }
  }
}

double RandomSource::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

void RandomSource::fill_normal(std::span<double> out) {
  for (double& value : out) {
    value = normal();
  }
}

std::vector<std::size_t> RandomSource::permutation(std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    perm[i] = i;
  }
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace rbnn
