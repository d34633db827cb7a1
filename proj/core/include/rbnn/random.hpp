#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace rbnn {

// Deterministic random source built on the Philox 4x64-10 counter-based
// generator. A stream is fully identified by (seed, stream_id): the generator
// output is a pure function of (seed, stream_id, counter), so two sources
// constructed with the same pair replay the same sequence, and sources with
// distinct stream ids produce unrelated sequences (distinct Philox keys).
//
// Child streams: child(k) keeps the seed and derives the child stream id as
//
//   mix64(stream_id, k) = finalize(stream_id + 0x9E3779B97F4A7C15 * (k + 1))
//
// where finalize is the SplitMix64 avalanche (xor-shift-multiply) stage. The
// rule is stateless and repeatable; derived ids are uniformly spread over the
// 64-bit stream space, so unequal (parent, k) pairs collide only with
// birthday-bound probability. Sources are single-owner: share work across
// threads by handing each worker its own child, never by sharing a source.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Derives an independent child stream; does not disturb this source.
  RandomSource child(std::uint64_t key) const;

  // Uniform random 64-bit word.
  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform();

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  // Uniform integer in [0, n), n > 0; unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t n);

  // Standard normal draw (Box-Muller, one value cached per pair).
  double normal();

  void fill_normal(std::span<double> out);

  // Uniformly random permutation of {0, ..., n-1} (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;           // Philox counter, one block = 4 outputs
  std::array<std::uint64_t, 4> buf_{};
  int buf_pos_ = 4;                   // exhausted; refill on first use
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace rbnn
