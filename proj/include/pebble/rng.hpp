#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pebble {

/// Philox4x32-10 keyed counter permutation.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Deterministic splittable random stream.
///
/// A stream is identified by its master seed and a path of (label, index)
/// pairs. Output is Philox4x32-10 applied to an incrementing counter under a
/// key hashed from that path, so identical (seed, path) always replays the
/// same sequence and derive() is O(1) without touching the parent's state.
///
/// Streams are single-owner. To hand randomness to another thread, derive a
/// child and move it.
class RandomStream {
 public:
  using PathEntry = std::pair<std::string, std::uint64_t>;

  explicit RandomStream(std::uint64_t seed);

  RandomStream derive(std::string_view label, std::uint64_t index) const;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform() noexcept;
  /// Standard normal via the Marsaglia polar method.
  double next_gaussian() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t key() const noexcept { return key_; }
  const std::vector<PathEntry>& path() const noexcept { return path_; }
  std::string path_string() const;

 private:
  RandomStream(std::uint64_t seed, std::uint64_t key, std::vector<PathEntry> path);

  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t key_;
  std::vector<PathEntry> path_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> block_{};
  int block_pos_ = 2;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Parses a seed written in decimal or with a 0x hex prefix.
std::uint64_t parse_seed(std::string_view text);

}  // namespace pebble
