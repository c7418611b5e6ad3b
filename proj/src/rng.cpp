#include "pebble/rng.hpp"

#include <charconv>
#include <cmath>

#include "pebble/errors.hpp"

namespace pebble {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed)
    : seed_(seed), key_(splitmix64(seed)) {}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t key,
                           std::vector<PathEntry> path)
    : seed_(seed), key_(key), path_(std::move(path)) {}

RandomStream RandomStream::derive(std::string_view label, std::uint64_t index) const {
  std::uint64_t h = splitmix64(key_ ^ 0x6A09E667F3BCC908ull);
  h = splitmix64(h ^ fnv1a(label));
  h = splitmix64(h ^ index);
  auto child_path = path_;
  child_path.emplace_back(std::string(label), index);
  return RandomStream(seed_, h, std::move(child_path));
}

void RandomStream::refill() noexcept {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(key_),
                                            static_cast<std::uint32_t>(key_ >> 32)};
  const auto out = philox4x32(ctr, key);
  block_[0] = (std::uint64_t{out[1]} << 32) | out[0];
  block_[1] = (std::uint64_t{out[3]} << 32) | out[2];
  block_pos_ = 0;
  ++counter_;
}

std::uint64_t RandomStream::next_u64() noexcept {
  if (block_pos_ >= 2) refill();
  return block_[block_pos_++];
}

double RandomStream::next_uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_gaussian() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_uniform() - 1.0;
    v = 2.0 * next_uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::string RandomStream::path_string() const {
  std::string out = std::to_string(seed_);
  for (const auto& [label, index] : path_) {
    out += '/';
    out += label;
    out += ':';
    out += std::to_string(index);
  }
  return out;
}

std::uint64_t parse_seed(std::string_view text) {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorKind::ParseError, "invalid seed '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace pebble
