#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "pebble/errors.hpp"
#include "pebble/rng.hpp"

using namespace pebble;

TEST_SUITE("rng") {
  TEST_CASE("philox known-answer vectors") {
    const auto zero = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(zero == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    const auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu});
    CHECK(ones == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  }

  TEST_CASE("derive is deterministic and replayable") {
    const RandomStream s(42);
    RandomStream a = s.derive("boot", 5);
    RandomStream b = s.derive("boot", 5);
    CHECK(a.key() == b.key());
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
    CHECK(a.path_string() == "42/boot:5");
  }

  TEST_CASE("deriving does not disturb the parent") {
    RandomStream s(3);
    RandomStream t(3);
    (void)s.derive("x", 1);
    CHECK(s.next_u64() == t.next_u64());
  }

  TEST_CASE("sibling and label-separated streams differ") {
    const RandomStream s(7);
    RandomStream a = s.derive("boot", 5);
    RandomStream b = s.derive("boot", 6);
    std::vector<std::uint64_t> va, vb;
    for (int i = 0; i < 10000; ++i) {
      va.push_back(a.next_u64());
      vb.push_back(b.next_u64());
    }
    std::sort(va.begin(), va.end());
    std::sort(vb.begin(), vb.end());
    std::vector<std::uint64_t> common;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
    // Expected collisions at 64 bits: 1e8 / 2^64, effectively zero.
    CHECK(common.empty());

    RandomStream la = s.derive("a", 0);
    RandomStream lb = s.derive("b", 0);
    CHECK(la.next_u64() != lb.next_u64());
    CHECK(s.derive("a", 0).derive("b", 1).key() != s.derive("b", 1).derive("a", 0).key());
  }

  TEST_CASE("uniform range and moments") {
    RandomStream s(11);
    const int draws = 1000000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double u = s.next_uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
    }
    CHECK(std::abs(sum / draws - 0.5) < 0.002);
  }

  TEST_CASE("gaussian moments") {
    RandomStream s(12);
    const int draws = 1000000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double g = s.next_gaussian();
      sum += g;
      sq += g * g;
    }
    const double mean = sum / draws;
    CHECK(std::abs(mean) < 0.003);
    CHECK(std::abs(sq / draws - mean * mean - 1.0) < 0.005);
  }

  TEST_CASE("seed parsing") {
    CHECK(parse_seed("123") == 123u);
    CHECK(parse_seed("0x1F") == 31u);
    CHECK(parse_seed("0XfF") == 255u);
    CHECK_THROWS_AS(parse_seed("12a"), Error);
    CHECK_THROWS_AS(parse_seed(""), Error);
    CHECK_THROWS_AS(parse_seed("0x"), Error);
  }
}
