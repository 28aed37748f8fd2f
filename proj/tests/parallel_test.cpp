#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <cstring>
#include <random>

#include "chw/parallel.hpp"
#include "chw/transforms.hpp"
#include "test_support.hpp"

using namespace chw;
using chw::test::random_int_signal;
using chw::test::random_real_signal;
using I = std::int64_t;

namespace {
constexpr auto kUnnorm = ScalingMode::Unnormalized;
constexpr auto kOrtho = ScalingMode::Orthonormal;
}  // namespace

TEST_CASE("single worker equals the serial cascade") {
  std::mt19937_64 rng(5);
  for (int m = 0; m <= 10; ++m) {
    const auto x = random_int_signal(rng, std::size_t{1} << m);
    REQUIRE(parallel_execute(x, 1, kUnnorm) == chw_forward(x, kUnnorm));
  }
}

TEST_CASE("impulse through the pool") {
  for (int workers : {1, 2, 3, 8}) {
    REQUIRE(parallel_execute<I>({1, 0, 0, 0}, workers, kUnnorm) == std::vector<I>{1, 1, 1, 1});
  }
}

TEST_CASE("output is identical for every worker count") {
  std::mt19937_64 rng(6);
  for (int m : {2, 5, 9, 13}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = random_int_signal(rng, std::size_t{1} << m);
      const auto serial = chw_forward(x, kUnnorm);
      for (int workers : {1, 2, 4, 8}) {
        REQUIRE(parallel_execute(x, workers, kUnnorm) == serial);
      }
    }
  }
}

TEST_CASE("floating outputs are bitwise identical across worker counts") {
  std::mt19937_64 rng(7);
  for (int m : {3, 8, 11}) {
    const auto x = random_real_signal(rng, std::size_t{1} << m);
    const auto serial = chw_forward(x, kOrtho);
    for (int workers : {2, 4, 8}) {
      const auto parallel = parallel_execute(x, workers, kOrtho);
      REQUIRE(std::memcmp(parallel.data(), serial.data(), serial.size() * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("repeated runs are deterministic") {
  std::mt19937_64 rng(8);
  const auto x = random_int_signal(rng, 1 << 12);
  const auto first = parallel_execute(x, 4, kUnnorm);
  for (int run = 0; run < 10; ++run) REQUIRE(parallel_execute(x, 4, kUnnorm) == first);
}

TEST_CASE("per-task tallies sum to the serial count") {
  std::mt19937_64 rng(9);
  for (int m : {2, 6, 12}) {
    const auto x = random_int_signal(rng, std::size_t{1} << m);
    for (int workers : {1, 3, 8}) {
      OpTally tally;
      parallel_execute(x, workers, kUnnorm, &tally);
      REQUIRE(tally.additions == std::uint64_t(m) << m);
      REQUIRE(tally.multiplications == 0);
    }
  }
}

TEST_CASE("argument validation") {
  std::vector<I> x{1, 2, 3, 4};
  REQUIRE_THROWS_AS(parallel_execute(x, 0, kUnnorm), std::invalid_argument);
  std::vector<I> bad{1, 2, 3};
  REQUIRE_THROWS_AS(parallel_execute(bad, 2, kUnnorm), std::invalid_argument);
  REQUIRE_THROWS_AS(parallel_execute(x, 2, kOrtho), std::invalid_argument);
}

TEST_CASE("tiny signals take the serial path") {
  REQUIRE(parallel_execute<I>({42}, 8, kUnnorm) == std::vector<I>{42});
  REQUIRE(parallel_execute<I>({1, 2}, 8, kUnnorm) == std::vector<I>{3, -1});
}
