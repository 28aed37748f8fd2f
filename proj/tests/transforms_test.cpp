#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>

#include "chw/errors.hpp"
#include "chw/oracle.hpp"
#include "chw/transforms.hpp"
#include "test_support.hpp"

using namespace chw;
using chw::test::max_abs_diff;
using chw::test::random_int_signal;
using chw::test::random_real_signal;
using I = std::int64_t;

namespace {

constexpr auto kUnnorm = ScalingMode::Unnormalized;
constexpr auto kOrtho = ScalingMode::Orthonormal;

std::vector<double> to_doubles(const std::vector<I>& x) { return {x.begin(), x.end()}; }

}  // namespace

TEST_CASE("haar transform on tiny signals") {
  OpTally tally;
  REQUIRE(haar_forward<I>({7}, kUnnorm, &tally) == std::vector<I>{7});
  REQUIRE(tally.additions == 0);

  REQUIRE(haar_forward<I>({1, 0, 0, 0}, kUnnorm, &tally) == std::vector<I>{1, 1, 1, 0});
  REQUIRE(tally.additions == 6);
}

TEST_CASE("haar transform addition counts are 2*(2^m - 1)") {
  std::mt19937_64 rng(11);
  for (int m = 0; m <= 12; ++m) {
    auto x = random_int_signal(rng, std::size_t{1} << m);
    OpTally tally;
    haar_forward_inplace(std::span<I>(x), kUnnorm, &tally);
    REQUIRE(tally.additions == 2 * ((std::uint64_t{1} << m) - 1));
    REQUIRE(tally.multiplications == 0);
  }
}

TEST_CASE("haar transform matches the dense matrix") {
  std::mt19937_64 rng(22);
  for (int m = 0; m <= 7; ++m) {
    const auto x = random_int_signal(rng, std::size_t{1} << m);
    REQUIRE(haar_forward(x, kUnnorm) == mat_vec(haar_dense<I>(m, kUnnorm), x));

    const auto xf = random_real_signal(rng, std::size_t{1} << m);
    REQUIRE(max_abs_diff(haar_forward(xf, kOrtho), mat_vec(haar_dense<double>(m, kOrtho), xf)) <=
            1e-12);
  }
}

TEST_CASE("haar inverse round trips") {
  REQUIRE(haar_inverse<I>({5}, kUnnorm) == std::vector<I>{5});
  REQUIRE(haar_inverse(haar_forward<I>({1, 2, 3, 4}, kUnnorm), kUnnorm) ==
          std::vector<I>{1, 2, 3, 4});

  std::mt19937_64 rng(33);
  for (int m = 0; m <= 10; ++m) {
    const auto x = random_int_signal(rng, std::size_t{1} << m);
    REQUIRE(haar_inverse(haar_forward(x, kUnnorm), kUnnorm) == x);
  }

  const auto xf = random_real_signal(rng, 64);
  REQUIRE(max_abs_diff(haar_inverse(haar_forward(xf, kOrtho), kOrtho), xf) <= 1e-12);

  // An odd leading pair cannot come from the integer forward transform.
  REQUIRE_THROWS_AS(haar_inverse<I>({1, 0}, kUnnorm), StructureError);
}

TEST_CASE("length validation") {
  std::vector<I> bad(3, 0);
  REQUIRE_THROWS_AS(haar_forward_inplace(std::span<I>(bad), kUnnorm), std::invalid_argument);
  REQUIRE_THROWS_AS(chw_forward_inplace(std::span<I>(bad), kUnnorm), std::invalid_argument);
  REQUIRE_THROWS_AS(fwht_natural_inplace(std::span<I>(bad), kUnnorm), std::invalid_argument);
  std::vector<I> empty;
  REQUIRE_THROWS_AS(haar_forward_inplace(std::span<I>(empty), kUnnorm), std::invalid_argument);
  std::vector<I> two{1, 2};
  REQUIRE_THROWS_AS(haar_forward_inplace(std::span<I>(two), kOrtho), std::invalid_argument);
}

TEST_CASE("stage slices") {
  REQUIRE(stage_blocks(2, 1) == std::vector<BlockSlice>{{2, 2}});
  REQUIRE(stage_blocks(4, 2) == std::vector<BlockSlice>{{4, 4}, {12, 4}});
  REQUIRE(stage_blocks(4, 3) == std::vector<BlockSlice>{{2, 2}, {6, 2}, {10, 2}, {14, 2}});
  REQUIRE_THROWS_AS(stage_blocks(4, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(stage_blocks(4, 4), std::invalid_argument);

  // Slices at one stage are disjoint, size-aligned, and 2^{r-1} many.
  for (int m = 2; m <= 12; ++m) {
    for (int r = 1; r <= m - 1; ++r) {
      const auto blocks = stage_blocks(m, r);
      REQUIRE(blocks.size() == std::size_t{1} << (r - 1));
      std::size_t prev_end = 0;
      for (const BlockSlice& b : blocks) {
        REQUIRE(b.size == std::size_t{1} << (m - r));
        REQUIRE(b.offset % b.size == 0);
        REQUIRE(b.offset >= prev_end);
        prev_end = b.offset + b.size;
      }
      REQUIRE(prev_end <= (std::size_t{1} << m));
    }
  }
}

TEST_CASE("cascade transform on tiny signals") {
  OpTally tally;
  REQUIRE(chw_forward<I>({1, 0, 0, 0}, kUnnorm, &tally) == std::vector<I>{1, 1, 1, 1});
  REQUIRE(tally.additions == 8);
  REQUIRE(chw_forward<I>({0, 1, 0, 0}, kUnnorm) == std::vector<I>{1, 1, -1, -1});
  // Length 1 is the identity at zero cost.
  tally.reset();
  REQUIRE(chw_forward<I>({9}, kUnnorm, &tally) == std::vector<I>{9});
  REQUIRE(tally == OpTally{});
}

TEST_CASE("cascade transform matches the dense dyadic matrix") {
  std::mt19937_64 rng(44);
  for (int m = 0; m <= 8; ++m) {
    const auto h = hadamard_dyadic_dense<I>(m, kUnnorm);
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_int_signal(rng, std::size_t{1} << m);
      REQUIRE(chw_forward(x, kUnnorm) == mat_vec(h, x));
    }
  }
}

TEST_CASE("cascade addition count is m*2^m") {
  std::mt19937_64 rng(55);
  for (int m = 1; m <= 14; ++m) {
    auto x = random_int_signal(rng, std::size_t{1} << m);
    OpTally tally;
    chw_forward_inplace(std::span<I>(x), kUnnorm, &tally);
    REQUIRE(tally.additions == std::uint64_t(m) << m);
    REQUIRE(tally.multiplications == 0);
  }
}

TEST_CASE("butterfly WHT in natural order") {
  OpTally tally;
  REQUIRE(fwht_natural<I>({1, 0}, kUnnorm, &tally) == std::vector<I>{1, 1});
  REQUIRE(tally.additions == 2);

  std::mt19937_64 rng(66);
  const auto x = random_int_signal(rng, 64);
  REQUIRE(fwht_natural(x, kUnnorm) == mat_vec(hadamard_natural_dense<I>(6), x));

  auto x16 = random_int_signal(rng, 16);
  tally.reset();
  fwht_natural_inplace(std::span<I>(x16), kUnnorm, &tally);
  REQUIRE(tally.additions == 64);
}

TEST_CASE("dyadic WHT equals the cascade on every input") {
  std::mt19937_64 rng(77);
  REQUIRE(fwht_dyadic<I>({1, 0, 0, 0}, kUnnorm) == std::vector<I>{1, 1, 1, 1});
  for (int m = 0; m <= 8; ++m) {
    const auto x = random_int_signal(rng, std::size_t{1} << m);
    REQUIRE(fwht_dyadic(x, kUnnorm) == chw_forward(x, kUnnorm));
  }
  // The 2x2 case is identical in every ordering.
  const auto x2 = random_int_signal(rng, 2);
  REQUIRE(fwht_dyadic(x2, kUnnorm) == fwht_natural(x2, kUnnorm));
}

TEST_CASE("Haar-to-WHT transform composes with the Haar transform") {
  std::mt19937_64 rng(88);

  const auto h2 = random_int_signal(rng, 2);
  REQUIRE(haar_walsh_forward(h2, kUnnorm) == h2);  // blockdiag(1, H_0) = I

  REQUIRE(haar_walsh_forward(haar_forward<I>({1, 0, 0, 0}, kUnnorm), kUnnorm) ==
          std::vector<I>{1, 1, 1, 1});

  for (int m = 0; m <= 8; ++m) {
    const auto x = random_int_signal(rng, std::size_t{1} << m);
    REQUIRE(haar_walsh_forward(haar_forward(x, kUnnorm), kUnnorm) == chw_forward(x, kUnnorm));
  }

  const auto h7 = random_int_signal(rng, 128);
  REQUIRE(haar_walsh_forward(h7, kUnnorm) == mat_vec(haar_walsh_dense<I>(7), h7));

  const auto hf = random_real_signal(rng, 128);
  REQUIRE(max_abs_diff(haar_walsh_forward(hf, kOrtho), mat_vec(haar_walsh_dense<double>(7), hf)) <=
          1e-12);
}

TEST_CASE("normalize converts unnormalized output to orthonormal output") {
  REQUIRE(normalized(std::vector<double>{5.0}, 0) == std::vector<double>{5.0});
  REQUIRE(normalized(std::vector<I>{1, 1, 1, 1}, 2) == std::vector<double>{0.5, 0.5, 0.5, 0.5});

  std::mt19937_64 rng(99);
  for (int m = 0; m <= 8; ++m) {
    const auto x = random_int_signal(rng, std::size_t{1} << m, 100);
    const auto via_int = normalized(chw_forward(x, kUnnorm), m);
    const auto direct = mat_vec(hadamard_dyadic_dense<double>(m, kOrtho), to_doubles(x));
    REQUIRE(max_abs_diff(via_int, direct) <= 1e-12);
  }

  std::vector<double> wrong(4, 0.0);
  REQUIRE_THROWS_AS(normalize_inplace(std::span<double>(wrong), 3), std::invalid_argument);
}

TEST_CASE("cascade transform is linear over integer combinations") {
  std::mt19937_64 rng(111);
  std::uniform_int_distribution<I> coeff(-9, 9);
  for (int m = 0; m <= 8; ++m) {
    const std::size_t n = std::size_t{1} << m;
    const auto x = random_int_signal(rng, n);
    const auto y = random_int_signal(rng, n);
    const I a = coeff(rng);
    const I b = coeff(rng);
    std::vector<I> combo(n);
    for (std::size_t i = 0; i < n; ++i) combo[i] = a * x[i] + b * y[i];
    const auto tx = chw_forward(x, kUnnorm);
    const auto ty = chw_forward(y, kUnnorm);
    const auto tc = chw_forward(combo, kUnnorm);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(tc[i] == a * tx[i] + b * ty[i]);
  }
}

TEST_CASE("orthonormal cascade preserves the 2-norm") {
  std::mt19937_64 rng(222);
  for (int m : {1, 4, 8, 12}) {
    const auto x = random_real_signal(rng, std::size_t{1} << m);
    const auto y = chw_forward(x, kOrtho);
    double nx = 0.0;
    double ny = 0.0;
    for (double v : x) nx += v * v;
    for (double v : y) ny += v * v;
    REQUIRE(std::abs(std::sqrt(ny) - std::sqrt(nx)) <= 1e-10 * std::sqrt(nx));
  }
}

TEST_CASE("orthonormal cascade matches the orthonormal dense matrix") {
  std::mt19937_64 rng(333);
  for (int m = 0; m <= 8; ++m) {
    const auto x = random_real_signal(rng, std::size_t{1} << m);
    REQUIRE(max_abs_diff(chw_forward(x, kOrtho),
                         mat_vec(hadamard_dyadic_dense<double>(m, kOrtho), x)) <= 1e-12);
  }
}
