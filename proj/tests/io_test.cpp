#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "chw/errors.hpp"
#include "chw/signal_io.hpp"
#include "test_support.hpp"

using namespace chw;
using chw::test::random_int_signal;
using chw::test::random_real_signal;
using I = std::int64_t;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;

  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path = fs::temp_directory_path() / ("chw_io_test_" + std::to_string(rng()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_file(const fs::path& p, const std::string& contents) {
  std::ofstream out(p, std::ios::binary);
  out << contents;
}

}  // namespace

TEST_CASE("text signals parse one value per line") {
  TempDir dir;
  const fs::path p = dir.path / "x.txt";
  write_file(p, "1\n0\n0\n0\n");
  REQUIRE(read_signal<I>(p, SignalFormat::Text) == std::vector<I>{1, 0, 0, 0});

  write_file(p, "# header comment\n1\n\n2\n# interleaved\n3\n-4\n");
  REQUIRE(read_signal<I>(p, SignalFormat::Text) == std::vector<I>{1, 2, 3, -4});
}

TEST_CASE("text parse failures carry the line number") {
  TempDir dir;
  const fs::path p = dir.path / "bad.txt";
  write_file(p, "1\n2\noops\n4\n");
  try {
    read_signal<I>(p, SignalFormat::Text);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    REQUIRE(std::string(e.what()).find(":3") != std::string::npos);
    REQUIRE(std::string(e.what()).find("oops") != std::string::npos);
  }

  // A fractional value is not an exact integer sample.
  write_file(p, "1\n1.5\n3\n4\n");
  REQUIRE_THROWS_AS(read_signal<I>(p, SignalFormat::Text), FormatError);
  REQUIRE_NOTHROW(read_signal<double>(p, SignalFormat::Text));
}

TEST_CASE("sample counts must be powers of two") {
  TempDir dir;
  const fs::path p = dir.path / "three.txt";
  write_file(p, "1\n2\n3\n");
  try {
    read_signal<I>(p, SignalFormat::Text);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    REQUIRE(std::string(e.what()).find("3") != std::string::npos);
  }

  const fs::path b = dir.path / "three.bin";
  write_file(b, std::string(24, '\0'));  // 3 doubles
  REQUIRE_THROWS_AS(read_signal<double>(b, SignalFormat::Binary), FormatError);

  const fs::path ragged = dir.path / "ragged.bin";
  write_file(ragged, std::string(20, '\0'));  // not a multiple of 8
  REQUIRE_THROWS_AS(read_signal<double>(ragged, SignalFormat::Binary), FormatError);

  const fs::path empty = dir.path / "empty.txt";
  write_file(empty, "");
  REQUIRE_THROWS_AS(read_signal<double>(empty, SignalFormat::Text), FormatError);
}

TEST_CASE("round trips through both formats") {
  TempDir dir;
  std::mt19937_64 rng(12);

  const std::vector<I> small{1, 1, -1, -1};
  for (auto format : {SignalFormat::Text, SignalFormat::Binary}) {
    const fs::path p = dir.path / "small";
    write_signal<I>(small, p, format);
    REQUIRE(read_signal<I>(p, format) == small);
  }

  for (int m : {0, 4, 16}) {
    const auto ints = random_int_signal(rng, std::size_t{1} << m);
    const auto reals = random_real_signal(rng, std::size_t{1} << m);
    for (auto format : {SignalFormat::Text, SignalFormat::Binary}) {
      const fs::path pi = dir.path / "ints";
      const fs::path pr = dir.path / "reals";
      write_signal<I>(ints, pi, format);
      write_signal<double>(reals, pr, format);
      REQUIRE(read_signal<I>(pi, format) == ints);
      const auto reals_back = read_signal<double>(pr, format);
      REQUIRE(std::memcmp(reals_back.data(), reals.data(), reals.size() * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("binary integer payloads must be integral") {
  TempDir dir;
  const fs::path p = dir.path / "frac.bin";
  write_signal<double>(std::vector<double>{1.0, 2.5}, p, SignalFormat::Binary);
  REQUIRE_THROWS_AS(read_signal<I>(p, SignalFormat::Binary), FormatError);
}

TEST_CASE("io failures surface with path context") {
  TempDir dir;
  const fs::path missing = dir.path / "does_not_exist.txt";
  try {
    read_signal<I>(missing, SignalFormat::Text);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    REQUIRE(std::string(e.what()).find("does_not_exist") != std::string::npos);
  }

  const fs::path unwritable = dir.path / "no_such_dir" / "out.txt";
  REQUIRE_THROWS_AS(write_signal<I>(std::vector<I>{1, 2}, unwritable, SignalFormat::Text),
                    IoError);
}
