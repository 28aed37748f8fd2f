#include "chw/signal_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include "chw/errors.hpp"

namespace chw {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <SampleValue T>
T parse_value(std::string_view token, const std::filesystem::path& path, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw FormatError(path.string() + ":" + std::to_string(line) + ": cannot parse '" +
                      std::string(token) + "'");
  }
  return value;
}

void require_pow2_count(std::size_t count, const std::filesystem::path& path) {
  if (count == 0 || !is_pow2(count)) {
    throw FormatError(path.string() + ": sample count " + std::to_string(count) +
                      " is not a power of two");
  }
}

double decode_le_double(const unsigned char* bytes) {
  std::uint64_t u = 0;
  for (int k = 7; k >= 0; --k) u = (u << 8) | bytes[k];
  return std::bit_cast<double>(u);
}

void encode_le_double(double v, unsigned char* bytes) {
  std::uint64_t u = std::bit_cast<std::uint64_t>(v);
  for (int k = 0; k < 8; ++k) {
    bytes[k] = static_cast<unsigned char>(u & 0xffu);
    u >>= 8;
  }
}

template <SampleValue T>
T from_stored_double(double v, const std::filesystem::path& path, std::size_t index) {
  if constexpr (std::is_integral_v<T>) {
    if (!std::isfinite(v) || v != std::floor(v) || v < -9.223372036854775808e18 ||
        v >= 9.223372036854775808e18) {
      throw FormatError(path.string() + ": value #" + std::to_string(index) +
                        " is not an exact 64-bit integer");
    }
    return static_cast<T>(v);
  } else {
    return v;
  }
}

template <SampleValue T>
std::vector<T> read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<T> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view token = trim(line);
    if (token.empty() || token.front() == '#') continue;
    values.push_back(parse_value<T>(token, path, lineno));
  }
  if (in.bad()) throw IoError("read error on '" + path.string() + "'");
  require_pow2_count(values.size(), path);
  return values;
}

template <SampleValue T>
std::vector<T> read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read error on '" + path.string() + "'");
  if (bytes.size() % 8 != 0) {
    throw FormatError(path.string() + ": byte size " + std::to_string(bytes.size()) +
                      " is not a multiple of 8");
  }
  const std::size_t count = bytes.size() / 8;
  require_pow2_count(count, path);
  std::vector<T> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = from_stored_double<T>(decode_le_double(bytes.data() + 8 * i), path, i);
  }
  return values;
}

template <SampleValue T>
void write_text(std::span<const T> x, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  char buf[64];
  for (const T& v : x) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw IoError("cannot format value for '" + path.string() + "'");
    out.write(buf, ptr - buf);
    out.put('\n');
  }
  out.flush();
  if (!out) throw IoError("write error on '" + path.string() + "'");
}

template <SampleValue T>
void write_binary(std::span<const T> x, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  unsigned char bytes[8];
  for (const T& v : x) {
    encode_le_double(static_cast<double>(v), bytes);
    out.write(reinterpret_cast<const char*>(bytes), 8);
  }
  out.flush();
  if (!out) throw IoError("write error on '" + path.string() + "'");
}

}  // namespace

template <SampleValue T>
std::vector<T> read_signal(const std::filesystem::path& path, SignalFormat format) {
  return format == SignalFormat::Text ? read_text<T>(path) : read_binary<T>(path);
}

template <SampleValue T>
void write_signal(std::span<const T> x, const std::filesystem::path& path, SignalFormat format) {
  if (format == SignalFormat::Text) {
    write_text(x, path);
  } else {
    write_binary(x, path);
  }
}

template std::vector<std::int64_t> read_signal<std::int64_t>(const std::filesystem::path&,
                                                             SignalFormat);
template std::vector<double> read_signal<double>(const std::filesystem::path&, SignalFormat);
template void write_signal<std::int64_t>(std::span<const std::int64_t>,
                                         const std::filesystem::path&, SignalFormat);
template void write_signal<double>(std::span<const double>, const std::filesystem::path&,
                                   SignalFormat);

}  // namespace chw
