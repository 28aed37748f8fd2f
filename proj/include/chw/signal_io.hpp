#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "chw/common.hpp"

namespace chw {

// Text: one decimal value per line; blank lines and lines starting with '#'
// are skipped.  Binary: little-endian IEEE-754 doubles, no header, length
// implicit in the file size.  Loaded sample counts must be a power of two.
enum class SignalFormat { Text, Binary };

template <SampleValue T>
std::vector<T> read_signal(const std::filesystem::path& path, SignalFormat format);

template <SampleValue T>
void write_signal(std::span<const T> x, const std::filesystem::path& path, SignalFormat format);

}  // namespace chw
