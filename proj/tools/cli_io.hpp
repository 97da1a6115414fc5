#pragma once

#include <filesystem>
#include <string>

#include "stego/message.hpp"
#include "stego/signal.hpp"

namespace stego::cli {

/// One real per line; blank lines and '#' comments are skipped.
Signal read_signal(const std::filesystem::path& path);
void write_signal(const std::filesystem::path& path, const Signal& signal);

/// Bits as '0'/'1' characters; whitespace is ignored.
BitMessage read_bits(const std::filesystem::path& path);
void write_bits(const std::filesystem::path& path, const BitMessage& bits);

bool is_pgm_path(const std::filesystem::path& path);

}  // namespace stego::cli
