#pragma once

#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace camtopo {

// printf-style formatting into a std::string
std::string strf(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

// FNV-1a over a byte string; stable across runs, used for config hashes.
std::uint64_t fnv1a64(const std::string& data);

std::string to_hex(std::uint64_t value);

// Splits on any of the given delimiter characters, dropping empty tokens.
std::vector<std::string> split_tokens(const std::string& text,
                                      const std::string& delims);

std::string trim(const std::string& text);

}  // namespace camtopo
