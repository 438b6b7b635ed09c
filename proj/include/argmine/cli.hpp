#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace argmine {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the command-line tool; never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// 64-bit FNV-1a of a file's bytes as 16 hex digits.
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace argmine
