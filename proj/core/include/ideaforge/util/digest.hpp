#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ideaforge::util {

// SHA-256 of a byte string, returned as 64 lowercase hex characters.
std::string sha256_hex(std::string_view data);

// SHA-256 of a file's contents. Throws StageError if the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace ideaforge::util
