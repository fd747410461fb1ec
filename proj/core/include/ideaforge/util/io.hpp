#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ideaforge::util {

std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temp file then renames, so readers never observe a
// partially written artifact and a crashed run never leaves one behind.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

// One compact JSON object per line, trailing newline included.
void write_jsonl(const std::filesystem::path& path,
                 const std::vector<nlohmann::json>& rows);

// Minimal CSV reader: quoted fields, escaped quotes, embedded commas and
// newlines. Returns rows of cells; the caller interprets the header.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace ideaforge::util
