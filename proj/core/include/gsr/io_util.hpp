#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gsr {

// Whole file as bytes; transparently inflates gzip input (".gz" or gzip magic).
std::string read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view content);

// Non-empty lines with '#' comments stripped and surrounding whitespace trimmed.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

// Comma-separated rows of a '#'-commented file, fields trimmed.
std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path);

std::string_view trim(std::string_view s);

// FNV-1a over the file size plus its first `prefix_bytes` bytes, hex encoded.
std::string file_fingerprint(const std::filesystem::path& path, std::uintmax_t prefix_bytes = 16u << 20);

std::string fnv1a_hex(std::string_view bytes);

}  // namespace gsr
