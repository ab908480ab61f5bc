#include "gsr/io_util.hpp"

#include <zlib.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gsr/error.hpp"

namespace gsr {

namespace {

bool has_gzip_magic(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 2> magic{};
  in.read(reinterpret_cast<char*>(magic.data()), 2);
  return in.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
}

std::string read_gzip(const std::filesystem::path& path) {
  gzFile gz = gzopen(path.c_str(), "rb");
  if (gz == nullptr) throw Error("cannot open " + path.string());
  std::string out;
  std::array<char, 1 << 16> buf{};
  for (;;) {
    int n = gzread(gz, buf.data(), static_cast<unsigned>(buf.size()));
    if (n < 0) {
      gzclose(gz);
      throw Error("gzip read error in " + path.string());
    }
    if (n == 0) break;
    out.append(buf.data(), static_cast<std::size_t>(n));
  }
  gzclose(gz);
  return out;
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("no such file: " + path.string());
  if (has_gzip_magic(path)) return read_gzip(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path.string());
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  std::vector<std::string> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    std::string_view v = line;
    if (auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (!v.empty()) out.emplace_back(v);
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& line : read_word_list(path)) {
    std::vector<std::string> fields;
    std::string_view rest = line;
    for (;;) {
      auto comma = rest.find(',');
      fields.emplace_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string fnv1a_hex(std::string_view bytes) { return hex64(fnv1a(kFnvOffset, bytes)); }

std::string file_fingerprint(const std::filesystem::path& path, std::uintmax_t prefix_bytes) {
  const auto size = std::filesystem::file_size(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::uint64_t h = fnv1a(kFnvOffset, std::to_string(size));
  std::array<char, 1 << 16> buf{};
  std::uintmax_t remaining = prefix_bytes;
  while (remaining > 0 && in) {
    auto want = static_cast<std::streamsize>(std::min<std::uintmax_t>(buf.size(), remaining));
    in.read(buf.data(), want);
    auto got = in.gcount();
    if (got <= 0) break;
    h = fnv1a(h, std::string_view(buf.data(), static_cast<std::size_t>(got)));
    remaining -= static_cast<std::uintmax_t>(got);
  }
  return hex64(h);
}

}  // namespace gsr
