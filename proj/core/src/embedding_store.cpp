#include "gsr/embedding_store.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gsr/error.hpp"

namespace gsr {

static_assert(std::endian::native == std::endian::little,
              "binary embedding I/O assumes a little-endian host");

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

EmbeddingStore::EmbeddingStore(std::size_t dim, std::string source_tag)
    : dim_(dim), source_tag_(std::move(source_tag)) {
  if (dim == 0) throw InputError("embedding dimension must be positive");
}

void EmbeddingStore::add(std::string token, std::span<const float> vec) {
  if (dim_ == 0) throw InputError("embedding store has no dimension");
  if (vec.size() != dim_) {
    throw InputError("vector for '" + display_token(token) + "' has " + std::to_string(vec.size()) +
                     " components, expected " + std::to_string(dim_));
  }
  if (token.empty()) throw InputError("empty token");
  for (float v : vec) {
    if (!std::isfinite(v)) throw InputError("non-finite component in vector for '" + display_token(token) + "'");
  }
  if (index_.contains(token)) throw InputError("duplicate token '" + display_token(token) + "'");
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  data_.insert(data_.end(), vec.begin(), vec.end());
}

std::span<const float> EmbeddingStore::vector(std::size_t row) const {
  if (row >= tokens_.size()) throw InputError("embedding row out of range");
  return {data_.data() + row * dim_, dim_};
}

std::optional<std::size_t> EmbeddingStore::find_exact(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<LookupHit> EmbeddingStore::lookup(std::string_view token) const {
  if (auto row = find_exact(token)) return LookupHit{*row, LookupForm::exact};
  auto lower = ascii_lower(token);
  if (lower != token) {
    if (auto row = find_exact(lower)) return LookupHit{*row, LookupForm::lowercase};
  }
  return std::nullopt;
}

bool operator==(const EmbeddingStore& a, const EmbeddingStore& b) {
  return a.dim_ == b.dim_ && a.tokens_ == b.tokens_ && a.data_ == b.data_;
}

bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  const auto n = bytes.size();
  while (i < n) {
    auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= n) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates, out of range.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

std::string display_token(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    auto c = static_cast<unsigned char>(raw[i]);
    std::size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 0;
    if (len != 0 && i + len <= raw.size() && is_valid_utf8(raw.substr(i, len))) {
      out.append(raw.substr(i, len));
      i += len;
    } else {
      out.append("\xEF\xBF\xBD");
      ++i;
    }
  }
  return out;
}

namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto first = s.data();
  auto last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

EmbeddingStore load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());

  std::string header;
  std::getline(in, header);
  auto fields = split_ws(header);
  std::size_t vocab = 0;
  std::size_t dim = 0;
  if (fields.size() != 2 || !parse_number(fields[0], vocab) || !parse_number(fields[1], dim) || dim == 0) {
    throw FormatError(path.string() + ": expected header '<vocab_size> <dim>'");
  }

  EmbeddingStore store(dim, path.string());
  std::vector<float> vec(dim);
  std::string token;
  for (std::size_t i = 0; i < vocab; ++i) {
    token.clear();
    for (;;) {
      int c = in.get();
      if (c == std::char_traits<char>::eof()) {
        throw FormatError(path.string() + ": truncated at entry " + std::to_string(i) + " of " +
                          std::to_string(vocab));
      }
      if (c == ' ') break;
      token.push_back(static_cast<char>(c));
    }
    in.read(reinterpret_cast<char*>(vec.data()), static_cast<std::streamsize>(dim * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != dim * sizeof(float)) {
      throw FormatError(path.string() + ": truncated vector for entry " + std::to_string(i));
    }
    if (in.peek() == '\n') in.get();
    try {
      store.add(std::move(token), vec);
    } catch (const InputError& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
    token = std::string();
  }
  return store;
}

void save_binary(const EmbeddingStore& store, const std::filesystem::path& path) {
  if (store.empty()) throw InputError("refusing to save an empty embedding store");
  for (const auto& t : store.tokens()) {
    if (t.find_first_of(" \n") != std::string::npos) {
      throw InputError("token '" + display_token(t) + "' contains a delimiter byte; not representable in binary format");
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << store.size() << ' ' << store.dim() << '\n';
  for (std::size_t row = 0; row < store.size(); ++row) {
    out << store.token(row) << ' ';
    auto v = store.vector(row);
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

EmbeddingStore load_text(const std::filesystem::path& path) {
  const std::string content = read_all(path);
  if (!is_valid_utf8(content)) throw FormatError(path.string() + ": not valid UTF-8");

  std::optional<EmbeddingStore> store;
  std::optional<std::size_t> declared_count;
  std::vector<float> vec;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    std::string_view line(content.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto fields = split_ws(line);
    if (fields.empty()) continue;

    if (line_no == 1 && fields.size() == 2) {
      std::size_t n = 0;
      std::size_t d = 0;
      if (parse_number(fields[0], n) && parse_number(fields[1], d)) {
        if (d == 0) throw FormatError(path.string() + ": header declares zero dimension");
        declared_count = n;
        store.emplace(d, path.string());
        continue;
      }
    }
    if (!store) store.emplace(fields.size() - 1, path.string());
    if (fields.size() - 1 != store->dim() || fields.size() < 2) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": ragged line, " +
                        std::to_string(fields.size() - 1) + " components, expected " +
                        std::to_string(store->dim()));
    }
    vec.resize(store->dim());
    for (std::size_t k = 0; k < vec.size(); ++k) {
      if (!parse_number(fields[k + 1], vec[k])) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                          std::string(fields[k + 1]) + "'");
      }
    }
    try {
      store->add(std::string(fields[0]), vec);
    } catch (const InputError& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!store) throw FormatError(path.string() + ": no embedding data");
  if (declared_count && *declared_count != store->size()) {
    throw FormatError(path.string() + ": header declares " + std::to_string(*declared_count) + " entries, found " +
                      std::to_string(store->size()));
  }
  return std::move(*store);
}

void save_text(const EmbeddingStore& store, const std::filesystem::path& path) {
  if (store.empty()) throw InputError("refusing to save an empty embedding store");
  for (const auto& t : store.tokens()) {
    if (t.find_first_of(" \t\r\n") != std::string::npos) {
      throw InputError("token '" + display_token(t) + "' contains whitespace; not representable in text format");
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << store.size() << ' ' << store.dim() << '\n';
  char buf[64];
  for (std::size_t row = 0; row < store.size(); ++row) {
    out << store.token(row);
    for (float v : store.vector(row)) {
      // Shortest representation that parses back to the same float.
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

EmbeddingStore load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  return format == EmbeddingFormat::binary ? load_binary(path) : load_text(path);
}

}  // namespace gsr
