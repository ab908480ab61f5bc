#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gsr {

enum class LookupForm { exact, lowercase };

struct LookupHit {
  std::size_t row;
  LookupForm form;
};

// Immutable token -> float32 vector table. Tokens are keyed on raw bytes and
// keep the insertion order of the source file.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim, std::string source_tag = {});

  // Appends a token. Throws InputError on duplicate token, wrong length or
  // non-finite components.
  void add(std::string token, std::span<const float> vec);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& source_tag() const noexcept { return source_tag_; }
  void set_source_tag(std::string tag) { source_tag_ = std::move(tag); }

  const std::string& token(std::size_t row) const { return tokens_.at(row); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::span<const float> vector(std::size_t row) const;

  std::optional<std::size_t> find_exact(std::string_view token) const;

  // Exact match first, then the ASCII-lowercased form.
  std::optional<LookupHit> lookup(std::string_view token) const;

  friend bool operator==(const EmbeddingStore& a, const EmbeddingStore& b);

 private:
  std::size_t dim_ = 0;
  std::string source_tag_;
  std::vector<std::string> tokens_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

// word2vec binary: "<n> <dim>\n" then per entry "<token> " + dim LE float32,
// optionally followed by '\n'.
EmbeddingStore load_binary(const std::filesystem::path& path);
void save_binary(const EmbeddingStore& store, const std::filesystem::path& path);

// Whitespace text (.vec): optional "<n> <d>" header, then "token v1 ... vd".
EmbeddingStore load_text(const std::filesystem::path& path);
void save_text(const EmbeddingStore& store, const std::filesystem::path& path);

enum class EmbeddingFormat { binary, text };

EmbeddingStore load_embeddings(const std::filesystem::path& path, EmbeddingFormat format);

// Lossy display form of a raw token: invalid UTF-8 bytes become U+FFFD.
std::string display_token(std::string_view raw);

bool is_valid_utf8(std::string_view bytes);

std::string ascii_lower(std::string_view s);

}  // namespace gsr
