#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "gsr/gender_geometry.hpp"

namespace gsr {

class StopList {
 public:
  StopList() = default;
  explicit StopList(std::unordered_set<std::string> words);

  bool contains(std::string_view lowercase_token) const;
  std::size_t size() const noexcept { return words_.size(); }
  const std::unordered_set<std::string>& words() const noexcept { return words_; }

  static StopList english();
  static StopList load(const std::filesystem::path& path);

 private:
  std::unordered_set<std::string> words_;
};

// Lowercase tokens in occurrence order, stop words removed.
struct BagOfWords {
  std::vector<std::string> tokens;

  bool empty() const noexcept { return tokens.empty(); }
  std::size_t size() const noexcept { return tokens.size(); }
  friend bool operator==(const BagOfWords&, const BagOfWords&) = default;
};

// Lowercases ASCII, splits on non-alphanumeric bytes (bytes >= 0x80 count as
// word characters), drops all-digit tokens and stop words.
BagOfWords tokenize(std::string_view text, const StopList& stops);

// g(q): mean token genderedness over resolvable tokens; nullopt if none resolve.
std::optional<double> query_genderedness(const BagOfWords& query, const GenderScorer& scorer);

// g_q(d): as query_genderedness over the document after removing every token
// that also occurs in the query.
std::optional<double> document_genderedness(const BagOfWords& doc, const BagOfWords& query,
                                            const GenderScorer& scorer);

}  // namespace gsr
