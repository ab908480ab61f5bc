#include "gsr/text_prep.hpp"

#include <algorithm>

#include "gsr/io_util.hpp"
#include "gsr/resources.hpp"

namespace gsr {

StopList::StopList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

bool StopList::contains(std::string_view lowercase_token) const {
  return words_.contains(std::string(lowercase_token));
}

StopList StopList::english() {
  std::unordered_set<std::string> words;
  for (auto w : resources::english_stop_words()) words.emplace(w);
  return StopList(std::move(words));
}

StopList StopList::load(const std::filesystem::path& path) {
  std::unordered_set<std::string> words;
  for (auto& w : read_word_list(path)) words.insert(ascii_lower(w));
  return StopList(std::move(words));
}

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

BagOfWords tokenize(std::string_view text, const StopList& stops) {
  BagOfWords bag;
  std::size_t i = 0;
  std::string tok;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    bool all_digits = true;
    tok.clear();
    while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) {
      char c = text[j];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if (c < '0' || c > '9') all_digits = false;
      tok.push_back(c);
      ++j;
    }
    if (!tok.empty() && !all_digits && !stops.contains(tok)) bag.tokens.push_back(tok);
    i = j;
  }
  return bag;
}

std::optional<double> query_genderedness(const BagOfWords& query, const GenderScorer& scorer) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& t : query.tokens) {
    if (auto g = scorer(t)) {
      sum += *g;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::optional<double> document_genderedness(const BagOfWords& doc, const BagOfWords& query,
                                            const GenderScorer& scorer) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& t : doc.tokens) {
    if (std::find(query.tokens.begin(), query.tokens.end(), t) != query.tokens.end()) continue;
    if (auto g = scorer(t)) {
      sum += *g;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace gsr
