#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gsr/embedding_store.hpp"

namespace gsr {

// Ordered (female, male) token pairs that define the gender subspace.
struct DefinitionalPairs {
  std::vector<std::pair<std::string, std::string>> pairs;

  // she-he, her-his, woman-man, Mary-John, herself-himself, daughter-son,
  // mother-father, gal-guy, girl-boy, female-male.
  static DefinitionalPairs defaults();
};

// CSV "female,male" per line, '#' comments and blank lines ignored.
DefinitionalPairs load_pairs(const std::filesystem::path& path);

struct PcaOptions {
  // Subtract the mean difference vector before the covariance. Off by default:
  // the uncentered form equals PCA over pair-centered word vectors.
  bool center = false;
  // Scale every word vector to unit length before differencing.
  bool normalize_words = true;
  // Scale each difference vector to unit length before the PCA.
  bool normalize_differences = false;
};

struct GenderDirection {
  std::vector<double> axis;  // unit length, store dimension
  double explained_variance_ratio = 0.0;
  std::string sign_anchor;
  DefinitionalPairs pairs_used;
  std::vector<std::pair<std::string, std::string>> pairs_dropped;
};

// First principal component of the per-pair difference vectors (female - male),
// oriented so that `sign_anchor` projects positively.
GenderDirection extract_direction(const EmbeddingStore& store, const DefinitionalPairs& pairs,
                                  std::string_view sign_anchor = "she", const PcaOptions& options = {});

// Cosine of a raw vector with the direction; nullopt for a zero vector.
std::optional<double> projection_cosine(std::span<const float> vec, std::span<const double> axis);

// g(w): cosine between the word vector and the gender axis. Positive means
// female-leaning. Miss when the token is unresolvable or its vector is zero.
std::optional<double> genderedness(const EmbeddingStore& store, const GenderDirection& direction,
                                   std::string_view token);

// Binds a store and a direction; the scorer used by text and list genderedness.
class GenderScorer {
 public:
  GenderScorer(const EmbeddingStore& store, const GenderDirection& direction)
      : store_(&store), direction_(&direction) {}

  std::optional<double> operator()(std::string_view token) const;

  // Scores every vocabulary row once; later calls become table lookups.
  void precompute();

  const EmbeddingStore& store() const noexcept { return *store_; }
  const GenderDirection& direction() const noexcept { return *direction_; }

 private:
  const EmbeddingStore* store_;
  const GenderDirection* direction_;
  std::vector<std::optional<double>> by_row_;
};

// Tokens exempt from regular debiasing. Matching is on the exact token or
// its lowercased form.
struct GenderedWordSet {
  std::set<std::string> tokens;

  bool contains(std::string_view token) const;

  // Definitional-pair tokens plus the male and female entity lexicons.
  static GenderedWordSet defaults();
};

GenderedWordSet load_word_set(const std::filesystem::path& path);

// v - (v . w_g) w_g for every token outside `exempt`; exempt tokens are copied.
EmbeddingStore debias_regular(const EmbeddingStore& store, const GenderDirection& direction,
                              const GenderedWordSet& exempt);

// Removes the gender component from every token.
EmbeddingStore debias_strong(const EmbeddingStore& store, const GenderDirection& direction);

}  // namespace gsr
