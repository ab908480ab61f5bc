#include "gsr/gender_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsr/error.hpp"
#include "gsr/io_util.hpp"
#include "gsr/resources.hpp"
#include "symmetric_eigen.hpp"

namespace gsr {

DefinitionalPairs DefinitionalPairs::defaults() {
  return {{{"she", "he"},
           {"her", "his"},
           {"woman", "man"},
           {"Mary", "John"},
           {"herself", "himself"},
           {"daughter", "son"},
           {"mother", "father"},
           {"gal", "guy"},
           {"girl", "boy"},
           {"female", "male"}}};
}

DefinitionalPairs load_pairs(const std::filesystem::path& path) {
  DefinitionalPairs out;
  std::size_t row_no = 0;
  for (auto& row : read_csv_rows(path)) {
    ++row_no;
    if (row.size() != 2 || row[0].empty() || row[1].empty()) {
      throw FormatError(path.string() + ": pair " + std::to_string(row_no) + " is not 'female,male'");
    }
    out.pairs.emplace_back(std::move(row[0]), std::move(row[1]));
  }
  if (out.pairs.empty()) throw FormatError(path.string() + ": no definitional pairs");
  return out;
}

namespace {

std::vector<double> to_double(std::span<const float> v) { return {v.begin(), v.end()}; }

double norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

void scale_to_unit(std::vector<double>& v) {
  const double n = norm(v);
  if (n > 0.0) {
    for (auto& x : v) x /= n;
  }
}

}  // namespace

GenderDirection extract_direction(const EmbeddingStore& store, const DefinitionalPairs& pairs,
                                  std::string_view sign_anchor, const PcaOptions& options) {
  GenderDirection out;
  out.sign_anchor = std::string(sign_anchor);
  const std::size_t dim = store.dim();

  std::vector<std::vector<double>> diffs;
  for (const auto& [female, male] : pairs.pairs) {
    auto f = store.lookup(female);
    auto m = store.lookup(male);
    if (!f || !m) {
      out.pairs_dropped.emplace_back(female, male);
      continue;
    }
    auto fv = to_double(store.vector(f->row));
    auto mv = to_double(store.vector(m->row));
    if (options.normalize_words) {
      scale_to_unit(fv);
      scale_to_unit(mv);
    }
    std::vector<double> d(dim);
    for (std::size_t k = 0; k < dim; ++k) d[k] = fv[k] - mv[k];
    if (options.normalize_differences) scale_to_unit(d);
    diffs.push_back(std::move(d));
    out.pairs_used.pairs.emplace_back(female, male);
  }
  if (diffs.size() < 2) {
    throw InputError("gender direction needs at least 2 resolvable definitional pairs, got " +
                     std::to_string(diffs.size()));
  }
  auto anchor = store.lookup(sign_anchor);
  if (!anchor) throw InputError("sign anchor '" + std::string(sign_anchor) + "' is not in the embedding store");

  const std::size_t n = diffs.size();
  if (options.center) {
    std::vector<double> mean(dim, 0.0);
    for (const auto& d : diffs)
      for (std::size_t k = 0; k < dim; ++k) mean[k] += d[k];
    for (auto& x : mean) x /= static_cast<double>(n);
    for (auto& d : diffs)
      for (std::size_t k = 0; k < dim; ++k) d[k] -= mean[k];
  }

  // The covariance D^T D shares its nonzero spectrum with the n x n Gram
  // matrix D D^T; work in the smaller space and map the eigenvector back.
  std::vector<double> gram(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double g = std::inner_product(diffs[i].begin(), diffs[i].end(), diffs[j].begin(), 0.0);
      gram[i * n + j] = g;
      gram[j * n + i] = g;
    }
  }
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += gram[i * n + i];
  if (!(trace > 0.0)) throw DegenerateError("definitional pair differences are all zero");

  const auto eig = detail::symmetric_eigen(gram, n);
  out.axis.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = eig.vectors[i];
    for (std::size_t k = 0; k < dim; ++k) out.axis[k] += u * diffs[i][k];
  }
  const double axis_norm = norm(out.axis);
  if (!(axis_norm > 0.0)) throw DegenerateError("leading principal component is zero");
  for (auto& x : out.axis) x /= axis_norm;
  out.explained_variance_ratio = std::clamp(eig.values[0] / trace, 0.0, 1.0);

  auto av = store.vector(anchor->row);
  double dot = 0.0;
  for (std::size_t k = 0; k < dim; ++k) dot += av[k] * out.axis[k];
  if (dot < 0.0) {
    for (auto& x : out.axis) x = -x;
  }
  return out;
}

std::optional<double> projection_cosine(std::span<const float> vec, std::span<const double> axis) {
  double dot = 0.0;
  double nn = 0.0;
  double aa = 0.0;
  for (std::size_t k = 0; k < vec.size(); ++k) {
    const double v = vec[k];
    dot += v * axis[k];
    nn += v * v;
    aa += axis[k] * axis[k];
  }
  if (nn == 0.0 || aa == 0.0) return std::nullopt;
  return std::clamp(dot / (std::sqrt(nn) * std::sqrt(aa)), -1.0, 1.0);
}

std::optional<double> genderedness(const EmbeddingStore& store, const GenderDirection& direction,
                                   std::string_view token) {
  auto hit = store.lookup(token);
  if (!hit) return std::nullopt;
  return projection_cosine(store.vector(hit->row), direction.axis);
}

std::optional<double> GenderScorer::operator()(std::string_view token) const {
  auto hit = store_->lookup(token);
  if (!hit) return std::nullopt;
  if (!by_row_.empty()) return by_row_[hit->row];
  return projection_cosine(store_->vector(hit->row), direction_->axis);
}

void GenderScorer::precompute() {
  by_row_.resize(store_->size());
  for (std::size_t row = 0; row < store_->size(); ++row) {
    by_row_[row] = projection_cosine(store_->vector(row), direction_->axis);
  }
}

bool GenderedWordSet::contains(std::string_view token) const {
  if (tokens.contains(std::string(token))) return true;
  return tokens.contains(ascii_lower(token));
}

GenderedWordSet GenderedWordSet::defaults() {
  GenderedWordSet out;
  for (const auto& [f, m] : DefinitionalPairs::defaults().pairs) {
    out.tokens.insert(f);
    out.tokens.insert(m);
  }
  for (auto w : resources::male_entities()) out.tokens.emplace(w);
  for (auto w : resources::female_entities()) out.tokens.emplace(w);
  return out;
}

GenderedWordSet load_word_set(const std::filesystem::path& path) {
  GenderedWordSet out;
  for (auto& w : read_word_list(path)) out.tokens.insert(std::move(w));
  if (out.tokens.empty()) throw FormatError(path.string() + ": empty word set");
  return out;
}

namespace {

EmbeddingStore neutralize(const EmbeddingStore& store, const GenderDirection& direction,
                          const GenderedWordSet* exempt) {
  if (direction.axis.size() != store.dim()) throw InputError("gender direction dimension does not match store");
  EmbeddingStore out(store.dim(), store.source_tag());
  std::vector<float> buf(store.dim());
  const auto& axis = direction.axis;
  for (std::size_t row = 0; row < store.size(); ++row) {
    const auto& tok = store.token(row);
    auto v = store.vector(row);
    if (exempt != nullptr && exempt->contains(tok)) {
      out.add(tok, v);
      continue;
    }
    double dot = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) dot += v[k] * axis[k];
    for (std::size_t k = 0; k < v.size(); ++k) buf[k] = static_cast<float>(v[k] - dot * axis[k]);
    // One refinement pass removes most of the component reintroduced by float rounding.
    double residual = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) residual += buf[k] * axis[k];
    for (std::size_t k = 0; k < v.size(); ++k) buf[k] = static_cast<float>(buf[k] - residual * axis[k]);
    out.add(tok, buf);
  }
  return out;
}

}  // namespace

EmbeddingStore debias_regular(const EmbeddingStore& store, const GenderDirection& direction,
                              const GenderedWordSet& exempt) {
  if (exempt.tokens.empty()) throw InputError("regular debiasing needs a non-empty exempt set");
  return neutralize(store, direction, &exempt);
}

EmbeddingStore debias_strong(const EmbeddingStore& store, const GenderDirection& direction) {
  return neutralize(store, direction, nullptr);
}

}  // namespace gsr
