#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "gsr/embedding_store.hpp"
#include "gsr/gender_geometry.hpp"
#include "gsr/resources.hpp"

namespace gsr::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("gsr_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::vector<float> gaussian_vector(std::mt19937_64& rng, std::size_t dim, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  std::vector<float> v(dim);
  for (auto& x : v) x = static_cast<float>(n(rng));
  return v;
}

// Store of `n` tokens "w0".."w{n-1}" with Gaussian components.
inline EmbeddingStore random_store(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EmbeddingStore s(dim, "random");
  for (std::size_t i = 0; i < n; ++i) s.add("w" + std::to_string(i), gaussian_vector(rng, dim));
  return s;
}

// Vocabulary for the toy and trait experiments with a planted gender axis on
// component 0. Female-coded words lean positive, male-coded words negative,
// each with Gaussian noise on every component.
inline EmbeddingStore gendered_store(std::uint64_t seed, std::size_t dim = 16, double noise = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lean(0.1, 1.0);
  EmbeddingStore s(dim, "gendered-fixture");
  auto put = [&](std::string token, double sign) {
    if (s.find_exact(token)) return;
    auto v = gaussian_vector(rng, dim, noise);
    v[0] += static_cast<float>(sign * lean(rng));
    s.add(std::move(token), v);
  };
  for (const auto& [f, m] : DefinitionalPairs::defaults().pairs) {
    put(f, 2.0);
    put(m, -2.0);
  }
  put("man", -2.0);
  put("woman", 2.0);
  for (const auto& j : resources::male_jobs()) put(std::string(j.job), -0.5);
  for (const auto& j : resources::female_jobs()) put(std::string(j.job), 0.5);
  for (auto a : resources::agency_traits()) put(std::string(a), -0.3);
  for (auto c : resources::communion_traits()) put(std::string(c), 0.3);
  for (auto w : {"the", "is", "a", "care", "mary", "electrician"}) put(w, 0.0);
  return s;
}

}  // namespace gsr::testing
