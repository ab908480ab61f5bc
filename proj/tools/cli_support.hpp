#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gsr/embedding_store.hpp"
#include "gsr/gender_geometry.hpp"
#include "gsr/text_prep.hpp"

namespace gsrtool {

namespace fs = std::filesystem;

// Raised for bad flag combinations detected after parsing; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by every command that needs a gender direction.
struct EmbeddingFlags {
  std::string path;
  std::string format = "auto";
  std::string pairs;
  std::string anchor = "she";
  bool center = false;
  bool normalize_differences = false;
  bool raw_words = false;
};

// Store, direction and scorer built from EmbeddingFlags.
struct GenderModel {
  gsr::EmbeddingStore store;
  gsr::GenderDirection direction;
  std::unique_ptr<gsr::GenderScorer> scorer;
  std::string fingerprint;
};

gsr::EmbeddingFormat resolve_format(const std::string& format, const fs::path& path);

gsr::EmbeddingStore load_store(const std::string& path, const std::string& format);

std::unique_ptr<GenderModel> load_model(const EmbeddingFlags& flags);

gsr::PcaOptions pca_options(const EmbeddingFlags& flags);

gsr::DefinitionalPairs pairs_from(const EmbeddingFlags& flags);

gsr::StopList load_stops(const std::string& path);

// Report header lines: tool version, command line, seed and input fingerprints.
class ReportHeader {
 public:
  ReportHeader();

  // Recorded once in main; every header repeats it.
  static void set_command_line(int argc, char** argv);

  void add(const std::string& key, const std::string& value);
  void add_file(const std::string& key, const std::string& path);
  void add_stops(const gsr::StopList& stops);
  const std::vector<std::string>& lines() const noexcept { return lines_; }

 private:
  std::vector<std::string> lines_;
};

// Runs body(i) for i in [0, n) on `threads` workers; the first exception is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

unsigned default_threads();

// Writes `content` and echoes the destination to stdout.
void emit_file(const fs::path& path, const std::string& content);

std::string fixed(double v, int digits = 6);

}  // namespace gsrtool
