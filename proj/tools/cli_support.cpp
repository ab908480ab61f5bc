#include "cli_support.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>

#include "gsr/io_util.hpp"

namespace gsrtool {

gsr::EmbeddingFormat resolve_format(const std::string& format, const fs::path& path) {
  if (format == "binary") return gsr::EmbeddingFormat::binary;
  if (format == "text") return gsr::EmbeddingFormat::text;
  auto name = path.filename().string();
  if (name.ends_with(".gz")) name.resize(name.size() - 3);
  return name.ends_with(".bin") ? gsr::EmbeddingFormat::binary : gsr::EmbeddingFormat::text;
}

gsr::EmbeddingStore load_store(const std::string& path, const std::string& format) {
  return gsr::load_embeddings(path, resolve_format(format, path));
}

gsr::PcaOptions pca_options(const EmbeddingFlags& flags) {
  gsr::PcaOptions o;
  o.center = flags.center;
  o.normalize_differences = flags.normalize_differences;
  o.normalize_words = !flags.raw_words;
  return o;
}

gsr::DefinitionalPairs pairs_from(const EmbeddingFlags& flags) {
  return flags.pairs.empty() ? gsr::DefinitionalPairs::defaults() : gsr::load_pairs(flags.pairs);
}

std::unique_ptr<GenderModel> load_model(const EmbeddingFlags& flags) {
  if (flags.path.empty()) throw UsageError("--embeddings is required");
  if (!flags.pairs.empty() && !fs::exists(flags.pairs)) throw UsageError("pairs file not found: " + flags.pairs);
  auto m = std::make_unique<GenderModel>();
  m->store = load_store(flags.path, flags.format);
  m->direction = gsr::extract_direction(m->store, pairs_from(flags), flags.anchor, pca_options(flags));
  m->scorer = std::make_unique<gsr::GenderScorer>(m->store, m->direction);
  m->scorer->precompute();
  m->fingerprint = gsr::file_fingerprint(flags.path);
  return m;
}

gsr::StopList load_stops(const std::string& path) {
  return path.empty() ? gsr::StopList::english() : gsr::StopList::load(path);
}

namespace {
std::string g_command_line;
}

void ReportHeader::set_command_line(int argc, char** argv) {
  g_command_line.clear();
  for (int i = 0; i < argc; ++i) {
    if (i) g_command_line += ' ';
    g_command_line += argv[i];
  }
}

ReportHeader::ReportHeader() {
  lines_.push_back("tool\tgsrtool " GSR_VERSION);
  lines_.push_back("command\t" + g_command_line);
}

void ReportHeader::add(const std::string& key, const std::string& value) { lines_.push_back(key + "\t" + value); }

void ReportHeader::add_file(const std::string& key, const std::string& path) {
  if (!path.empty()) add(key, path + " fnv1a:" + gsr::file_fingerprint(path));
}

void ReportHeader::add_stops(const gsr::StopList& stops) {
  std::vector<std::string> words(stops.words().begin(), stops.words().end());
  std::sort(words.begin(), words.end());
  std::string joined;
  for (const auto& w : words) joined += w + "\n";
  add("stoplist", std::to_string(words.size()) + " words fnv1a:" + gsr::fnv1a_hex(joined));
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!first) first = std::current_exception();
          }
        }
      });
    }
  }
  if (first) std::rethrow_exception(first);
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

void emit_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  gsr::write_file(path, content);
  std::cout << "wrote " << path.string() << "\n";
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

}  // namespace gsrtool
