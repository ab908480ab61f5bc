#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gsr {

struct RankedItem {
  std::string doc_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct RankedList {
  std::string query_id;
  std::vector<RankedItem> items;

  std::size_t size() const noexcept { return items.size(); }
  bool empty() const noexcept { return items.empty(); }
};

// Orders by score descending, ties by ascending doc_id, then assigns ranks 1..n.
RankedList make_ranked_list(std::string query_id, std::vector<std::pair<std::string, double>> scored);

// True when ranks are 1..n, scores non-increasing and doc_ids unique.
bool is_well_formed(const RankedList& list);

// First min(k, size) items; ranks kept.
RankedList truncate_to_k(const RankedList& list, std::size_t k);

// query_id -> list, ordered by query id.
using RunSet = std::map<std::string, RankedList>;

// "query_id Q0 doc_id rank score tag" lines.
std::string format_trec_run(const RunSet& run, const std::string& tag);
void write_trec_run(const RunSet& run, const std::string& tag, const std::filesystem::path& path);
RunSet parse_trec_run_text(const std::string& content);
RunSet read_trec_run(const std::filesystem::path& path);

}  // namespace gsr
