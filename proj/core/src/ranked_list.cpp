#include "gsr/ranked_list.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

#include "gsr/error.hpp"
#include "gsr/io_util.hpp"

namespace gsr {

RankedList make_ranked_list(std::string query_id, std::vector<std::pair<std::string, double>> scored) {
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  RankedList out{std::move(query_id), {}};
  out.items.reserve(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    out.items.push_back({std::move(scored[i].first), scored[i].second, i + 1});
  }
  return out;
}

bool is_well_formed(const RankedList& list) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < list.items.size(); ++i) {
    const auto& it = list.items[i];
    if (it.rank != i + 1) return false;
    if (i > 0 && it.score > list.items[i - 1].score) return false;
    if (!ids.insert(it.doc_id).second) return false;
  }
  return true;
}

RankedList truncate_to_k(const RankedList& list, std::size_t k) {
  RankedList out{list.query_id, {}};
  const auto n = std::min(k, list.items.size());
  out.items.assign(list.items.begin(), list.items.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

std::string format_trec_run(const RunSet& run, const std::string& tag) {
  std::string out;
  char score[64];
  for (const auto& [qid, list] : run) {
    for (const auto& it : list.items) {
      std::snprintf(score, sizeof(score), "%.17g", it.score);
      out += qid + " Q0 " + it.doc_id + " " + std::to_string(it.rank) + " " + score + " " + tag + "\n";
    }
  }
  return out;
}

void write_trec_run(const RunSet& run, const std::string& tag, const std::filesystem::path& path) {
  write_file(path, format_trec_run(run, tag));
}

RunSet parse_trec_run_text(const std::string& content) {
  RunSet run;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string qid, q0, doc, rank_s, score_s, tag, extra;
    if (!(fields >> qid)) continue;
    if (!(fields >> q0 >> doc >> rank_s >> score_s >> tag) || (fields >> extra)) {
      throw FormatError("run line " + std::to_string(line_no) + ": expected 6 columns");
    }
    std::size_t rank = 0;
    auto [p1, e1] = std::from_chars(rank_s.data(), rank_s.data() + rank_s.size(), rank);
    double score = 0.0;
    auto [p2, e2] = std::from_chars(score_s.data(), score_s.data() + score_s.size(), score);
    if (e1 != std::errc{} || e2 != std::errc{} || p1 != rank_s.data() + rank_s.size() ||
        p2 != score_s.data() + score_s.size()) {
      throw FormatError("run line " + std::to_string(line_no) + ": bad rank or score");
    }
    auto& list = run[qid];
    list.query_id = qid;
    list.items.push_back({doc, score, rank});
  }
  // Files may list items out of order; the rank column decides.
  for (auto& [qid, list] : run) {
    std::stable_sort(list.items.begin(), list.items.end(),
                     [](const RankedItem& a, const RankedItem& b) { return a.rank < b.rank; });
    std::set<std::string> seen;
    for (std::size_t i = 0; i < list.items.size(); ++i) {
      if (!seen.insert(list.items[i].doc_id).second) {
        throw FormatError("run lists document " + list.items[i].doc_id + " twice for query " + qid);
      }
      list.items[i].rank = i + 1;
    }
  }
  return run;
}

RunSet read_trec_run(const std::filesystem::path& path) { return parse_trec_run_text(read_file(path)); }

}  // namespace gsr
