#include "gsr/eval_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <vector>

#include "gsr/error.hpp"

namespace gsr {

namespace {

const std::map<std::string, int>& judged(const Qrels& qrels, const std::string& query_id) {
  if (!qrels.has_query(query_id)) throw InputError("query " + query_id + " has no relevance judgments");
  return qrels.judgments_for(query_id);
}

int grade_of(const std::map<std::string, int>& j, const std::string& doc) {
  auto it = j.find(doc);
  return it == j.end() ? 0 : it->second;
}

}  // namespace

double average_precision(const RankedList& list, const Qrels& qrels, const std::string& query_id) {
  const auto& j = judged(qrels, query_id);
  const auto total_relevant = qrels.relevant_count(query_id);
  if (total_relevant == 0) return 0.0;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < list.items.size(); ++i) {
    if (grade_of(j, list.items[i].doc_id) > 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(total_relevant);
}

double precision_at(const RankedList& list, const Qrels& qrels, const std::string& query_id, std::size_t k) {
  const auto& j = judged(qrels, query_id);
  if (k == 0) throw InputError("precision cutoff must be positive");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(k, list.items.size()); ++i) {
    if (grade_of(j, list.items[i].doc_id) > 0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

double ndcg_at(const RankedList& list, const Qrels& qrels, const std::string& query_id, std::size_t k) {
  const auto& j = judged(qrels, query_id);
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, list.items.size()); ++i) {
    dcg += grade_of(j, list.items[i].doc_id) / std::log2(static_cast<double>(i) + 2.0);
  }
  std::vector<int> grades;
  for (const auto& [_, g] : j) grades.push_back(g);
  std::sort(grades.begin(), grades.end(), std::greater<>());
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) {
    ideal += grades[i] / std::log2(static_cast<double>(i) + 2.0);
  }
  if (!(ideal > 0.0)) throw DegenerateError("query " + query_id + " has zero ideal DCG");
  return dcg / ideal;
}

double kendall_tau_distance(const RankedList& a, const RankedList& b, std::size_t k) {
  const auto ta = truncate_to_k(a, k);
  const auto tb = truncate_to_k(b, k);
  std::unordered_map<std::string, std::size_t> pos_a;
  std::unordered_map<std::string, std::size_t> pos_b;
  std::vector<std::string> universe;
  for (std::size_t i = 0; i < ta.items.size(); ++i) {
    pos_a.emplace(ta.items[i].doc_id, i);
    universe.push_back(ta.items[i].doc_id);
  }
  for (std::size_t i = 0; i < tb.items.size(); ++i) {
    pos_b.emplace(tb.items[i].doc_id, i);
    if (!pos_a.contains(tb.items[i].doc_id)) universe.push_back(tb.items[i].doc_id);
  }

  // Absent items share the position just past the list's end.
  auto position = [](const auto& pos, const std::string& id, std::size_t len) {
    auto it = pos.find(id);
    return it == pos.end() ? len : it->second;
  };

  double distance = 0.0;
  for (std::size_t x = 0; x < universe.size(); ++x) {
    for (std::size_t y = x + 1; y < universe.size(); ++y) {
      const auto ax = position(pos_a, universe[x], ta.size());
      const auto ay = position(pos_a, universe[y], ta.size());
      const auto bx = position(pos_b, universe[x], tb.size());
      const auto by = position(pos_b, universe[y], tb.size());
      if (ax == ay || bx == by) {
        // Both absent from one list: their relative order is unknown there.
        distance += 0.5;
        continue;
      }
      if ((ax < ay) != (bx < by)) distance += 1.0;
    }
  }
  return distance;
}

}  // namespace gsr
