#pragma once

#include <cstddef>
#include <string>

#include "gsr/collection_io.hpp"
#include "gsr/ranked_list.hpp"

namespace gsr {

// Binary relevance (grade > 0). Throws InputError if the query is not judged.
double average_precision(const RankedList& list, const Qrels& qrels, const std::string& query_id);

double precision_at(const RankedList& list, const Qrels& qrels, const std::string& query_id, std::size_t k = 10);

// Linear gain; ideal DCG over all judged documents. Throws DegenerateError
// when the ideal DCG is zero.
double ndcg_at(const RankedList& list, const Qrels& qrels, const std::string& query_id, std::size_t k = 100);

// Discordant pairs over the union of both top-k sets. An item missing from a
// list ranks after all of that list's items; a pair missing from the same
// list counts 0.5.
double kendall_tau_distance(const RankedList& a, const RankedList& b, std::size_t k = 100);

}  // namespace gsr
