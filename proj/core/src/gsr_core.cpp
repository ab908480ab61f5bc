#include "gsr/gsr_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "gsr/error.hpp"
#include "gsr/io_util.hpp"
#include "gsr/retrieval.hpp"

namespace gsr {

double rank_weight(std::size_t rank) { return 1.0 / std::log2(static_cast<double>(rank) + 1.0); }

std::optional<double> weighted_list_genderedness(std::span<const std::optional<double>> doc_g) {
  double num = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < doc_g.size(); ++i) {
    if (!doc_g[i]) continue;
    const double w = rank_weight(i + 1);
    num += w * *doc_g[i];
    total += w;
  }
  if (!(total > 0.0)) return std::nullopt;
  return num / total;
}

std::optional<double> list_genderedness(std::span<const BagOfWords> docs, const BagOfWords& query,
                                        const GenderScorer& scorer) {
  std::vector<std::optional<double>> g;
  g.reserve(docs.size());
  for (const auto& d : docs) g.push_back(document_genderedness(d, query, scorer));
  return weighted_list_genderedness(g);
}

GsrResult gsr_slope(std::vector<GsrPoint> points) {
  const std::size_t n = points.size();
  if (n < 2) throw DegenerateError("slope needs at least 2 queries, got " + std::to_string(n));
  GsrResult r;
  const double nd = static_cast<double>(n);
  for (const auto& p : points) {
    r.mu_q += p.gq;
    r.mu_ql += p.gl;
  }
  r.mu_q /= nd;
  r.mu_ql /= nd;
  double cov = 0.0;
  for (const auto& p : points) {
    const double dx = p.gq - r.mu_q;
    r.sigma2_q += dx * dx;
    cov += dx * (p.gl - r.mu_ql);
  }
  r.sigma2_q /= nd;
  cov /= nd;
  if (!(r.sigma2_q > 0.0)) throw DegenerateError("all queries have the same genderedness; slope undefined");
  r.slope = cov / r.sigma2_q;
  r.intercept = r.mu_ql - r.slope * r.mu_q;
  r.n = n;
  r.points = std::move(points);
  return r;
}

double relative_gsr(const GsrResult& sys, const GsrResult& perfect) {
  if (perfect.slope == 0.0) throw DegenerateError("perfect-engine slope is zero; relative GSR undefined");
  return 100.0 * (sys.slope - perfect.slope) / perfect.slope;
}

DocumentTable::DocumentTable(std::span<const Document> docs, const StopList& stops) {
  bags_.reserve(docs.size());
  for (const auto& d : docs) add(d.id, tokenize(d.text, stops));
}

void DocumentTable::add(const std::string& id, BagOfWords bag) {
  if (!bags_.emplace(id, std::move(bag)).second) throw InputError("duplicate document id '" + id + "'");
}

const BagOfWords* DocumentTable::find(const std::string& id) const {
  auto it = bags_.find(id);
  return it == bags_.end() ? nullptr : &it->second;
}

QueryBags tokenize_topics(std::span<const Topic> topics, const StopList& stops) {
  QueryBags out;
  for (const auto& t : topics) {
    if (!out.emplace(t.id, tokenize(t.title, stops)).second) throw InputError("duplicate topic id '" + t.id + "'");
  }
  return out;
}

namespace {

struct QueryOutcome {
  std::optional<GsrPoint> point;
  std::string reason;
};

QueryOutcome score_query(const std::string& qid, const RankedList& list, const QueryBags& queries,
                         const DocumentTable& docs, const GenderScorer& scorer, const PointOptions& options) {
  auto q = queries.find(qid);
  if (q == queries.end()) return {std::nullopt, "no topic text"};
  std::size_t k = list.size();
  if (options.cutoffs != nullptr) {
    auto c = options.cutoffs->find(qid);
    if (c == options.cutoffs->end() || c->second == 0) return {std::nullopt, "no relevant documents"};
    k = std::min(k, c->second);
  }
  if (k == 0) return {std::nullopt, "empty ranked list"};
  auto gq = query_genderedness(q->second, scorer);
  if (!gq) return {std::nullopt, "query genderedness undefined"};

  std::vector<std::optional<double>> doc_g(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (const auto* bag = docs.find(list.items[i].doc_id)) doc_g[i] = document_genderedness(*bag, q->second, scorer);
  }
  auto gl = weighted_list_genderedness(doc_g);
  if (!gl) return {std::nullopt, "list genderedness undefined"};
  return {GsrPoint{qid, *gq, *gl, k}, {}};
}

}  // namespace

std::vector<GsrPoint> gsr_points(const RunSet& run, const QueryBags& queries, const DocumentTable& docs,
                                 const GenderScorer& scorer, const PointOptions& options,
                                 std::vector<DroppedQuery>& dropped) {
  std::vector<const RankedList*> lists;
  lists.reserve(run.size());
  for (const auto& [_, list] : run) lists.push_back(&list);

  std::vector<QueryOutcome> outcomes(lists.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(lists.size())));
  auto work = [&](unsigned shard) {
    for (std::size_t i = shard; i < lists.size(); i += threads) {
      outcomes[i] = score_query(lists[i]->query_id, *lists[i], queries, docs, scorer, options);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned s = 0; s < threads; ++s) pool.emplace_back(work, s);
  }

  std::vector<GsrPoint> points;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (outcomes[i].point) {
      points.push_back(std::move(*outcomes[i].point));
    } else {
      dropped.push_back({lists[i]->query_id, outcomes[i].reason});
    }
  }
  return points;
}

AuditReport audit(const RunSet& run, const QueryBags& queries, const DocumentTable& docs, const Qrels& qrels,
                  const GenderScorer& scorer, unsigned threads) {
  std::map<std::string, std::size_t> cutoffs;
  RunSet perfect;
  for (const auto& [qid, _] : run) {
    cutoffs[qid] = qrels.relevant_count(qid);
    if (cutoffs[qid] > 0) perfect[qid] = perfect_engine(qrels, qid);
  }
  AuditReport report;
  PointOptions opts{&cutoffs, threads};
  report.system = gsr_slope(gsr_points(run, queries, docs, scorer, opts, report.dropped));
  report.perfect = gsr_slope(gsr_points(perfect, queries, docs, scorer, opts, report.dropped_perfect));
  if (report.perfect.slope != 0.0) report.system.relative_pct = relative_gsr(report.system, report.perfect);
  report.perfect.relative_pct = 0.0;
  return report;
}

SlopeSplit split_slope(std::span<const ListBreakdown> lists) {
  struct Row {
    double gq;
    double gl;
    const ListBreakdown* src;
  };
  std::vector<Row> rows;
  for (const auto& l : lists) {
    if (auto gl = weighted_list_genderedness(l.doc_g)) rows.push_back({l.gq, *gl, &l});
  }
  if (rows.size() < 2) throw DegenerateError("slope split needs at least 2 defined lists");
  const double n = static_cast<double>(rows.size());
  double mu_q = 0.0;
  double mu_l = 0.0;
  for (const auto& r : rows) {
    mu_q += r.gq;
    mu_l += r.gl;
  }
  mu_q /= n;
  mu_l /= n;
  double var = 0.0;
  for (const auto& r : rows) var += (r.gq - mu_q) * (r.gq - mu_q);
  var /= n;
  if (!(var > 0.0)) throw DegenerateError("all queries have the same genderedness; slope undefined");

  auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
  SlopeSplit out;
  double cov = 0.0;
  for (const auto& r : rows) {
    double total = 0.0;
    for (std::size_t i = 0; i < r.src->doc_g.size(); ++i) {
      if (r.src->doc_g[i]) total += rank_weight(i + 1);
    }
    for (std::size_t i = 0; i < r.src->doc_g.size(); ++i) {
      if (!r.src->doc_g[i]) continue;
      const double g = *r.src->doc_g[i];
      const double term = (r.gq - mu_q) * (rank_weight(i + 1) / total) * (g - mu_l) / (var * n);
      if (sgn(g) == sgn(r.gq)) {
        out.stereotypical += term;
        ++out.n_stereotypical;
      } else {
        out.counter += term;
        ++out.n_counter;
      }
    }
    cov += (r.gq - mu_q) * (r.gl - mu_l);
  }
  out.slope = cov / n / var;
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_rows(std::string& out, const GsrResult& r) {
  out += "query_id\tg_q\tg_L\tk_used\n";
  for (const auto& p : r.points) {
    out += p.query_id + "\t" + format_double(p.gq) + "\t" + format_double(p.gl) + "\t" + std::to_string(p.k_used) +
           "\n";
  }
}

void append_footer(std::string& out, const GsrResult& r, const std::string& prefix) {
  out += prefix + "slope\t" + format_double(r.slope) + "\n";
  out += prefix + "intercept\t" + format_double(r.intercept) + "\n";
  out += prefix + "relative_pct\t" + (r.relative_pct ? format_double(*r.relative_pct) : std::string("NA")) + "\n";
  out += prefix + "mu_q\t" + format_double(r.mu_q) + "\n";
  out += prefix + "sigma2_q\t" + format_double(r.sigma2_q) + "\n";
  out += prefix + "mu_qL\t" + format_double(r.mu_ql) + "\n";
  out += prefix + "n\t" + std::to_string(r.n) + "\n";
}

void append_header(std::string& out, std::span<const std::string> header_lines) {
  for (const auto& h : header_lines) out += "# " + h + "\n";
}

}  // namespace

std::string format_result_tsv(const GsrResult& result, std::span<const std::string> header_lines) {
  std::string out;
  append_header(out, header_lines);
  append_rows(out, result);
  out += "#footer\n";
  append_footer(out, result, "");
  return out;
}

std::string format_audit_tsv(const AuditReport& report, std::span<const std::string> header_lines) {
  std::string out;
  append_header(out, header_lines);
  append_rows(out, report.system);
  out += "#footer\n";
  append_footer(out, report.system, "");
  append_footer(out, report.perfect, "perfect_");
  auto list_dropped = [&](const char* key, const std::vector<DroppedQuery>& d) {
    out += key;
    out += '\t';
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i) out += ',';
      out += d[i].query_id + ":" + d[i].reason;
    }
    out += '\n';
  };
  list_dropped("dropped", report.dropped);
  list_dropped("perfect_dropped", report.dropped_perfect);
  out += "w_normalization\trenormalized over documents with defined genderedness\n";
  return out;
}

std::string format_scatter_csv(const GsrResult& result) {
  std::string out = "g_q,g_L\n";
  for (const auto& p : result.points) out += format_double(p.gq) + "," + format_double(p.gl) + "\n";
  return out;
}

double read_report_slope(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  bool in_footer = false;
  while (std::getline(in, line)) {
    if (line == "#footer") {
      in_footer = true;
      continue;
    }
    if (in_footer && line.starts_with("slope\t")) return std::stod(line.substr(6));
  }
  throw FormatError(path.string() + ": no slope in report footer");
}

}  // namespace gsr
