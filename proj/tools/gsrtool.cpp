#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "cli_support.hpp"
#include "gsr/collection_io.hpp"
#include "gsr/direct_stereotype.hpp"
#include "gsr/error.hpp"
#include "gsr/eval_metrics.hpp"
#include "gsr/gsr_core.hpp"
#include "gsr/io_util.hpp"
#include "gsr/retrieval.hpp"
#include "gsr/stat_tools.hpp"
#include "gsr/synthetic_lab.hpp"

using namespace gsrtool;

namespace {

void add_embedding_flags(CLI::App* cmd, EmbeddingFlags& f, bool required = true) {
  auto* e = cmd->add_option("--embeddings", f.path, "Embedding file used to measure genderedness");
  if (required) e->required();
  e->check(CLI::ExistingFile);
  cmd->add_option("--format", f.format, "Embedding format")
      ->check(CLI::IsMember({"auto", "binary", "text"}))
      ->capture_default_str();
  cmd->add_option("--pairs", f.pairs, "Definitional pairs CSV (female,male)");
  cmd->add_option("--anchor", f.anchor, "Token that must score positive")->capture_default_str();
  cmd->add_flag("--center", f.center, "Center difference vectors before the PCA");
  cmd->add_flag("--normalize-differences", f.normalize_differences, "Scale difference vectors to unit length");
  cmd->add_flag("--raw-words", f.raw_words, "Do not scale word vectors to unit length before differencing");
}

std::string g_or_na(const std::optional<double>& g) { return g ? gsr::format_double(*g) : "NA"; }

// ---------------------------------------------------------------- direction

struct DirectionCmd {
  EmbeddingFlags emb;
  std::vector<std::string> words{"sister", "brother"};
  std::string out;
  std::string axis_out;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("direction", "Extract the gender direction and report its statistics");
    add_embedding_flags(c, emb);
    c->add_option("--words", words, "Words to score with the direction")->capture_default_str();
    c->add_option("--out", out, "TSV report path");
    c->add_option("--axis-out", axis_out, "Write the unit axis, one component per line");
    c->callback([this] { run(); });
  }

  void run() {
    auto m = load_model(emb);
    ReportHeader h;
    h.add_file("embeddings", emb.path);
    h.add_file("pairs", emb.pairs);
    std::ostringstream tsv;
    for (const auto& l : h.lines()) tsv << "# " << l << "\n";
    tsv << "key\tvalue\n";
    tsv << "explained_variance_ratio\t" << gsr::format_double(m->direction.explained_variance_ratio) << "\n";
    tsv << "dim\t" << m->store.dim() << "\n";
    tsv << "vocabulary\t" << m->store.size() << "\n";
    tsv << "pairs_used\t" << m->direction.pairs_used.pairs.size() << "\n";
    tsv << "pairs_dropped\t" << m->direction.pairs_dropped.size() << "\n";
    tsv << "sign_anchor\t" << m->direction.sign_anchor << "\n";
    std::cout << "explained variance ratio  " << fixed(m->direction.explained_variance_ratio) << "\n";
    std::cout << "pairs used                " << m->direction.pairs_used.pairs.size() << "\n";
    for (const auto& [f, mm] : m->direction.pairs_dropped) {
      std::cout << "pair dropped (missing)    " << f << " / " << mm << "\n";
    }
    for (const auto& w : words) {
      auto g = (*m->scorer)(w);
      tsv << "g(" << w << ")\t" << g_or_na(g) << "\n";
      std::cout << "g(" << w << ")" << std::string(w.size() < 22 ? 22 - w.size() : 1, ' ')
                << (g ? fixed(*g) : std::string("undefined (not in vocabulary)")) << "\n";
    }
    if (!out.empty()) emit_file(out, tsv.str());
    if (!axis_out.empty()) {
      std::string a;
      for (double x : m->direction.axis) a += gsr::format_double(x) + "\n";
      emit_file(axis_out, a);
    }
  }
};

// ---------------------------------------------------------------- score

struct ScoreCmd {
  EmbeddingFlags emb;
  std::vector<std::string> inputs;
  std::string file;
  std::string stopwords;
  std::string out;
  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("score", "Per-term and aggregate genderedness of words, queries or lines of a file");
    add_embedding_flags(c, emb);
    c->add_option("inputs", inputs, "Words or quoted queries");
    c->add_option("--file", file, "One query per line")->check(CLI::ExistingFile);
    c->add_option("--stopwords", stopwords, "Stop list file (default: bundled English list)");
    c->add_option("--out", out, "TSV path");
    c->callback([this] { run(); });
  }

  void run() {
    std::vector<std::string> all = inputs;
    if (!file.empty()) {
      for (const auto& l : gsr::read_word_list(file)) all.push_back(l);
    }
    if (all.empty()) throw UsageError("score needs at least one input or --file");
    auto m = load_model(emb);
    const auto stops = load_stops(stopwords);
    ReportHeader h;
    h.add_file("embeddings", emb.path);
    h.add_stops(stops);
    std::ostringstream tsv;
    for (const auto& l : h.lines()) tsv << "# " << l << "\n";
    tsv << "input\tterm\tg\n";
    for (const auto& in : all) {
      const auto bag = gsr::tokenize(in, stops);
      std::cout << in << "\n";
      for (const auto& t : bag.tokens) {
        auto g = (*m->scorer)(t);
        tsv << in << "\t" << t << "\t" << g_or_na(g) << "\n";
        std::cout << "  " << t << "\t" << (g ? fixed(*g) : "NA") << "\n";
      }
      auto agg = gsr::query_genderedness(bag, *m->scorer);
      tsv << in << "\t*\t" << g_or_na(agg) << "\n";
      std::cout << "  mean\t"
                << (agg ? fixed(*agg)
                        : std::string(bag.empty() ? "undefined (only stop words)" : "undefined (no term in vocabulary)"))
                << "\n";
    }
    if (!out.empty()) emit_file(out, tsv.str());
  }
};

// ---------------------------------------------------------------- queries-report

struct QueriesReportCmd {
  EmbeddingFlags emb;
  std::string topics;
  std::string stopwords;
  std::size_t top = 10;
  std::string out;
  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("queries-report", "Rank topics by genderedness and list both extremes");
    add_embedding_flags(c, emb);
    c->add_option("--topics", topics, "TREC topics file")->required()->check(CLI::ExistingFile);
    c->add_option("--stopwords", stopwords, "Stop list file");
    c->add_option("--top", top, "Queries per extreme")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--out", out, "TSV path");
    c->callback([this] { run(); });
  }

  void run() {
    auto m = load_model(emb);
    const auto stops = load_stops(stopwords);
    const auto parsed = gsr::parse_topics(topics);
    struct Row {
      std::string id;
      std::string title;
      double g;
      std::string terms;
    };
    std::vector<Row> rows;
    std::vector<std::string> undefined;
    for (const auto& t : parsed) {
      const auto bag = gsr::tokenize(t.title, stops);
      auto g = gsr::query_genderedness(bag, *m->scorer);
      if (!g) {
        undefined.push_back(t.id);
        continue;
      }
      std::string terms;
      for (const auto& tok : bag.tokens) {
        if (!terms.empty()) terms += ' ';
        terms += tok + ":" + g_or_na((*m->scorer)(tok));
      }
      rows.push_back({t.id, t.title, *g, terms});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return a.g != b.g ? a.g > b.g : a.id < b.id;
    });

    std::vector<std::pair<std::string, const Row*>> picked;
    if (rows.size() < 2 * top) {
      std::cerr << "warning: only " << rows.size() << " scorable topics; listing all of them\n";
      for (const auto& r : rows) picked.emplace_back("all", &r);
    } else {
      for (std::size_t i = 0; i < top; ++i) picked.emplace_back("female", &rows[i]);
      for (std::size_t i = 0; i < top; ++i) picked.emplace_back("male", &rows[rows.size() - 1 - i]);
    }

    ReportHeader h;
    h.add_file("embeddings", emb.path);
    h.add_file("topics", topics);
    h.add_stops(stops);
    std::ostringstream tsv;
    for (const auto& l : h.lines()) tsv << "# " << l << "\n";
    tsv << "extreme\tquery_id\tg_q\ttitle\tterms\n";
    for (const auto& [side, r] : picked) {
      tsv << side << "\t" << r->id << "\t" << gsr::format_double(r->g) << "\t" << r->title << "\t" << r->terms << "\n";
      std::cout << side << "\t" << r->id << "\t" << fixed(r->g, 4) << "\t" << r->title << "\n";
    }
    for (const auto& id : undefined) std::cout << "undefined\t" << id << "\n";
    if (!out.empty()) emit_file(out, tsv.str());
  }
};

// ---------------------------------------------------------------- collection-based commands

struct CollectionFlags {
  std::string topics;
  std::string qrels;
  std::string docs;
  std::string stopwords;
};

struct EngineFlags {
  std::string engine = "bm25";
  std::string run;
  std::string engine_embeddings;
  std::string engine_format = "auto";
  std::string debias = "none";
  std::string exempt;
  std::uint64_t seed = 42;
  std::size_t depth = gsr::kDefaultDepth;
  double k1 = 1.2;
  double b = 0.75;
  double mu = 1000.0;
};

void add_collection_flags(CLI::App* c, CollectionFlags& f, bool qrels_required) {
  c->add_option("--topics", f.topics, "TREC topics file")->required()->check(CLI::ExistingFile);
  auto* q = c->add_option("--qrels", f.qrels, "TREC qrels file")->check(CLI::ExistingFile);
  if (qrels_required) q->required();
  c->add_option("--docs", f.docs, "Documents: TREC SGML or JSONL (.jsonl), optionally gzipped")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--stopwords", f.stopwords, "Stop list file");
}

void add_engine_flags(CLI::App* c, EngineFlags& f) {
  c->add_option("--engine", f.engine, "Retrieval model")
      ->check(CLI::IsMember({"tfidf", "bm25", "qlm", "emb-add", "emb-si", "perfect", "random", "runfile"}))
      ->capture_default_str();
  c->add_option("--run", f.run, "TREC run file for --engine runfile")->check(CLI::ExistingFile);
  c->add_option("--engine-embeddings", f.engine_embeddings, "Embeddings for emb-add/emb-si (default: --embeddings)")
      ->check(CLI::ExistingFile);
  c->add_option("--engine-format", f.engine_format, "Format of --engine-embeddings")
      ->check(CLI::IsMember({"auto", "binary", "text"}));
  c->add_option("--debias", f.debias, "Debias the engine embeddings")
      ->check(CLI::IsMember({"none", "regular", "strong"}))
      ->capture_default_str();
  c->add_option("--exempt", f.exempt, "Word list exempt from regular debiasing");
  c->add_option("--seed", f.seed, "Seed for --engine random")->capture_default_str();
  c->add_option("--depth", f.depth, "Maximum list length")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--k1", f.k1, "BM25 k1")->capture_default_str();
  c->add_option("--b", f.b, "BM25 b")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  c->add_option("--mu", f.mu, "Dirichlet prior")->capture_default_str()->check(CLI::PositiveNumber);
}

struct LoadedCollection {
  gsr::StopList stops;
  std::vector<gsr::Topic> topics;
  std::vector<gsr::Document> docs;
  std::optional<gsr::Qrels> qrels;
  gsr::QueryBags queries;
};

LoadedCollection load_collection(const CollectionFlags& f) {
  LoadedCollection c;
  c.stops = load_stops(f.stopwords);
  c.topics = gsr::parse_topics(f.topics);
  gsr::ParseLog log;
  c.docs = gsr::load_documents(f.docs, &log);
  if (!f.qrels.empty()) c.qrels = gsr::parse_qrels(f.qrels, &log);
  for (const auto& w : log.warnings) std::cerr << "warning: " << w << "\n";
  c.queries = gsr::tokenize_topics(c.topics, c.stops);
  return c;
}

std::uint64_t query_seed(std::uint64_t seed, const std::string& qid) {
  return seed ^ std::stoull(gsr::fnv1a_hex(qid), nullptr, 16);
}

gsr::RunSet build_run(const EngineFlags& e, const LoadedCollection& c, const GenderModel& model,
                      const EmbeddingFlags& emb, unsigned threads, ReportHeader& header) {
  header.add("engine", e.engine);
  if (e.engine == "runfile") {
    if (e.run.empty()) throw UsageError("--engine runfile needs --run");
    header.add_file("run", e.run);
    auto run = gsr::read_trec_run(e.run);
    for (auto& [qid, list] : run) list = gsr::truncate_to_k(list, e.depth);
    return run;
  }
  if (e.engine == "perfect") {
    if (!c.qrels) throw UsageError("--engine perfect needs --qrels");
    gsr::RunSet run;
    for (const auto& [qid, _] : c.queries) {
      if (c.qrels->relevant_count(qid) > 0) run[qid] = gsr::perfect_engine(*c.qrels, qid);
    }
    return run;
  }

  std::vector<std::string> qids;
  for (const auto& [qid, _] : c.queries) qids.push_back(qid);
  std::vector<gsr::RankedList> lists(qids.size());
  std::vector<std::string> failed(qids.size());

  if (e.engine == "random") {
    header.add("seed", std::to_string(e.seed));
    std::vector<std::string> ids;
    for (const auto& d : c.docs) ids.push_back(d.id);
    const auto k = std::min(e.depth, ids.size());
    for (std::size_t i = 0; i < qids.size(); ++i) {
      lists[i] = gsr::random_engine(ids, k, query_seed(e.seed, qids[i]), qids[i]);
    }
  } else if (e.engine == "tfidf" || e.engine == "bm25" || e.engine == "qlm") {
    const auto index = gsr::build_index(c.docs, c.stops);
    if (e.engine == "bm25") header.add("bm25", "k1=" + fixed(e.k1) + " b=" + fixed(e.b));
    if (e.engine == "qlm") header.add("qlm", "mu=" + fixed(e.mu));
    parallel_for(qids.size(), threads, [&](std::size_t i) {
      const auto& q = c.queries.at(qids[i]);
      if (e.engine == "tfidf") {
        lists[i] = gsr::score_tfidf(index, qids[i], q, e.depth);
      } else if (e.engine == "bm25") {
        lists[i] = gsr::score_bm25(index, qids[i], q, {e.k1, e.b}, e.depth);
      } else {
        lists[i] = gsr::score_qlm(index, qids[i], q, e.mu, e.depth);
      }
    });
  } else {
    // emb-add / emb-si
    gsr::EmbeddingStore engine_store;
    const gsr::EmbeddingStore* store = &model.store;
    if (!e.engine_embeddings.empty()) {
      engine_store = load_store(e.engine_embeddings, e.engine_format);
      store = &engine_store;
      header.add_file("engine_embeddings", e.engine_embeddings);
    }
    header.add("debias", e.debias);
    if (e.debias != "none") {
      const auto dir = gsr::extract_direction(*store, pairs_from(emb), emb.anchor, pca_options(emb));
      if (e.debias == "regular") {
        const auto exempt = e.exempt.empty() ? gsr::GenderedWordSet::defaults() : gsr::load_word_set(e.exempt);
        header.add_file("exempt", e.exempt);
        engine_store = gsr::debias_regular(*store, dir, exempt);
      } else {
        engine_store = gsr::debias_strong(*store, dir);
      }
      store = &engine_store;
    }
    std::vector<std::string> ids;
    std::vector<gsr::BagOfWords> bags;
    for (const auto& d : c.docs) {
      ids.push_back(d.id);
      bags.push_back(gsr::tokenize(d.text, c.stops));
    }
    std::optional<gsr::InvertedIndex> index;
    if (e.engine == "emb-si") index = gsr::build_index(c.docs, c.stops);
    const gsr::SemanticEngine engine(*store, ids, bags,
                                     e.engine == "emb-si" ? gsr::TermWeighting::self_information
                                                          : gsr::TermWeighting::uniform,
                                     index ? &*index : nullptr);
    parallel_for(qids.size(), threads, [&](std::size_t i) {
      try {
        lists[i] = engine.score(qids[i], c.queries.at(qids[i]), e.depth);
      } catch (const gsr::InputError& err) {
        lists[i] = gsr::RankedList{qids[i], {}};
        failed[i] = err.what();
      }
    });
  }
  gsr::RunSet run;
  for (std::size_t i = 0; i < qids.size(); ++i) {
    if (!failed[i].empty()) std::cerr << "warning: query " << qids[i] << ": " << failed[i] << "\n";
    run[qids[i]] = std::move(lists[i]);
  }
  return run;
}

std::string metrics_tsv(const gsr::RunSet& run, const gsr::Qrels& qrels, const std::vector<std::string>& header,
                        double& map, double& p10, double& ndcg, std::size_t& n) {
  std::ostringstream out;
  for (const auto& l : header) out << "# " << l << "\n";
  out << "query_id\tap\tp10\tndcg100\n";
  double s_ap = 0, s_p = 0, s_n = 0;
  std::size_t count = 0;
  std::size_t count_ndcg = 0;
  for (const auto& [qid, list] : run) {
    if (qrels.relevant_count(qid) == 0) continue;
    const double ap = gsr::average_precision(list, qrels, qid);
    const double p = gsr::precision_at(list, qrels, qid, 10);
    const double nd = gsr::ndcg_at(list, qrels, qid, 100);
    out << qid << "\t" << gsr::format_double(ap) << "\t" << gsr::format_double(p) << "\t" << gsr::format_double(nd)
        << "\n";
    s_ap += ap;
    s_p += p;
    s_n += nd;
    ++count;
    ++count_ndcg;
  }
  n = count;
  map = count ? s_ap / double(count) : 0.0;
  p10 = count ? s_p / double(count) : 0.0;
  ndcg = count_ndcg ? s_n / double(count_ndcg) : 0.0;
  out << "#footer\nMAP\t" << gsr::format_double(map) << "\nP@10\t" << gsr::format_double(p10) << "\nnDCG@100\t"
      << gsr::format_double(ndcg) << "\nn\t" << count << "\n";
  return out.str();
}

struct AuditCmd {
  EmbeddingFlags emb;
  CollectionFlags col;
  EngineFlags eng;
  std::string out;
  std::string write_run;
  unsigned threads = default_threads();
  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("audit", "Run or read a ranking and measure its GSR against the perfect engine");
    add_embedding_flags(c, emb);
    add_collection_flags(c, col, false);
    add_engine_flags(c, eng);
    c->add_option("--out", out, "Output prefix: <out>.gsr.tsv, <out>.scatter.csv, <out>.metrics.tsv")->required();
    c->add_option("--write-run", write_run, "Also write the produced run in TREC format");
    c->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    c->callback([this] { run(); });
  }

  void run() {
    auto model = load_model(emb);
    const auto c = load_collection(col);
    ReportHeader h;
    h.add_file("embeddings", emb.path);
    h.add_file("topics", col.topics);
    h.add_file("qrels", col.qrels);
    h.add_file("docs", col.docs);
    h.add_stops(c.stops);
    const auto run = build_run(eng, c, *model, emb, threads, h);
    if (!write_run.empty()) emit_file(write_run, gsr::format_trec_run(run, eng.engine));

    const gsr::DocumentTable table(c.docs, c.stops);
    std::string prefix = out;
    if (c.qrels) {
      const auto report = gsr::audit(run, c.queries, table, *c.qrels, *model->scorer, threads);
      emit_file(prefix + ".gsr.tsv", gsr::format_audit_tsv(report, h.lines()));
      emit_file(prefix + ".scatter.csv", gsr::format_scatter_csv(report.system));
      emit_file(prefix + ".perfect_scatter.csv", gsr::format_scatter_csv(report.perfect));
      double map = 0, p10 = 0, ndcg = 0;
      std::size_t n = 0;
      emit_file(prefix + ".metrics.tsv", metrics_tsv(run, *c.qrels, h.lines(), map, p10, ndcg, n));
      std::cout << "GSR            " << fixed(report.system.slope) << " over " << report.system.n << " queries\n";
      std::cout << "perfect GSR    " << fixed(report.perfect.slope) << "\n";
      std::cout << "relative GSR   "
                << (report.system.relative_pct ? fixed(*report.system.relative_pct, 4) + "%" : std::string("NA"))
                << "\n";
      std::cout << "dropped        " << report.dropped.size() << " queries\n";
      std::cout << "MAP " << fixed(map, 4) << "  P@10 " << fixed(p10, 4) << "  nDCG@100 " << fixed(ndcg, 4) << "  ("
                << n << " queries)\n";
    } else {
      std::vector<gsr::DroppedQuery> dropped;
      gsr::PointOptions opts;
      opts.threads = threads;
      const auto result = gsr::gsr_slope(gsr::gsr_points(run, c.queries, table, *model->scorer, opts, dropped));
      auto lines = h.lines();
      lines.push_back("qrels\tnone; lists used in full, no perfect reference");
      emit_file(prefix + ".gsr.tsv", gsr::format_result_tsv(result, lines));
      emit_file(prefix + ".scatter.csv", gsr::format_scatter_csv(result));
      std::cout << "GSR            " << fixed(result.slope) << " over " << result.n << " queries\n";
      std::cout << "dropped        " << dropped.size() << " queries\n";
    }
  }
};

// ---------------------------------------------------------------- toy / synthetic

struct LabCmd {
  bool traits_shape = false;
  EmbeddingFlags emb;
  std::string jobs_path;
  std::string traits_path;
  std::string out;
  std::string export_dir;
  void attach(CLI::App& app, bool traits) {
    traits_shape = traits;
    auto* c = traits ? app.add_subcommand("synthetic", "Job/trait collection: GSR of the S, N and CS engines")
                     : app.add_subcommand("toy", "Job/person collection: GSR of the S, N and CS engines");
    add_embedding_flags(c, emb);
    c->add_option("--jobs", jobs_path, "Job CSV (job,group,pct_female,pct_male)")->check(CLI::ExistingFile);
    if (traits) c->add_option("--traits", traits_path, "Trait CSV (adjective,construct)")->check(CLI::ExistingFile);
    c->add_option("--out", out, "TSV report path");
    c->add_option("--export", export_dir, "Write topics.txt, docs.jsonl and run_{S,N,CS}.txt to this directory");
    c->callback([this] { run(); });
  }

  void run() {
    auto model = load_model(emb);
    const auto jobs = jobs_path.empty() ? gsr::JobTable::defaults() : gsr::JobTable::load(jobs_path);
    const auto traits = traits_path.empty() ? gsr::TraitTable::defaults() : gsr::TraitTable::load(traits_path);
    const auto collection = traits_shape ? gsr::build_synthetic_collection(jobs, traits) : gsr::build_toy_collection(jobs);
    ReportHeader h;
    h.add_file("embeddings", emb.path);
    h.add_file("jobs", jobs_path);
    h.add_file("traits", traits_path);
    std::ostringstream tsv;
    for (const auto& l : h.lines()) tsv << "# " << l << "\n";
    tsv << "engine\tslope\tn\tdropped\n";
    for (auto kind : {gsr::SimEngineKind::stereotypical, gsr::SimEngineKind::neutral,
                      gsr::SimEngineKind::counter_stereotypical}) {
      const auto run = gsr::simulate_engine(kind, collection, jobs, traits);
      std::vector<gsr::DroppedQuery> dropped;
      const auto r = gsr::run_gsr(collection, run, *model->scorer, &dropped);
      tsv << gsr::to_string(kind) << "\t" << gsr::format_double(r.slope) << "\t" << r.n << "\t" << dropped.size()
          << "\n";
      std::cout << gsr::to_string(kind) << "\tGSR " << fixed(r.slope) << "\t(" << r.n << " queries";
      if (!dropped.empty()) std::cout << ", " << dropped.size() << " dropped";
      std::cout << ")\n";
      if (!export_dir.empty()) {
        emit_file(fs::path(export_dir) / ("run_" + std::string(gsr::to_string(kind)) + ".txt"),
                  gsr::format_trec_run(run, gsr::to_string(kind)));
      }
    }
    if (!export_dir.empty()) {
      emit_file(fs::path(export_dir) / "topics.txt", gsr::format_topics(collection.collection.topics));
      emit_file(fs::path(export_dir) / "docs.jsonl", gsr::to_jsonl(collection.collection.documents));
    }
    if (!out.empty()) emit_file(out, tsv.str());
  }
};

// ---------------------------------------------------------------- parity

struct ParityCmd {
  EmbeddingFlags emb;
  std::string jobs_path;
  std::size_t samples = 10000;
  std::uint64_t seed = 42;
  unsigned threads = default_threads();
  std::string out;
  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("parity", "Correlate GSR with the stereotypical share over random toy solutions");
    add_embedding_flags(c, emb);
    c->add_option("--jobs", jobs_path, "Job CSV")->check(CLI::ExistingFile);
    c->add_option("--samples", samples, "Number of sampled solutions (>= 100)")->capture_default_str();
    c->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    c->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    c->add_option("--out", out, "Scatter CSV path");
    c->callback([this] { run(); });
  }

  void run() {
    auto model = load_model(emb);
    const auto jobs = jobs_path.empty() ? gsr::JobTable::defaults() : gsr::JobTable::load(jobs_path);
    const auto r = gsr::parity_experiment(*model->scorer, samples, seed, jobs, threads);
    std::cout << "samples    " << samples << " (seed " << seed << ")\n";
    std::cout << "Pearson r  " << fixed(r.correlation.r, 4) << "  p " << fixed(r.correlation.p, 3) << "\n";
    if (!out.empty()) {
      ReportHeader h;
      h.add_file("embeddings", emb.path);
      h.add("seed", std::to_string(seed));
      h.add("pearson_r", gsr::format_double(r.correlation.r));
      std::string csv;
      for (const auto& l : h.lines()) csv += "# " + l + "\n";
      emit_file(out, csv + gsr::format_parity_csv(r));
    }
  }
};

// ---------------------------------------------------------------- validate

struct ValidateCmd {
  EmbeddingFlags emb;
  std::string jobs_path;
  std::string traits_path;
  std::string science_arts;
  std::string career_family;
  std::uint64_t trials = 1000000;
  std::uint64_t exact_limit = 20000000;
  std::uint64_t seed = 42;
  unsigned threads = default_threads();
  bool swap = false;
  std::string out;
  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("validate", "Mean genderedness and permutation tests for the four word dichotomies");
    add_embedding_flags(c, emb);
    c->add_option("--jobs", jobs_path, "Job CSV")->check(CLI::ExistingFile);
    c->add_option("--traits", traits_path, "Trait CSV")->check(CLI::ExistingFile);
    c->add_option("--science-arts", science_arts, "CSV term,group with groups science/arts")->check(CLI::ExistingFile);
    c->add_option("--career-family", career_family, "CSV term,group with groups career/family")
        ->check(CLI::ExistingFile);
    c->add_option("--trials", trials, "Monte Carlo trials")->capture_default_str();
    c->add_option("--exact-limit", exact_limit, "Enumerate exactly up to this many labellings")->capture_default_str();
    c->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
    c->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    c->add_flag("--swap", swap, "Swap the groups of every dichotomy (sanity check)");
    c->add_option("--out", out, "TSV path");
    c->callback([this] { run(); });
  }

  void run() {
    auto model = load_model(emb);
    const auto jobs = jobs_path.empty() ? gsr::JobTable::defaults() : gsr::JobTable::load(jobs_path);
    const auto traits = traits_path.empty() ? gsr::TraitTable::defaults() : gsr::TraitTable::load(traits_path);
    auto dichotomies = gsr::default_dichotomies(jobs, traits);
    for (auto& d : dichotomies) {
      if (d.name == "science_arts" && !science_arts.empty()) {
        d = gsr::load_dichotomy(science_arts, d.name, "science", "arts");
      }
      if (d.name == "career_family" && !career_family.empty()) {
        d = gsr::load_dichotomy(career_family, d.name, "career", "family");
      }
      if (swap) {
        std::swap(d.male_words, d.female_words);
        std::swap(d.male_label, d.female_label);
      }
    }
    gsr::PermutationOptions opt;
    opt.trials = trials;
    opt.exact_limit = exact_limit;
    opt.seed = seed;
    opt.threads = threads;

    ReportHeader h;
    h.add_file("embeddings", emb.path);
    h.add("seed", std::to_string(seed));
    std::ostringstream tsv;
    for (const auto& l : h.lines()) tsv << "# " << l << "\n";
    tsv << "dichotomy\tmale_group\tfemale_group\tn_male\tn_female\tmean_g_male\tmean_g_female\tp\tmode\tresolution\t"
           "missing\n";
    std::size_t unavailable = 0;
    for (const auto& d : dichotomies) {
      gsr::DichotomyResult r;
      try {
        r = gsr::test_dichotomy(*model->scorer, d, opt);
      } catch (const gsr::InputError& e) {
        ++unavailable;
        tsv << d.name << "\t" << d.male_label << "\t" << d.female_label << "\tNA\tNA\tNA\tNA\tNA\tunavailable\tNA\t-\n";
        std::cout << d.name << ": unavailable (" << e.what() << ")\n";
        continue;
      }
      const bool at_floor = r.test.p <= r.test.resolution * (1 + 1e-12);
      std::string missing;
      for (const auto& w : r.missing) missing += (missing.empty() ? "" : ",") + w;
      tsv << d.name << "\t" << d.male_label << "\t" << d.female_label << "\t" << r.g_male.size() << "\t"
          << r.g_female.size() << "\t" << gsr::format_double(r.mean_male) << "\t"
          << gsr::format_double(r.mean_female) << "\t" << gsr::format_double(r.test.p) << "\t"
          << (r.test.exact ? "exact" : "monte_carlo") << "\t" << gsr::format_double(r.test.resolution) << "\t"
          << (missing.empty() ? "-" : missing) << "\n";
      std::cout << d.name << ": " << d.male_label << " " << fixed(r.mean_male, 4) << " vs " << d.female_label << " "
                << fixed(r.mean_female, 4) << "  p "
                << (at_floor ? "<= " + fixed(r.test.resolution, 3) + " (resolution)" : fixed(r.test.p, 4)) << " ("
                << (r.test.exact ? "exact" : "Monte Carlo") << ")";
      if (!r.missing.empty()) std::cout << "  missing: " << missing;
      std::cout << "\n";
    }
    if (!out.empty()) emit_file(out, tsv.str());
    if (unavailable > 0) throw gsr::Error(std::to_string(unavailable) + " dichotomies could not be tested");
  }
};

// ---------------------------------------------------------------- direct

struct DirectCmd {
  EmbeddingFlags emb;
  CollectionFlags col;
  EngineFlags eng;
  std::string male_entities;
  std::string female_entities;
  std::string male_names;
  std::string female_names;
  double epsilon = 0.5;
  std::vector<double> bins;
  std::string out;
  unsigned threads = default_threads();
  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("direct", "Representation-gap comparison of a run against the perfect engine");
    add_embedding_flags(c, emb);
    add_collection_flags(c, col, true);
    add_engine_flags(c, eng);
    c->add_option("--male-entities", male_entities, "Male entity lexicon")->check(CLI::ExistingFile);
    c->add_option("--female-entities", female_entities, "Female entity lexicon")->check(CLI::ExistingFile);
    c->add_option("--male-names", male_names, "Male first names")->check(CLI::ExistingFile);
    c->add_option("--female-names", female_names, "Female first names")->check(CLI::ExistingFile);
    c->add_option("--epsilon", epsilon, "Gap smoothing")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--bins", bins, "g(q) bin edges, increasing")->delimiter(',');
    c->add_option("--out", out, "TSV path for the bin table")->required();
    c->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    c->callback([this] { run(); });
  }

  void run() {
    if (male_entities.empty() != female_entities.empty()) throw UsageError("give both entity lexicons or neither");
    if (male_names.empty() != female_names.empty()) throw UsageError("give both name lists or neither");
    auto model = load_model(emb);
    const auto c = load_collection(col);
    ReportHeader h;
    h.add_file("embeddings", emb.path);
    h.add_file("topics", col.topics);
    h.add_file("qrels", col.qrels);
    h.add_file("docs", col.docs);
    h.add_stops(c.stops);
    auto lex = male_entities.empty() ? gsr::EntityLexicons::defaults()
                                     : gsr::EntityLexicons::load(male_entities, female_entities);
    h.add_file("male_entities", male_entities);
    h.add_file("female_entities", female_entities);
    if (!male_names.empty()) {
      lex.add_names(male_names, female_names);
      h.add_file("male_names", male_names);
      h.add_file("female_names", female_names);
    }
    h.add("epsilon", gsr::format_double(epsilon));

    const auto system_all = build_run(eng, c, *model, emb, threads, h);
    gsr::RunSet perfect;
    gsr::RunSet system;
    for (const auto& [qid, _] : c.queries) {
      if (c.qrels->relevant_count(qid) == 0) continue;
      perfect[qid] = gsr::perfect_engine(*c.qrels, qid);
      auto it = system_all.find(qid);
      system[qid] = it == system_all.end() ? gsr::RankedList{qid, {}} : it->second;
    }
    gsr::DocumentTable entity_docs(c.docs, gsr::StopList{});
    const auto edges = bins.empty() ? gsr::default_gap_bin_edges() : bins;
    const auto a = gsr::delta_gap_analysis(system, perfect, c.queries, entity_docs, *model->scorer, lex, edges, epsilon);
    emit_file(out, gsr::format_gap_bins_tsv(a.bins, h.lines()));
    std::cout << "queries " << a.records.size() << ", dropped " << a.dropped.size() << "\n";
    for (const auto& b : a.bins) {
      std::cout << "(" << fixed(b.lo, 3) << ", " << fixed(b.hi, 3) << "]  ";
      if (b.n_queries == 0) {
        std::cout << "empty\n";
      } else {
        std::cout << "male " << fixed(b.pct_male, 4) << "%  female " << fixed(b.pct_female, 4) << "%  neutral "
                  << fixed(b.pct_neutral, 4) << "%  (" << b.n_queries << ")\n";
      }
    }
  }
};

// ---------------------------------------------------------------- compare

struct CompareCmd {
  std::vector<std::string> left;
  std::vector<std::string> right;
  std::vector<std::string> labels;
  std::string out;
  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("compare", "Correlate per-system GSR between two sets of audit reports");
    c->add_option("--left", left, "Audit reports (.gsr.tsv), one per system")->required()->check(CLI::ExistingFile);
    c->add_option("--right", right, "Audit reports in the same system order")->required()->check(CLI::ExistingFile);
    c->add_option("--labels", labels, "System names");
    c->add_option("--out", out, "TSV path");
    c->callback([this] { run(); });
  }

  void run() {
    if (left.size() != right.size()) throw UsageError("--left and --right need the same number of reports");
    if (!labels.empty() && labels.size() != left.size()) throw UsageError("--labels must name every system");
    std::vector<double> a, b;
    for (std::size_t i = 0; i < left.size(); ++i) {
      a.push_back(gsr::read_report_slope(left[i]));
      b.push_back(gsr::read_report_slope(right[i]));
    }
    const auto sp = gsr::spearman(a, b);
    const auto pe = gsr::pearson(a, b);
    ReportHeader h;
    std::ostringstream tsv;
    for (const auto& l : h.lines()) tsv << "# " << l << "\n";
    tsv << "system\tleft\tright\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string name = labels.empty() ? fs::path(left[i]).filename().string() : labels[i];
      tsv << name << "\t" << gsr::format_double(a[i]) << "\t" << gsr::format_double(b[i]) << "\n";
    }
    tsv << "#footer\nspearman_rho\t" << gsr::format_double(sp.r) << "\nspearman_p\t" << gsr::format_double(sp.p)
        << "\npearson_r\t" << gsr::format_double(pe.r) << "\npearson_p\t" << gsr::format_double(pe.p) << "\n";
    std::cout << "Spearman rho " << fixed(sp.r, 4) << " (p " << fixed(sp.p, 3) << ")\n";
    std::cout << "Pearson r    " << fixed(pe.r, 4) << " (p " << fixed(pe.p, 3) << ")\n";
    if (!out.empty()) emit_file(out, tsv.str());
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gender stereotype reinforcement audits for rankings and word embeddings", "gsrtool"};
  app.set_version_flag("--version", std::string("gsrtool ") + GSR_VERSION);
  app.require_subcommand(1);

  DirectionCmd direction;
  ScoreCmd score;
  QueriesReportCmd queries;
  AuditCmd audit;
  LabCmd toy;
  LabCmd synthetic;
  ParityCmd parity;
  ValidateCmd validate;
  DirectCmd direct;
  CompareCmd compare;
  direction.attach(app);
  score.attach(app);
  queries.attach(app);
  audit.attach(app);
  toy.attach(app, false);
  synthetic.attach(app, true);
  parity.attach(app);
  validate.attach(app);
  direct.attach(app);
  compare.attach(app);
  ReportHeader::set_command_line(argc, argv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const gsr::DegenerateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const gsr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
