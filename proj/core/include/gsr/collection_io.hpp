#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gsr {

struct Topic {
  std::string id;
  std::string title;
};

struct Document {
  std::string id;
  std::string text;
  friend bool operator==(const Document&, const Document&) = default;
};

// (query_id, doc_id) -> non-negative grade.
class Qrels {
 public:
  // Throws InputError on a duplicate pair or a negative grade.
  void add(const std::string& query_id, const std::string& doc_id, int grade);

  std::optional<int> grade(const std::string& query_id, const std::string& doc_id) const;
  bool has_query(const std::string& query_id) const { return judgments_.contains(query_id); }
  // Documents with grade > 0.
  std::size_t relevant_count(const std::string& query_id) const;
  const std::map<std::string, int>& judgments_for(const std::string& query_id) const;
  std::vector<std::string> query_ids() const;
  std::size_t size() const noexcept;

 private:
  std::map<std::string, std::map<std::string, int>> judgments_;
};

// Every skipped or altered record, with a line or block locator.
struct ParseLog {
  std::vector<std::string> warnings;
};

// TREC topic SGML: <top> blocks with <num> and <title>. A leading "Number:"
// label in <num> is dropped; the rest is the topic id.
std::vector<Topic> parse_topics(const std::filesystem::path& path);
std::vector<Topic> parse_topics_text(const std::string& content);
// Inverse of parse_topics_text for ids and titles free of markup.
std::string format_topics(const std::vector<Topic>& topics);

// "topic iter docno rel" lines. Negative grades are clamped to 0 and logged.
Qrels parse_qrels(const std::filesystem::path& path, ParseLog* log = nullptr);
Qrels parse_qrels_text(const std::string& content, ParseLog* log = nullptr);

// <DOC>/<DOCNO>/<TEXT> SGML; all TEXT segments of a DOC joined with spaces.
std::vector<Document> parse_trec_docs(const std::filesystem::path& path, ParseLog* log = nullptr);
std::vector<Document> parse_trec_docs_text(const std::string& content, ParseLog* log = nullptr);

// One {"id": ..., "text": ...} object per line.
std::vector<Document> parse_jsonl_docs(const std::filesystem::path& path, ParseLog* log = nullptr);
std::vector<Document> parse_jsonl_docs_text(const std::string& content, ParseLog* log = nullptr);
std::string to_jsonl(const std::vector<Document>& docs);

// Dispatches on extension: .jsonl/.json(.gz) -> JSONL, anything else -> TREC SGML.
std::vector<Document> load_documents(const std::filesystem::path& path, ParseLog* log = nullptr);

// Decodes &amp; &lt; &gt; &quot; &apos;.
std::string decode_entities(std::string_view s);

struct Collection {
  std::vector<Topic> topics;
  std::vector<Document> documents;
  Qrels qrels;
};

}  // namespace gsr
