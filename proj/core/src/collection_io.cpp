#include "gsr/collection_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "gsr/error.hpp"
#include "gsr/io_util.hpp"

namespace gsr {

void Qrels::add(const std::string& query_id, const std::string& doc_id, int grade) {
  if (grade < 0) throw InputError("negative relevance grade for " + query_id + "/" + doc_id);
  auto& per_query = judgments_[query_id];
  if (!per_query.emplace(doc_id, grade).second) {
    throw InputError("duplicate judgment for " + query_id + "/" + doc_id);
  }
}

std::optional<int> Qrels::grade(const std::string& query_id, const std::string& doc_id) const {
  auto q = judgments_.find(query_id);
  if (q == judgments_.end()) return std::nullopt;
  auto d = q->second.find(doc_id);
  if (d == q->second.end()) return std::nullopt;
  return d->second;
}

std::size_t Qrels::relevant_count(const std::string& query_id) const {
  auto q = judgments_.find(query_id);
  if (q == judgments_.end()) return 0;
  return static_cast<std::size_t>(
      std::count_if(q->second.begin(), q->second.end(), [](const auto& kv) { return kv.second > 0; }));
}

const std::map<std::string, int>& Qrels::judgments_for(const std::string& query_id) const {
  static const std::map<std::string, int> empty;
  auto q = judgments_.find(query_id);
  return q == judgments_.end() ? empty : q->second;
}

std::vector<std::string> Qrels::query_ids() const {
  std::vector<std::string> out;
  for (const auto& [q, _] : judgments_) out.push_back(q);
  return out;
}

std::size_t Qrels::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, m] : judgments_) n += m.size();
  return n;
}

std::string decode_entities(std::string_view s) {
  static constexpr std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    bool matched = false;
    if (s[i] == '&') {
      for (const auto& [name, ch] : kEntities) {
        if (s.substr(i, name.size()) == name) {
          out.push_back(ch);
          i += name.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.push_back(s[i++]);
  }
  return out;
}

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

std::string normalize_ws(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending = !out.empty();
    } else {
      if (pending) out.push_back(' ');
      pending = false;
      out.push_back(c);
    }
  }
  return out;
}

// Tag lookups run against an uppercased shadow of the content.
struct SgmlView {
  const std::string& raw;
  std::string up;

  explicit SgmlView(const std::string& content) : raw(content), up(upper(content)) {}

  std::size_t find(std::string_view tag, std::size_t from) const { return up.find(tag, from); }
};

}  // namespace

std::vector<Topic> parse_topics_text(const std::string& content) {
  SgmlView view(content);
  std::vector<Topic> out;
  std::size_t pos = 0;
  std::size_t ordinal = 0;
  while ((pos = view.find("<TOP>", pos)) != std::string::npos) {
    ++ordinal;
    auto end = view.find("</TOP>", pos);
    if (end == std::string::npos) end = content.size();
    const std::string_view block(content.data() + pos, end - pos);
    const std::string_view block_up(view.up.data() + pos, end - pos);

    auto field = [&](std::string_view tag) -> std::optional<std::string> {
      auto at = block_up.find(tag);
      if (at == std::string_view::npos) return std::nullopt;
      at += tag.size();
      auto stop = block.find('<', at);
      if (stop == std::string_view::npos) stop = block.size();
      return std::string(block.substr(at, stop - at));
    };

    auto num = field("<NUM>");
    auto title = field("<TITLE>");
    std::string id;
    if (num) {
      std::string_view v = trim(*num);
      if (upper(v.substr(0, 7)) == "NUMBER:") v = trim(v.substr(7));
      id = normalize_ws(v);
    }
    if (id.empty() || !title) {
      throw FormatError("topic block " + std::to_string(ordinal) + " is missing " +
                        (id.empty() ? "<num>" : "<title>"));
    }
    if (id.find(' ') != std::string::npos) {
      throw FormatError("topic block " + std::to_string(ordinal) + " has a topic id with spaces");
    }
    out.push_back({id, normalize_ws(decode_entities(*title))});
    pos = end;
  }
  return out;
}

std::vector<Topic> parse_topics(const std::filesystem::path& path) { return parse_topics_text(read_file(path)); }

std::string format_topics(const std::vector<Topic>& topics) {
  std::string out;
  for (const auto& t : topics) out += "<top>\n<num> Number: " + t.id + "\n<title> " + t.title + "\n</top>\n\n";
  return out;
}

Qrels parse_qrels_text(const std::string& content, ParseLog* log) {
  Qrels qrels;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string topic, iter, docno, rel, extra;
    if (!(fields >> topic)) continue;
    if (!(fields >> iter >> docno >> rel) || (fields >> extra)) {
      throw FormatError("qrels line " + std::to_string(line_no) + ": expected 'topic iter docno rel'");
    }
    int grade = 0;
    auto [ptr, ec] = std::from_chars(rel.data(), rel.data() + rel.size(), grade);
    if (ec != std::errc{} || ptr != rel.data() + rel.size()) {
      throw FormatError("qrels line " + std::to_string(line_no) + ": bad grade '" + rel + "'");
    }
    if (grade < 0) {
      if (log) log->warnings.push_back("qrels line " + std::to_string(line_no) + ": negative grade clamped to 0");
      grade = 0;
    }
    try {
      qrels.add(topic, docno, grade);
    } catch (const InputError& e) {
      throw FormatError("qrels line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return qrels;
}

Qrels parse_qrels(const std::filesystem::path& path, ParseLog* log) { return parse_qrels_text(read_file(path), log); }

std::vector<Document> parse_trec_docs_text(const std::string& content, ParseLog* log) {
  SgmlView view(content);
  std::vector<Document> out;
  std::set<std::string> seen;
  std::size_t pos = 0;
  std::size_t ordinal = 0;
  while ((pos = view.find("<DOC>", pos)) != std::string::npos) {
    ++ordinal;
    auto end = view.find("</DOC>", pos);
    if (end == std::string::npos) end = content.size();

    auto docno_at = view.find("<DOCNO>", pos);
    if (docno_at == std::string::npos || docno_at >= end) {
      throw FormatError("document block " + std::to_string(ordinal) + " has no <DOCNO>");
    }
    docno_at += 7;
    auto docno_end = view.find("</DOCNO>", docno_at);
    if (docno_end == std::string::npos || docno_end > end) {
      throw FormatError("document block " + std::to_string(ordinal) + " has an unterminated <DOCNO>");
    }
    std::string id(trim(std::string_view(content).substr(docno_at, docno_end - docno_at)));
    if (id.empty()) throw FormatError("document block " + std::to_string(ordinal) + " has an empty <DOCNO>");
    if (!seen.insert(id).second) throw FormatError("duplicate document id '" + id + "'");

    std::string text;
    std::size_t t = pos;
    while ((t = view.find("<TEXT>", t)) != std::string::npos && t < end) {
      t += 6;
      auto te = view.find("</TEXT>", t);
      if (te == std::string::npos || te > end) te = end;
      auto segment = normalize_ws(decode_entities(std::string_view(content).substr(t, te - t)));
      if (!segment.empty()) {
        if (!text.empty()) text.push_back(' ');
        text += segment;
      }
      t = te;
    }
    if (text.empty() && log) log->warnings.push_back("document " + id + " (block " + std::to_string(ordinal) + ") has empty text");
    out.push_back({std::move(id), std::move(text)});
    pos = end;
  }
  return out;
}

std::vector<Document> parse_trec_docs(const std::filesystem::path& path, ParseLog* log) {
  return parse_trec_docs_text(read_file(path), log);
}

std::vector<Document> parse_jsonl_docs_text(const std::string& content, ParseLog* log) {
  std::vector<Document> out;
  std::set<std::string> seen;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError("JSONL line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() || !obj.contains("text") ||
        !obj["text"].is_string()) {
      throw FormatError("JSONL line " + std::to_string(line_no) + ": expected string fields \"id\" and \"text\"");
    }
    std::string id(trim(obj["id"].get<std::string>()));
    if (id.empty()) throw FormatError("JSONL line " + std::to_string(line_no) + ": empty id");
    if (!seen.insert(id).second) throw FormatError("duplicate document id '" + id + "'");
    auto text = obj["text"].get<std::string>();
    if (text.empty() && log) log->warnings.push_back("JSONL line " + std::to_string(line_no) + ": document " + id + " has empty text");
    out.push_back({std::move(id), std::move(text)});
  }
  return out;
}

std::vector<Document> parse_jsonl_docs(const std::filesystem::path& path, ParseLog* log) {
  return parse_jsonl_docs_text(read_file(path), log);
}

std::string to_jsonl(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& d : docs) {
    nlohmann::ordered_json obj;
    obj["id"] = d.id;
    obj["text"] = d.text;
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<Document> load_documents(const std::filesystem::path& path, ParseLog* log) {
  auto name = path.filename().string();
  if (name.size() > 3 && name.ends_with(".gz")) name.resize(name.size() - 3);
  if (name.ends_with(".jsonl") || name.ends_with(".json")) return parse_jsonl_docs(path, log);
  return parse_trec_docs(path, log);
}

}  // namespace gsr
