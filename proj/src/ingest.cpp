#include "remine/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <unordered_set>

#include <json.hpp>

#include "remine/errors.hpp"
#include "remine/textnorm.hpp"

namespace remine::ingest {

namespace {

using json = nlohmann::json;

constexpr std::size_t kMaxSkipMessages = 20;

RawPost parse_record(const json& j) {
  RawPost p;
  if (!j.is_object()) throw validation_error("record is not a JSON object");

  const auto need = [&](const char* field) -> const json& {
    auto it = j.find(field);
    if (it == j.end()) throw validation_error(std::string("missing field: ") + field);
    return *it;
  };

  p.id = need("id").get<std::string>();
  if (p.id.empty()) throw validation_error("empty id");

  const std::string kind = need("kind").get<std::string>();
  if (kind == "post") p.kind = PostKind::post;
  else if (kind == "comment") p.kind = PostKind::comment;
  else throw validation_error("unknown kind: " + kind);

  p.created_utc = need("created_utc").get<std::int64_t>();
  if (p.created_utc <= 0) throw validation_error("created_utc must be > 0");

  p.body = need("body").get<std::string>();

  if (p.kind == PostKind::comment) {
    auto it = j.find("parent_id");
    if (it == j.end() || !it->is_string())
      throw validation_error("comment without parent_id");
    p.parent_id = it->get<std::string>();
  }
  if (p.kind == PostKind::post) {
    if (auto it = j.find("title"); it != j.end() && it->is_string())
      p.title = it->get<std::string>();
  }
  if (auto it = j.find("score"); it != j.end() && it->is_number())
    p.score = it->get<std::int64_t>();
  if (auto it = j.find("permalink"); it != j.end() && it->is_string())
    p.permalink = it->get<std::string>();
  return p;
}

}  // namespace

std::size_t Corpus::post_count() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(),
                    [](const RawPost& p) { return p.kind == PostKind::post; }));
}

std::size_t Corpus::comment_count() const { return records.size() - post_count(); }

Corpus parse_dump(std::istream& in, const std::string& source_name,
                  ParseReport* report) {
  if (!in) throw io_error("unreadable dump stream: " + source_name);

  Corpus corpus;
  corpus.provenance.push_back(source_name);
  ParseReport local;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::string first_error;

  while (std::getline(in, line)) {
    ++local.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string problem;
    if (line.empty()) {
      problem = "empty line";
    } else {
      try {
        RawPost p = parse_record(json::parse(line));
        if (!seen_ids.insert(p.id).second) {
          problem = "duplicate id: " + p.id;
        } else {
          corpus.records.push_back(std::move(p));
          ++local.parsed;
        }
      } catch (const json::exception& e) {
        problem = std::string("bad JSON: ") + e.what();
      } catch (const validation_error& e) {
        problem = e.what();
      }
    }
    if (!problem.empty()) {
      ++local.skipped;
      const std::string msg =
          source_name + ":" + std::to_string(local.lines) + ": " + problem;
      if (first_error.empty()) first_error = msg;
      if (local.skip_messages.size() < kMaxSkipMessages)
        local.skip_messages.push_back(msg);
    }
  }
  if (in.bad()) throw io_error("read failure on dump: " + source_name);

  if (local.lines > 0 && local.skipped * 2 > local.lines)
    throw validation_error("more than half of " + source_name +
                           " is malformed; first problem: " + first_error);

  if (report) *report = std::move(local);
  return corpus;
}

std::size_t resolved_parent_links(const Corpus& corpus) {
  std::unordered_set<std::string> ids;
  for (const auto& r : corpus.records) ids.insert(r.id);
  std::size_t n = 0;
  for (const auto& r : corpus.records)
    if (r.parent_id && ids.count(*r.parent_id)) ++n;
  return n;
}

Corpus filter_window(const Corpus& corpus, std::int64_t start_utc,
                     std::int64_t end_utc) {
  if (start_utc >= end_utc)
    throw argument_error("filter_window: start must be before end");
  Corpus out;
  out.provenance = corpus.provenance;
  out.window = {start_utc, end_utc};
  for (const auto& r : corpus.records)
    if (r.created_utc >= start_utc && r.created_utc < end_utc)
      out.records.push_back(r);
  return out;
}

namespace {

// Whole-token containment: every term is a run of consecutive tokens.
// "covid-19" and "covid 19" both tokenize to ["covid","19"], so hyphenated
// and space-joined forms match the same way.
bool contains_term_run(const std::vector<std::string>& tokens,
                       const std::vector<std::string>& term) {
  if (term.empty() || tokens.size() < term.size()) return false;
  for (std::size_t i = 0; i + term.size() <= tokens.size(); ++i) {
    bool all = true;
    for (std::size_t j = 0; j < term.size(); ++j) {
      if (tokens[i + j] != term[j]) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

Corpus filter_relevant(const Corpus& corpus, const RelevanceLexicon& lexicon) {
  if (lexicon.terms.empty())
    throw argument_error("filter_relevant: empty lexicon");

  std::vector<std::vector<std::string>> term_tokens;
  term_tokens.reserve(lexicon.terms.size());
  for (const auto& t : lexicon.terms)
    term_tokens.push_back(textnorm::surface_tokens(t));

  Corpus out;
  out.provenance = corpus.provenance;
  out.window = corpus.window;
  for (const auto& r : corpus.records) {
    std::string text = r.title ? *r.title + " " + r.body : r.body;
    const auto tokens = textnorm::surface_tokens(text);
    for (const auto& term : term_tokens) {
      if (contains_term_run(tokens, term)) {
        out.records.push_back(r);
        break;
      }
    }
  }
  return out;
}

RelevanceLexicon load_relevance_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open keyword file: " + path);
  RelevanceLexicon lex;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::string term;
    term.reserve(line.size());
    for (char c : line)
      term += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    // trim
    const auto b = term.find_first_not_of(" \t");
    const auto e = term.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    term = term.substr(b, e - b + 1);
    if (seen.insert(term).second) lex.terms.push_back(term);
  }
  if (lex.terms.empty())
    throw validation_error("keyword file has no terms: " + path);
  return lex;
}

}  // namespace remine::ingest
