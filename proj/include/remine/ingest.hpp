#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace remine::ingest {

enum class PostKind { post, comment };

struct RawPost {
  std::string id;
  PostKind kind = PostKind::post;
  std::optional<std::string> parent_id;  // required iff kind == comment
  std::int64_t created_utc = 0;
  std::optional<std::string> title;  // posts only
  std::string body;
  std::int64_t score = 0;
  std::optional<std::string> permalink;
};

struct Corpus {
  std::vector<RawPost> records;
  // set once filter_window has run; half-open [start, end)
  std::optional<std::pair<std::int64_t, std::int64_t>> window;
  std::vector<std::string> provenance;

  std::size_t post_count() const;
  std::size_t comment_count() const;
};

// Event keywords used to keep only relevant records. Terms are lowercase and
// may be multiword ("online exam").
struct RelevanceLexicon {
  std::vector<std::string> terms;
};

RelevanceLexicon load_relevance_lexicon(const std::string& path);

struct ParseReport {
  std::size_t lines = 0;
  std::size_t parsed = 0;
  std::size_t skipped = 0;
  std::vector<std::string> skip_messages;  // capped
};

// One JSON object per line with at least id, kind, created_utc, body.
// Malformed lines are skipped and reported; more than half malformed is a
// format error naming the first offending line.
Corpus parse_dump(std::istream& in, const std::string& source_name,
                  ParseReport* report = nullptr);

// Number of comments whose parent_id refers to a record in the corpus.
std::size_t resolved_parent_links(const Corpus& corpus);

// Keeps records with start_utc <= created_utc < end_utc.
Corpus filter_window(const Corpus& corpus, std::int64_t start_utc,
                     std::int64_t end_utc);

// Keeps records whose lowercased title+body contains at least one lexicon
// term as a whole-token match; multiword and hyphenated terms match as
// consecutive token runs.
Corpus filter_relevant(const Corpus& corpus, const RelevanceLexicon& lexicon);

}  // namespace remine::ingest
