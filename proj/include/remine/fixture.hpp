#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace remine::fixture {

// Synthetic-corpus generator. Requirement sentences embed requirement
// keywords and question forms with the configured probabilities,
// non-requirement sentences mostly avoid them; every record carries at least
// one event-relevance keyword so it survives ingest filtering. Worker votes
// are the true label flipped independently with vote_noise per worker.
struct FixtureConfig {
  std::size_t n_sentences = 2000;
  std::uint64_t seed = 7;
  double requirement_fraction = 0.59;
  double vote_noise = 0.05;
  double p_keyword_req = 0.80;
  double p_keyword_non = 0.22;
  double p_question_req = 0.55;
  double p_question_non = 0.06;
  // fraction of sentences built from class-shared skeletons, where only the
  // keyword slot and the terminal "?" carry the class signal
  double ambiguous_fraction = 0.20;
  bool decoys = true;  // pre-window and irrelevant records that filters drop
};

struct TruthRow {
  std::string doc_id;
  int sent_index = 0;
  bool requirement = false;
};

struct Fixture {
  std::string dump_jsonl;  // file contents, one record per line
  std::string votes_csv;   // task_id,worker_id,vote with 3 workers per task
  std::string truth_csv;   // doc_id,sent_index,label for diagnostics
  std::vector<TruthRow> truth;
  std::size_t requirement_count = 0;
  std::size_t non_requirement_count = 0;
};

Fixture generate(const FixtureConfig& cfg);

// Writes dump.jsonl, votes.csv and truth.csv under out_dir.
void write_fixture(const Fixture& fixture, const std::string& out_dir);

}  // namespace remine::fixture
