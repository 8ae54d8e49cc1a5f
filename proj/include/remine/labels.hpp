#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

#include "remine/io.hpp"
#include "remine/signals.hpp"
#include "remine/textnorm.hpp"

namespace remine::labels {

enum class Label { non_requirement = 0, requirement = 1 };
enum class Vote { no = 0, yes = 1 };

struct LabelTask {
  std::string task_id;
  std::string doc_id;
  int sent_index = 0;
  std::string text;
};

struct WorkerVote {
  std::string task_id;
  std::string worker_id;
  Vote vote = Vote::no;
};

struct LabeledSentence {
  std::string doc_id;
  int sent_index = 0;
  std::vector<WorkerVote> votes;
  Label label = Label::non_requirement;
};

struct MannWhitneyResult {
  double u_statistic = 0.0;
  double p_value = 1.0;
  enum class Method { exact, normal_approx } method = Method::normal_approx;
  int n1 = 0;
  int n2 = 0;
};

// task_id is doc_id "#" sent_index, deterministic so externally produced vote
// files can reference tasks without an export round-trip.
std::string task_id_for(const std::string& doc_id, int sent_index);

// floor(fraction * n) sentences drawn without replacement; deterministic for
// a fixed seed, output ordered by corpus position.
std::vector<LabelTask> sample_for_labeling(
    const std::vector<textnorm::ProcessedSentence>& sentences, double fraction,
    std::uint64_t seed);

// CSV round-trip: tasks out, votes in.
void export_tasks(const std::vector<LabelTask>& tasks, std::ostream& out);
std::vector<LabelTask> import_tasks(std::istream& in);
std::vector<WorkerVote> import_votes(
    std::istream& in, const std::unordered_set<std::string>& known_task_ids,
    const std::string& source_name = "votes");

// Odd vote count >= 3 required; requirement wins iff yes-votes > no-votes.
Label majority_vote(const std::vector<WorkerVote>& votes);

// Rank-sum U with average ranks for ties. Exact two-sided p by enumeration
// for tie-free samples with n1+n2 <= 16, otherwise tie-corrected normal
// approximation with continuity correction.
MannWhitneyResult mann_whitney_u(const std::vector<double>& sample_a,
                                 const std::vector<double>& sample_b);

struct StatRow {
  Label label = Label::non_requirement;
  signals::SignalTags tags;
};

// Class counts/ratio, keyword and interrogative cross-tabs, per-class
// word-count and keyword-count distributions, and Mann-Whitney comparisons.
io::ojson corpus_stats(const std::vector<StatRow>& rows);

}  // namespace remine::labels
