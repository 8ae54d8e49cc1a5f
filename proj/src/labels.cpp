#include "remine/labels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "remine/errors.hpp"
#include "remine/rng.hpp"

namespace remine::labels {

std::string task_id_for(const std::string& doc_id, int sent_index) {
  return doc_id + "#" + std::to_string(sent_index);
}

std::vector<LabelTask> sample_for_labeling(
    const std::vector<textnorm::ProcessedSentence>& sentences, double fraction,
    std::uint64_t seed) {
  if (fraction <= 0.0 || fraction > 1.0)
    throw argument_error("sample_for_labeling: fraction out of (0, 1]");

  const std::size_t n = sentences.size();
  const std::size_t take = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(n)));

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  SplitRng rng = SplitRng(seed).split("sample_for_labeling");
  rng.shuffle(idx);
  idx.resize(take);
  std::sort(idx.begin(), idx.end());

  std::vector<LabelTask> tasks;
  tasks.reserve(take);
  for (std::size_t i : idx) {
    const auto& s = sentences[i];
    tasks.push_back({task_id_for(s.doc_id, s.sent_index), s.doc_id,
                     s.sent_index, s.raw});
  }
  return tasks;
}

void export_tasks(const std::vector<LabelTask>& tasks, std::ostream& out) {
  io::write_csv_row(out, {"task_id", "doc_id", "sent_index", "text"});
  for (const auto& t : tasks)
    io::write_csv_row(out,
                      {t.task_id, t.doc_id, std::to_string(t.sent_index), t.text});
}

std::vector<LabelTask> import_tasks(std::istream& in) {
  const auto rows = io::parse_csv(in);
  if (rows.empty() || rows[0] != std::vector<std::string>{"task_id", "doc_id",
                                                          "sent_index", "text"})
    throw validation_error("task CSV: expected header task_id,doc_id,sent_index,text");
  std::vector<LabelTask> tasks;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 4)
      throw validation_error("task CSV line " + std::to_string(r + 1) +
                             ": expected 4 fields");
    LabelTask t;
    t.task_id = rows[r][0];
    t.doc_id = rows[r][1];
    try {
      t.sent_index = std::stoi(rows[r][2]);
    } catch (const std::exception&) {
      throw validation_error("task CSV line " + std::to_string(r + 1) +
                             ": bad sent_index '" + rows[r][2] + "'");
    }
    t.text = rows[r][3];
    if (!seen.insert(t.task_id).second)
      throw validation_error("task CSV line " + std::to_string(r + 1) +
                             ": duplicate task_id " + t.task_id);
    tasks.push_back(std::move(t));
  }
  return tasks;
}

std::vector<WorkerVote> import_votes(
    std::istream& in, const std::unordered_set<std::string>& known_task_ids,
    const std::string& source_name) {
  const auto rows = io::parse_csv(in);
  if (rows.empty() ||
      rows[0] != std::vector<std::string>{"task_id", "worker_id", "vote"})
    throw validation_error(source_name +
                           ": expected header task_id,worker_id,vote");

  std::vector<WorkerVote> votes;
  std::vector<std::string> problems;
  std::set<std::pair<std::string, std::string>> seen;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string where = source_name + " line " + std::to_string(r + 1);
    if (rows[r].size() != 3) {
      problems.push_back(where + ": expected 3 fields");
      continue;
    }
    WorkerVote v;
    v.task_id = rows[r][0];
    v.worker_id = rows[r][1];
    std::string value = rows[r][2];
    std::transform(value.begin(), value.end(), value.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (value == "yes") v.vote = Vote::yes;
    else if (value == "no") v.vote = Vote::no;
    else {
      problems.push_back(where + ": vote must be yes or no, found '" +
                         rows[r][2] + "'");
      continue;
    }
    if (!known_task_ids.count(v.task_id)) {
      problems.push_back(where + ": unknown task_id " + v.task_id);
      continue;
    }
    if (!seen.insert({v.task_id, v.worker_id}).second) {
      problems.push_back(where + ": duplicate vote for (" + v.task_id + ", " +
                         v.worker_id + ")");
      continue;
    }
    votes.push_back(std::move(v));
  }

  if (!problems.empty()) {
    std::string msg = source_name + ": " + std::to_string(problems.size()) +
                      " invalid vote record(s):";
    for (const auto& p : problems) msg += "\n  " + p;
    throw validation_error(msg);
  }
  return votes;
}

Label majority_vote(const std::vector<WorkerVote>& votes) {
  const std::string task = votes.empty() ? "<unknown>" : votes[0].task_id;
  if (votes.size() < 3 || votes.size() % 2 == 0)
    throw validation_error("majority_vote: task " + task + " has " +
                           std::to_string(votes.size()) +
                           " votes, need an odd count >= 3");
  std::size_t yes = 0;
  for (const auto& v : votes)
    if (v.vote == Vote::yes) ++yes;
  return yes * 2 > votes.size() ? Label::requirement : Label::non_requirement;
}

namespace {

// Average ranks over the pooled sample, then U1 from the rank sum of sample
// a. Ties share the mean of the rank positions they occupy.
double rank_sum_u(const std::vector<double>& a, const std::vector<double>& b,
                  bool* has_ties, std::vector<std::size_t>* tie_groups) {
  const std::size_t n1 = a.size(), n2 = b.size();
  struct Item {
    double value;
    bool from_a;
  };
  std::vector<Item> pooled;
  pooled.reserve(n1 + n2);
  for (double v : a) pooled.push_back({v, true});
  for (double v : b) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(),
            [](const Item& x, const Item& y) { return x.value < y.value; });

  *has_ties = false;
  double r1 = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    const std::size_t group = j - i;
    if (group > 1) *has_ties = true;
    if (tie_groups) tie_groups->push_back(group);
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].from_a) r1 += avg_rank;
    i = j;
  }
  return r1 - static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
}

// Exact two-sided p over all C(n1+n2, n1) equally likely rank assignments
// (tie-free only): both tails of the U distribution at the observed extreme.
double exact_two_sided_p(std::size_t n1, std::size_t n2, double u_obs) {
  const std::size_t u_max = n1 * n2;
  std::vector<std::uint64_t> counts(u_max + 1, 0);

  // enumerate n1-subsets of ranks {1..n} by rank sum
  std::vector<std::size_t> comb(n1);
  std::iota(comb.begin(), comb.end(), 1);
  std::uint64_t total = 0;
  for (;;) {
    const std::size_t rank_sum = std::accumulate(comb.begin(), comb.end(), 0ull);
    ++counts[rank_sum - n1 * (n1 + 1) / 2];
    ++total;
    // next combination
    std::size_t i = n1;
    while (i > 0 && comb[i - 1] == n2 + i) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t j = i; j < n1; ++j) comb[j] = comb[j - 1] + 1;
  }

  const double u_lo = std::min(u_obs, static_cast<double>(u_max) - u_obs);
  std::uint64_t tail = 0;
  for (std::size_t u = 0; u <= u_max; ++u) {
    if (static_cast<double>(u) <= u_lo ||
        static_cast<double>(u) >= static_cast<double>(u_max) - u_lo)
      tail += counts[u];
  }
  const double p = static_cast<double>(tail) / static_cast<double>(total);
  return std::min(1.0, p);
}

}  // namespace

MannWhitneyResult mann_whitney_u(const std::vector<double>& sample_a,
                                 const std::vector<double>& sample_b) {
  if (sample_a.empty() || sample_b.empty())
    throw argument_error("mann_whitney_u: empty sample");

  MannWhitneyResult res;
  res.n1 = static_cast<int>(sample_a.size());
  res.n2 = static_cast<int>(sample_b.size());

  bool has_ties = false;
  std::vector<std::size_t> tie_groups;
  res.u_statistic = rank_sum_u(sample_a, sample_b, &has_ties, &tie_groups);

  const std::size_t n1 = sample_a.size(), n2 = sample_b.size();
  const std::size_t n = n1 + n2;

  if (!has_ties && n <= 16) {
    res.method = MannWhitneyResult::Method::exact;
    res.p_value = exact_two_sided_p(n1, n2, res.u_statistic);
    return res;
  }

  res.method = MannWhitneyResult::Method::normal_approx;
  const double mean = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
  double tie_term = 0.0;
  for (const std::size_t t : tie_groups) {
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double nd = static_cast<double>(n);
  const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                     ((nd + 1.0) - tie_term / (nd * (nd - 1.0)));
  if (var <= 0.0) {
    res.p_value = 1.0;  // every value tied
    return res;
  }
  const double z =
      std::max(0.0, std::fabs(res.u_statistic - mean) - 0.5) / std::sqrt(var);
  res.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return res;
}

namespace {

io::ojson five_number_summary(std::vector<double> v) {
  io::ojson out;
  if (v.empty()) {
    out["n"] = 0;
    return out;
  }
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double h = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - std::floor(h)) * (v[hi] - v[lo]);
  };
  out["n"] = v.size();
  out["min"] = v.front();
  out["q1"] = quantile(0.25);
  out["median"] = quantile(0.5);
  out["q3"] = quantile(0.75);
  out["max"] = v.back();
  out["mean"] = std::accumulate(v.begin(), v.end(), 0.0) /
                static_cast<double>(v.size());
  return out;
}

io::ojson mw_json(const std::vector<double>& req, const std::vector<double>& non) {
  io::ojson out;
  if (req.empty() || non.empty()) {
    out["degenerate"] = true;
    return out;
  }
  const auto r = mann_whitney_u(req, non);
  out["u_statistic"] = r.u_statistic;
  out["p_value"] = r.p_value;
  out["method"] =
      r.method == MannWhitneyResult::Method::exact ? "exact" : "normal_approx";
  out["n1"] = r.n1;
  out["n2"] = r.n2;
  return out;
}

}  // namespace

io::ojson corpus_stats(const std::vector<StatRow>& rows) {
  if (rows.empty()) throw argument_error("corpus_stats: empty corpus");

  std::size_t req = 0, keyword = 0, keyword_req = 0, interrog = 0,
              interrog_req = 0;
  std::vector<double> wc_req, wc_non, kc_req, kc_non;
  for (const auto& r : rows) {
    const bool is_req = r.label == Label::requirement;
    if (is_req) ++req;
    if (r.tags.has_keyword) {
      ++keyword;
      if (is_req) ++keyword_req;
    }
    if (r.tags.is_interrogative) {
      ++interrog;
      if (is_req) ++interrog_req;
    }
    (is_req ? wc_req : wc_non).push_back(r.tags.word_count);
    (is_req ? kc_req : kc_non).push_back(r.tags.keyword_count);
  }
  const std::size_t non = rows.size() - req;

  io::ojson out;
  out["n_labeled"] = rows.size();
  out["requirement_count"] = req;
  out["non_requirement_count"] = non;
  out["non_to_requirement_ratio"] =
      req > 0 ? static_cast<double>(non) / static_cast<double>(req) : 0.0;
  out["keyword_sentences"] = keyword;
  out["keyword_and_requirement"] = keyword_req;
  out["interrogative_sentences"] = interrog;
  out["interrogative_and_requirement"] = interrog_req;
  out["word_count"] = {{"requirement", five_number_summary(wc_req)},
                       {"non_requirement", five_number_summary(wc_non)}};
  out["keyword_count"] = {{"requirement", five_number_summary(kc_req)},
                          {"non_requirement", five_number_summary(kc_non)}};
  out["mann_whitney"] = {{"word_count", mw_json(wc_req, wc_non)},
                         {"keyword_count", mw_json(kc_req, kc_non)}};
  return out;
}

}  // namespace remine::labels
