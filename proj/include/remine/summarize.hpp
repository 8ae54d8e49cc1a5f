#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "remine/textnorm.hpp"

namespace remine::summarize {

// Symmetric nonnegative sentence-similarity weights with a zero diagonal.
struct SimilarityGraph {
  std::size_t n = 0;
  std::vector<std::vector<double>> weights;
};

enum class Method { sumbasic, textrank, lexrank };

struct SummaryConfig {
  Method method = Method::textrank;
  double ratio = 0.3;
  std::optional<std::size_t> top_k;
  double damping = 0.85;
  double lexrank_threshold = 0.1;
  double tol = 1e-6;
  int max_iter = 200;
};

struct RougeScore {
  int n = 1;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// TextRank sentence graph: weight = |shared tokens| / (ln|Si| + ln|Sj|) over
// token sets, zero unless both sets have at least two tokens.
SimilarityGraph textrank_graph(
    const std::vector<textnorm::ProcessedSentence>& sentences);

// LexRank adjacency: 1 where the tf-idf cosine of two sentences reaches the
// threshold, 0 elsewhere (and on the diagonal).
SimilarityGraph lexrank_graph(
    const std::vector<textnorm::ProcessedSentence>& sentences,
    double threshold);

// Damped stationary scores of a similarity graph; rows with no outgoing
// weight spread uniformly, so scores always sum to 1.
std::vector<double> stationary_scores(const SimilarityGraph& graph,
                                      double damping, double tol, int max_iter);

std::vector<double> textrank_scores(
    const std::vector<textnorm::ProcessedSentence>& sentences,
    const SummaryConfig& cfg = {});

std::vector<double> lexrank_scores(
    const std::vector<textnorm::ProcessedSentence>& sentences,
    const SummaryConfig& cfg = {});

// Greedy frequency summarizer: repeatedly take the best sentence containing
// the currently strongest word, then square that sentence's word
// probabilities. Returns selected indices sorted by original position.
std::vector<std::size_t> sumbasic_select(
    const std::vector<textnorm::ProcessedSentence>& sentences, std::size_t k);

// Top-k sentence selection in original document order.
std::vector<std::size_t> summarize(
    const std::vector<textnorm::ProcessedSentence>& sentences,
    const SummaryConfig& cfg);

// Clipped n-gram overlap.
RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int n);

}  // namespace remine::summarize
