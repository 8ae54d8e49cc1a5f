#include "remine/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "remine/errors.hpp"
#include "remine/features.hpp"

namespace remine::summarize {

SimilarityGraph textrank_graph(
    const std::vector<textnorm::ProcessedSentence>& sentences) {
  const std::size_t n = sentences.size();
  SimilarityGraph g;
  g.n = n;
  g.weights.assign(n, std::vector<double>(n, 0.0));

  std::vector<std::set<std::string>> sets(n);
  for (std::size_t i = 0; i < n; ++i)
    sets[i].insert(sentences[i].tokens.begin(), sentences[i].tokens.end());

  for (std::size_t i = 0; i < n; ++i) {
    if (sets[i].size() < 2) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sets[j].size() < 2) continue;
      std::size_t shared = 0;
      for (const auto& t : sets[i])
        if (sets[j].count(t)) ++shared;
      if (shared == 0) continue;
      const double w = static_cast<double>(shared) /
                       (std::log(static_cast<double>(sets[i].size())) +
                        std::log(static_cast<double>(sets[j].size())));
      g.weights[i][j] = w;
      g.weights[j][i] = w;
    }
  }
  return g;
}

SimilarityGraph lexrank_graph(
    const std::vector<textnorm::ProcessedSentence>& sentences,
    double threshold) {
  const std::size_t n = sentences.size();
  SimilarityGraph g;
  g.n = n;
  g.weights.assign(n, std::vector<double>(n, 0.0));
  if (n == 0) return g;

  // tf-idf over this document's sentences; rows come out L2-normalized so
  // cosine is a plain dot product
  features::FeatureMatrix m;
  bool have_terms = true;
  try {
    const auto model = features::fit_tfidf(sentences, features::Norm::l2);
    m = features::transform_tfidf(model, sentences);
  } catch (const argument_error&) {
    have_terms = false;  // no terms anywhere: graph stays empty
  }
  if (!have_terms) return g;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      const auto& a = m.sparse[i];
      const auto& b = m.sparse[j];
      std::size_t x = 0, y = 0;
      while (x < a.size() && y < b.size()) {
        if (a[x].first == b[y].first) dot += a[x++].second * b[y++].second;
        else if (a[x].first < b[y].first) ++x;
        else ++y;
      }
      if (dot >= threshold) {
        g.weights[i][j] = 1.0;
        g.weights[j][i] = 1.0;
      }
    }
  }
  return g;
}

std::vector<double> stationary_scores(const SimilarityGraph& graph,
                                      double damping, double tol,
                                      int max_iter) {
  const std::size_t n = graph.n;
  if (n == 0) return {};
  if (n == 1) return {1.0};

  std::vector<double> out_sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    out_sum[i] = std::accumulate(graph.weights[i].begin(),
                                 graph.weights[i].end(), 0.0);

  const double uniform = 1.0 / static_cast<double>(n);
  std::vector<double> score(n, uniform), next(n, 0.0);

  for (int iter = 0; iter < max_iter; ++iter) {
    // mass from rows with no outgoing weight spreads uniformly
    double dangling = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (out_sum[j] == 0.0) dangling += score[j];

    for (std::size_t i = 0; i < n; ++i)
      next[i] = (1.0 - damping) * uniform + damping * dangling * uniform;
    for (std::size_t j = 0; j < n; ++j) {
      if (out_sum[j] == 0.0) continue;
      const double contrib = damping * score[j] / out_sum[j];
      for (std::size_t i = 0; i < n; ++i) {
        const double w = graph.weights[j][i];
        if (w != 0.0) next[i] += contrib * w;
      }
    }

    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta += std::fabs(next[i] - score[i]);
    score.swap(next);
    if (delta < tol) break;
  }
  return score;
}

std::vector<double> textrank_scores(
    const std::vector<textnorm::ProcessedSentence>& sentences,
    const SummaryConfig& cfg) {
  if (sentences.empty()) throw argument_error("textrank_scores: no sentences");
  return stationary_scores(textrank_graph(sentences), cfg.damping, cfg.tol,
                           cfg.max_iter);
}

std::vector<double> lexrank_scores(
    const std::vector<textnorm::ProcessedSentence>& sentences,
    const SummaryConfig& cfg) {
  if (sentences.empty()) throw argument_error("lexrank_scores: no sentences");
  return stationary_scores(lexrank_graph(sentences, cfg.lexrank_threshold),
                           cfg.damping, cfg.tol, cfg.max_iter);
}

std::vector<std::size_t> sumbasic_select(
    const std::vector<textnorm::ProcessedSentence>& sentences, std::size_t k) {
  const std::size_t n = sentences.size();
  if (k < 1 || k > n) throw argument_error("sumbasic_select: k out of range");

  std::map<std::string, double> p;
  double total = 0.0;
  for (const auto& s : sentences)
    for (const auto& t : s.tokens) {
      p[t] += 1.0;
      total += 1.0;
    }
  for (auto& [w, c] : p) c /= std::max(total, 1.0);

  std::vector<bool> selected(n, false);
  std::vector<std::size_t> order;

  auto mean_prob = [&](std::size_t i) {
    const auto& toks = sentences[i].tokens;
    if (toks.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& t : toks) sum += p[t];
    return sum / static_cast<double>(toks.size());
  };

  while (order.size() < k) {
    // strongest word that still appears in an unselected sentence;
    // ties go to the lexicographically first word
    std::string best_word;
    double best_p = -1.0;
    for (const auto& [w, prob] : p) {
      if (prob <= best_p) continue;
      bool available = false;
      for (std::size_t i = 0; i < n && !available; ++i) {
        if (selected[i]) continue;
        for (const auto& t : sentences[i].tokens)
          if (t == w) {
            available = true;
            break;
          }
      }
      if (available) {
        best_word = w;
        best_p = prob;
      }
    }

    std::size_t pick = n;
    if (best_p >= 0.0) {
      double best_mean = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (selected[i]) continue;
        bool has = false;
        for (const auto& t : sentences[i].tokens)
          if (t == best_word) {
            has = true;
            break;
          }
        if (!has) continue;
        const double m = mean_prob(i);
        if (m > best_mean) {
          best_mean = m;
          pick = i;
        }
      }
    } else {
      // only empty-token sentences remain; take the lowest index
      for (std::size_t i = 0; i < n; ++i)
        if (!selected[i]) {
          pick = i;
          break;
        }
    }

    selected[pick] = true;
    order.push_back(pick);
    std::set<std::string> words(sentences[pick].tokens.begin(),
                                sentences[pick].tokens.end());
    for (const auto& w : words) p[w] *= p[w];
  }

  std::sort(order.begin(), order.end());
  return order;
}

std::vector<std::size_t> summarize(
    const std::vector<textnorm::ProcessedSentence>& sentences,
    const SummaryConfig& cfg) {
  const std::size_t n = sentences.size();
  if (n == 0) throw argument_error("summarize: empty document");
  std::size_t k;
  if (cfg.top_k) {
    k = std::min(*cfg.top_k, n);
    if (k == 0) k = 1;
  } else {
    if (cfg.ratio <= 0.0 || cfg.ratio > 1.0)
      throw argument_error("summarize: ratio out of (0, 1]");
    k = static_cast<std::size_t>(
        std::max(1.0, std::floor(cfg.ratio * static_cast<double>(n) + 0.5)));
    k = std::min(k, n);
  }

  if (cfg.method == Method::sumbasic) return sumbasic_select(sentences, k);

  const auto scores = cfg.method == Method::textrank
                          ? textrank_scores(sentences, cfg)
                          : lexrank_scores(sentences, cfg);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];  // ties keep the lower index first
  });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int n) {
  if (n < 1) throw argument_error("rouge_n: n must be >= 1");

  auto ngram_counts = [n](const std::vector<std::string>& tokens) {
    std::map<std::string, std::size_t> counts;
    const std::size_t sz = static_cast<std::size_t>(n);
    if (tokens.size() >= sz) {
      for (std::size_t i = 0; i + sz <= tokens.size(); ++i) {
        std::string g = tokens[i];
        for (std::size_t j = 1; j < sz; ++j) g += "\x1f" + tokens[i + j];
        ++counts[g];
      }
    }
    return counts;
  };

  const auto cand = ngram_counts(candidate);
  const auto ref = ngram_counts(reference);
  std::size_t cand_total = 0, ref_total = 0, overlap = 0;
  for (const auto& [g, c] : cand) cand_total += c;
  for (const auto& [g, c] : ref) ref_total += c;
  for (const auto& [g, c] : ref) {
    if (auto it = cand.find(g); it != cand.end())
      overlap += std::min(c, it->second);
  }

  RougeScore score;
  score.n = n;
  score.precision =
      cand_total ? static_cast<double>(overlap) / static_cast<double>(cand_total) : 0.0;
  score.recall =
      ref_total ? static_cast<double>(overlap) / static_cast<double>(ref_total) : 0.0;
  const double pr = score.precision + score.recall;
  score.f1 = pr > 0.0 ? 2.0 * score.precision * score.recall / pr : 0.0;
  return score;
}

}  // namespace remine::summarize
