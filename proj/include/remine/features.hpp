#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "remine/signals.hpp"
#include "remine/textnorm.hpp"

namespace remine::features {

struct SentenceRef {
  std::string doc_id;
  int sent_index = 0;

  bool operator==(const SentenceRef&) const = default;
  bool operator<(const SentenceRef& o) const {
    return doc_id != o.doc_id ? doc_id < o.doc_id : sent_index < o.sent_index;
  }
};

enum class Norm { l2, none };

// Vocabulary and idf weights fitted on training sentences only. Terms are the
// sentence lemmas plus the pre-stopword bigrams.
struct TfidfModel {
  std::map<std::string, std::uint32_t> vocabulary;  // term -> dense column
  std::vector<double> idf;
  Norm norm = Norm::l2;
};

struct WordVectors {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> map;
};

struct FeatureMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  bool is_sparse = true;
  // sparse rows: (column, value) with strictly increasing columns
  std::vector<std::vector<std::pair<std::uint32_t, double>>> sparse;
  std::vector<std::vector<double>> dense;
  std::vector<std::string> feature_names;
  std::vector<SentenceRef> row_ids;

  double at(std::size_t row, std::size_t col) const;
  std::vector<double> row_dense(std::size_t row) const;
};

// Which text representation feeds the classifier and which signal flags are
// appended as extra binary columns.
enum class TextRep { tfidf, wordvec_avg, precomputed };

struct FeatureSpec {
  TextRep text_rep = TextRep::tfidf;
  bool append_interrogative = false;
  bool append_keyword = false;
};

// idf(t) = ln((1+N)/(1+df)) + 1; vocabulary in sorted term order.
TfidfModel fit_tfidf(const std::vector<textnorm::ProcessedSentence>& train,
                     Norm norm = Norm::l2);

FeatureMatrix transform_tfidf(
    const TfidfModel& model,
    const std::vector<textnorm::ProcessedSentence>& sentences);

// Plain-text vector file: optional "count dim" header, then
// "word v1 ... vd" lines.
WordVectors load_word_vectors(const std::string& path);

// Unweighted mean of in-vocabulary lemma vectors; zero vector when every
// lemma is out of vocabulary.
std::vector<double> embed_average(const textnorm::ProcessedSentence& sentence,
                                  const WordVectors& vectors,
                                  bool* all_oov = nullptr);

struct EmbedDiagnostics {
  std::vector<std::size_t> oov_rows;  // rows that averaged zero vectors
};

FeatureMatrix embed_matrix(const std::vector<textnorm::ProcessedSentence>& sentences,
                           const WordVectors& vectors,
                           EmbedDiagnostics* diag = nullptr);

// CSV of doc_id,sent_index,v1,...,vd aligned to `expected` by ref; order in
// the file does not matter, missing or unknown refs are errors.
FeatureMatrix load_precomputed(const std::string& path,
                               const std::vector<SentenceRef>& expected);

// Appends the is_interrogative / has_keyword binary columns selected by the
// given FeatureSpec.
FeatureMatrix assemble(const FeatureMatrix& text_matrix,
                       const std::vector<signals::SignalTags>& tags,
                       const FeatureSpec& spec);

}  // namespace remine::features
