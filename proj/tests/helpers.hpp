#pragma once

#include <string>
#include <vector>

#include "remine/textnorm.hpp"

namespace testhelp {

inline std::string data_file(const char* name) {
  return std::string(REMINE_DATA_DIR) + "/" + name;
}

// Shared default normalization config (shipped stopwords and lemma table),
// loaded once.
inline const remine::textnorm::NormConfig& norm_config() {
  static const remine::textnorm::NormConfig cfg = [] {
    remine::textnorm::NormConfig c;
    c.stopwords = remine::textnorm::load_stopwords(data_file("stopwords.txt"));
    c.lemmas =
        remine::textnorm::load_lemma_table(data_file("lemma_exceptions.tsv"));
    return c;
  }();
  return cfg;
}

inline remine::textnorm::ProcessedSentence sentence(const std::string& raw,
                                                    const std::string& doc = "d",
                                                    int index = 0) {
  auto s = remine::textnorm::normalize(raw, norm_config());
  s.doc_id = doc;
  s.sent_index = index;
  return s;
}

// A sentence with explicit tokens, bypassing normalization.
inline remine::textnorm::ProcessedSentence raw_tokens(
    std::vector<std::string> tokens, const std::string& doc = "d",
    int index = 0) {
  remine::textnorm::ProcessedSentence s;
  s.doc_id = doc;
  s.sent_index = index;
  s.raw = "synthetic";
  s.tokens = std::move(tokens);
  return s;
}

}  // namespace testhelp
