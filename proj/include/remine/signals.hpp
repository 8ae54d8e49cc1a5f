#pragma once

#include <map>
#include <string>
#include <vector>

#include "remine/textnorm.hpp"

namespace remine::signals {

// Seed keywords plus their synonym expansion, lemma-normalized and deduped.
struct RequirementLexicon {
  std::vector<std::string> seeds;
  std::vector<std::string> expanded;  // sorted, unique

  bool contains(const std::string& lemma) const;
};

// term -> synonyms, all lowercase. File format: "term: syn1, syn2".
struct SynonymDict {
  std::map<std::string, std::vector<std::string>> entries;
};

std::vector<std::string> load_seed_terms(const std::string& path);
SynonymDict load_synonym_dict(const std::string& path);

RequirementLexicon expand_lexicon(const std::vector<std::string>& seeds,
                                  const SynonymDict& dict,
                                  const textnorm::LemmaTable& lemmas);

struct SignalTags {
  bool has_keyword = false;
  int keyword_count = 0;
  bool is_interrogative = false;
  int word_count = 1;
};

// Counts token positions whose lemma is in the lexicon (tokens are already
// lemmatized by normalize).
std::pair<bool, int> tag_keywords(const textnorm::ProcessedSentence& sentence,
                                  const RequirementLexicon& lexicon);

// True iff the raw sentence ends with '?', or opens wh-word + auxiliary
// within three tokens, or opens auxiliary + pronoun/determiner.
bool detect_interrogative(const std::string& raw);

SignalTags tag_sentence(const textnorm::ProcessedSentence& sentence,
                        const RequirementLexicon& lexicon);

}  // namespace remine::signals
