#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace remine::textnorm {

// One sentence after normalization. tokens are lowercase lemmas with
// stopwords removed; bigrams (more generally ngram_n-grams) come from the
// token stream *before* stopword removal, so "how can" style pairs survive.
struct ProcessedSentence {
  std::string doc_id;
  int sent_index = 0;
  std::string raw;
  std::vector<std::string> tokens;
  std::vector<std::string> bigrams;
};

// Irregular surface -> lemma pairs, loaded from a TSV data file.
struct LemmaTable {
  std::unordered_map<std::string, std::string> exceptions;
};

LemmaTable load_lemma_table(const std::string& path);

using FrequencyMap = std::unordered_map<std::string, long>;

struct NormConfig {
  bool strip_punct = true;
  bool correct_typos = false;
  std::unordered_set<std::string> stopwords;
  bool lemmatize = true;
  int ngram_n = 2;
  LemmaTable lemmas;
};

std::unordered_set<std::string> load_stopwords(const std::string& path);

// Lowercased alphanumeric runs; apostrophes are deleted ("don't" -> "dont"),
// every other non-alphanumeric byte is a token boundary. Bytes >= 0x80 are
// kept verbatim so UTF-8 sequences stay intact.
std::vector<std::string> surface_tokens(const std::string& text);

// Deterministic rule split on . ? ! followed by whitespace or end of text,
// with an abbreviation exception list ("e.g.", "dr.", ...). Joining the
// output with single spaces preserves every non-whitespace byte of the input.
std::vector<std::string> split_sentences(const std::string& text);

// Exception table first, then ordered suffix rules (-ies, -sses, -es after
// sibilants, -s, -ing and -ed with consonant-doubling undo and CVC e-restore).
// Unmatched tokens pass through unchanged; idempotent on its own outputs.
std::string lemmatize(const std::string& token, const LemmaTable& table);

// If token is out of vocabulary and some vocab word sits at edit distance 1,
// return the best such word (higher corpus frequency wins, then
// lexicographic); otherwise the token unchanged.
std::string correct_typo(const std::string& token, const FrequencyMap& vocab);

ProcessedSentence normalize(const std::string& raw, const NormConfig& cfg,
                            const FrequencyMap* vocab = nullptr);

// Corpus vocabulary for correct_typo, built from surface tokens.
FrequencyMap build_vocabulary(const std::vector<std::string>& texts);

}  // namespace remine::textnorm
