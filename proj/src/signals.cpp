#include "remine/signals.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_set>

#include "remine/errors.hpp"

namespace remine::signals {

namespace {

const std::unordered_set<std::string>& wh_words() {
  static const std::unordered_set<std::string> words = {
      "who", "what", "when", "where", "why", "how", "which", "whose", "whom"};
  return words;
}

const std::unordered_set<std::string>& aux_words() {
  static const std::unordered_set<std::string> words = {
      "do",   "does", "did",  "can",  "could", "will", "would",
      "shall", "should", "is", "are", "was",   "were", "has",
      "have", "had",  "may",  "might", "must"};
  return words;
}

const std::unordered_set<std::string>& subject_words() {
  static const std::unordered_set<std::string> words = {
      "i",  "you", "we",   "they", "he",   "she",    "it",
      "the", "a",  "an",   "this", "that", "anyone", "there"};
  return words;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(c < 0x80 ? std::tolower(c) : c);
  });
  return s;
}

}  // namespace

bool RequirementLexicon::contains(const std::string& lemma) const {
  return std::binary_search(expanded.begin(), expanded.end(), lemma);
}

RequirementLexicon expand_lexicon(const std::vector<std::string>& seeds,
                                  const SynonymDict& dict,
                                  const textnorm::LemmaTable& lemmas) {
  if (seeds.empty()) throw argument_error("expand_lexicon: empty seed list");

  std::set<std::string> expanded;
  for (const auto& seed : seeds) {
    expanded.insert(textnorm::lemmatize(lower(seed), lemmas));
    if (auto it = dict.entries.find(lower(seed)); it != dict.entries.end())
      for (const auto& syn : it->second)
        expanded.insert(textnorm::lemmatize(lower(syn), lemmas));
  }

  RequirementLexicon lex;
  lex.seeds = seeds;
  lex.expanded.assign(expanded.begin(), expanded.end());
  return lex;
}

std::pair<bool, int> tag_keywords(const textnorm::ProcessedSentence& sentence,
                                  const RequirementLexicon& lexicon) {
  if (lexicon.expanded.empty())
    throw argument_error("tag_keywords: lexicon not expanded");
  int count = 0;
  for (const auto& token : sentence.tokens)
    if (lexicon.contains(token)) ++count;
  return {count > 0, count};
}

bool detect_interrogative(const std::string& raw) {
  const std::string trimmed = trim(raw);
  if (!trimmed.empty() && trimmed.back() == '?') return true;

  const auto tokens = textnorm::surface_tokens(trimmed);
  if (tokens.empty()) return false;

  if (wh_words().count(tokens[0])) {
    const std::size_t limit = std::min<std::size_t>(tokens.size(), 4);
    for (std::size_t i = 1; i < limit; ++i)
      if (aux_words().count(tokens[i])) return true;
  }
  if (tokens.size() >= 2 && aux_words().count(tokens[0]) &&
      subject_words().count(tokens[1]))
    return true;
  return false;
}

SignalTags tag_sentence(const textnorm::ProcessedSentence& sentence,
                        const RequirementLexicon& lexicon) {
  SignalTags tags;
  std::tie(tags.has_keyword, tags.keyword_count) =
      tag_keywords(sentence, lexicon);
  tags.is_interrogative = detect_interrogative(sentence.raw);

  // whitespace-delimited chunks of the raw text, never below 1
  int words = 0;
  bool in_word = false;
  for (unsigned char c : sentence.raw) {
    if (std::isspace(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++words;
    }
  }
  tags.word_count = std::max(1, words);
  return tags;
}

std::vector<std::string> load_seed_terms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open seed file: " + path);
  std::vector<std::string> seeds;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string term = lower(trim(line));
    if (!term.empty() && seen.insert(term).second) seeds.push_back(term);
  }
  if (seeds.empty()) throw validation_error("seed file has no terms: " + path);
  return seeds;
}

SynonymDict load_synonym_dict(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open synonym file: " + path);
  SynonymDict dict;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw validation_error(path + ":" + std::to_string(lineno) +
                             ": expected 'term: syn1, syn2'");
    const std::string term = lower(trim(line.substr(0, colon)));
    if (term.empty())
      throw validation_error(path + ":" + std::to_string(lineno) +
                             ": empty term");
    std::vector<std::string> syns;
    std::string rest = line.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string syn = lower(
          trim(comma == std::string::npos ? rest.substr(pos)
                                          : rest.substr(pos, comma - pos)));
      if (!syn.empty()) syns.push_back(syn);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    auto& slot = dict.entries[term];
    slot.insert(slot.end(), syns.begin(), syns.end());
  }
  return dict;
}

}  // namespace remine::signals
