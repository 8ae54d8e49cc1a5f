#include "remine/textnorm.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>

#include "remine/errors.hpp"

namespace remine::textnorm {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

char lower_ascii(unsigned char c) {
  return static_cast<char>(c < 0x80 ? std::tolower(c) : c);
}

// Abbreviations that keep their trailing period from ending a sentence.
const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> abbr = {
      "e.g.", "i.e.",  "etc.", "vs.",  "cf.",   "dr.",   "mr.",  "mrs.",
      "ms.",  "prof.", "st.",  "no.",  "dept.", "univ.", "fig.", "approx.",
      "u.s.", "u.k.",  "a.m.", "p.m.", "jan.",  "feb.",  "mar.", "apr.",
      "aug.", "sept.", "oct.", "nov.", "dec."};
  return abbr;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// Doubled consonants undone when stripping -ing/-ed (running -> run).
// ll/ss/ff/zz stay doubled: telling -> tell.
bool undoable_double(char c) {
  switch (c) {
    case 'b': case 'd': case 'g': case 'm':
    case 'n': case 'p': case 'r': case 't':
      return true;
    default:
      return false;
  }
}

// Porter-style CVC tail check: stems like hop/mak take a restored e.
// Stems ending in w, x or y do not.
bool wants_final_e(const std::string& stem) {
  const std::size_t n = stem.size();
  if (n < 3) return false;
  const char c2 = stem[n - 1], c1 = stem[n - 2], c0 = stem[n - 3];
  if (is_vowel(c2) || !is_vowel(c1) || is_vowel(c0)) return false;
  if (c2 == 'w' || c2 == 'x' || c2 == 'y') return false;
  return true;
}

bool ends_with(const std::string& s, const char* suffix) {
  const std::size_t n = std::strlen(suffix);
  return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

std::string strip_participle(const std::string& token, std::size_t suffix_len) {
  std::string stem = token.substr(0, token.size() - suffix_len);
  const std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      undoable_double(stem[n - 1])) {
    stem.pop_back();
  } else if (n >= 2 && stem[n - 1] == 'u') {
    stem += 'e';  // argu -> argue, continu -> continue
  } else if (wants_final_e(stem)) {
    stem += 'e';
  }
  return stem;
}

// One ordered pass over the suffix rules; returns the input when nothing
// applies.
std::string suffix_pass(const std::string& token) {
  const std::size_t n = token.size();
  if (n >= 5 && ends_with(token, "ies")) return token.substr(0, n - 3) + "y";
  if (n >= 5 && ends_with(token, "sses")) return token.substr(0, n - 2);
  if (n >= 5 && (ends_with(token, "shes") || ends_with(token, "ches") ||
                 ends_with(token, "xes")))
    return token.substr(0, n - 2);
  if (n >= 4 && token.back() == 's' && !ends_with(token, "ss") &&
      !ends_with(token, "us") && !ends_with(token, "is"))
    return token.substr(0, n - 1);
  if (n >= 5 && ends_with(token, "ied")) return token.substr(0, n - 3) + "y";
  if (n >= 6 && ends_with(token, "eed")) return token.substr(0, n - 1);
  if (n >= 5 && ends_with(token, "ed")) return strip_participle(token, 2);
  if (n >= 6 && ends_with(token, "ing")) return strip_participle(token, 3);
  return token;
}

// True when a and b differ by exactly one edit (insert/delete/substitute).
bool edit_distance_is_one(const std::string& a, const std::string& b) {
  const std::size_t la = a.size(), lb = b.size();
  if (la == lb) {
    int diffs = 0;
    for (std::size_t i = 0; i < la; ++i)
      if (a[i] != b[i] && ++diffs > 1) return false;
    return diffs == 1;
  }
  const std::string& s = la < lb ? a : b;
  const std::string& t = la < lb ? b : a;
  if (t.size() - s.size() != 1) return false;
  std::size_t i = 0;
  while (i < s.size() && s[i] == t[i]) ++i;
  return t.compare(i + 1, std::string::npos, s, i, std::string::npos) == 0;
}

}  // namespace

std::vector<std::string> surface_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      cur += lower_ascii(c);
      continue;
    }
    if (c == '\'') continue;  // apostrophes deleted: don't -> dont
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::string cur;

  auto flush = [&] {
    const std::size_t b = cur.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
      cur.clear();
      return;
    }
    const std::size_t e = cur.find_last_not_of(" \t\r\n");
    sentences.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    cur += c;
    if (c != '.' && c != '?' && c != '!') continue;
    const bool at_end = i + 1 == text.size();
    if (!at_end && !std::isspace(static_cast<unsigned char>(text[i + 1])))
      continue;
    if (c == '.') {
      // word ending at this period, including internal dots ("u.s.")
      std::size_t b = cur.size();
      while (b > 0 && !std::isspace(static_cast<unsigned char>(cur[b - 1])))
        --b;
      std::string word = cur.substr(b);
      std::transform(word.begin(), word.end(), word.begin(),
                     [](unsigned char ch) { return lower_ascii(ch); });
      if (abbreviations().count(word)) continue;
    }
    flush();
  }
  flush();
  return sentences;
}

std::string lemmatize(const std::string& token, const LemmaTable& table) {
  // Iterate to a fixpoint so stacked suffixes reduce fully and the map is
  // idempotent on its own outputs. Every rule shortens the token, so the
  // round cap is never the stopping reason in practice.
  std::string cur = token;
  for (int round = 0; round < 8; ++round) {
    if (auto it = table.exceptions.find(cur); it != table.exceptions.end())
      return it->second;
    std::string next = suffix_pass(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
  return cur;
}

std::string correct_typo(const std::string& token, const FrequencyMap& vocab) {
  if (vocab.count(token)) return token;
  std::string best;
  long best_freq = -1;
  for (const auto& [word, freq] : vocab) {
    const std::size_t lw = word.size(), lt = token.size();
    if (lw + 1 < lt || lt + 1 < lw) continue;
    if (!edit_distance_is_one(word, token)) continue;
    if (freq > best_freq || (freq == best_freq && word < best)) {
      best = word;
      best_freq = freq;
    }
  }
  return best_freq < 0 ? token : best;
}

ProcessedSentence normalize(const std::string& raw, const NormConfig& cfg,
                            const FrequencyMap* vocab) {
  if (raw.empty()) throw argument_error("normalize: empty sentence");
  ProcessedSentence s;
  s.raw = raw;

  std::vector<std::string> pre;
  if (cfg.strip_punct) {
    pre = surface_tokens(raw);
  } else {
    std::string cur;
    for (unsigned char c : raw) {
      if (std::isspace(c)) {
        if (!cur.empty()) {
          pre.push_back(cur);
          cur.clear();
        }
      } else {
        cur += lower_ascii(c);
      }
    }
    if (!cur.empty()) pre.push_back(cur);
  }

  if (cfg.correct_typos && vocab) {
    for (auto& t : pre) t = correct_typo(t, *vocab);
  }

  // n-grams come from the pre-stopword stream.
  const std::size_t n = static_cast<std::size_t>(std::max(1, cfg.ngram_n));
  if (pre.size() >= n) {
    for (std::size_t i = 0; i + n <= pre.size(); ++i) {
      std::string gram = pre[i];
      for (std::size_t j = 1; j < n; ++j) gram += " " + pre[i + j];
      s.bigrams.push_back(std::move(gram));
    }
  }

  for (const auto& t : pre) {
    if (cfg.stopwords.count(t)) continue;
    s.tokens.push_back(cfg.lemmatize ? lemmatize(t, cfg.lemmas) : t);
  }
  return s;
}

FrequencyMap build_vocabulary(const std::vector<std::string>& texts) {
  FrequencyMap vocab;
  for (const auto& text : texts)
    for (const auto& t : surface_tokens(text)) ++vocab[t];
  return vocab;
}

LemmaTable load_lemma_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open lemma table: " + path);
  LemmaTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      throw validation_error(path + ":" + std::to_string(lineno) +
                             ": expected surface<TAB>lemma");
    table.exceptions[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return table;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open stopword file: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.insert(line);
  }
  return words;
}

}  // namespace remine::textnorm
