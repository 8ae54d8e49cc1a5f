#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "remine/rng.hpp"
#include "remine/textnorm.hpp"

using namespace remine::textnorm;
using testhelp::norm_config;

TEST_CASE("split_sentences basics") {
  CHECK(split_sentences("I like my car.") ==
        std::vector<std::string>{"I like my car."});
  CHECK(split_sentences("Is campus open? I hope so.") ==
        std::vector<std::string>{"Is campus open?", "I hope so."});
  CHECK(split_sentences("What?! Really?") ==
        std::vector<std::string>{"What?!", "Really?"});
  CHECK(split_sentences("   ").empty());
  CHECK(split_sentences("no terminal punctuation") ==
        std::vector<std::string>{"no terminal punctuation"});
}

TEST_CASE("split_sentences keeps abbreviations intact") {
  const auto out = split_sentences(
      "We need masks, e.g. N95 respirators, for the labs. Ask Dr. Lee about "
      "supply in the U.S. today.");
  REQUIRE(out.size() == 2);
  CHECK(out[0] == "We need masks, e.g. N95 respirators, for the labs.");
  CHECK(out[1] == "Ask Dr. Lee about supply in the U.S. today.");
}

TEST_CASE("split_sentences preserves every non-whitespace byte") {
  remine::SplitRng rng(42);
  const std::vector<std::string> words = {"alpha", "beta?",  "gamma.",
                                          "delta", "e.g.",   "x!",
                                          "covid", "campus", "u.s."};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const std::size_t len = 1 + rng.next_below(30);
    for (std::size_t i = 0; i < len; ++i) {
      text += words[rng.next_below(words.size())];
      text += rng.next_below(4) == 0 ? "  " : " ";
    }
    std::string joined;
    for (const auto& s : split_sentences(text)) {
      joined += s;
      joined += ' ';
    }
    auto squash = [](const std::string& s) {
      std::string out;
      for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
      return out;
    };
    CHECK(squash(joined) == squash(text));
  }
}

TEST_CASE("normalize builds the documented bigrams") {
  const auto s = normalize("How can I lose weight", norm_config());
  CHECK(s.bigrams == std::vector<std::string>{"how can", "can i", "i lose",
                                              "lose weight"});
  CHECK(s.tokens == std::vector<std::string>{"lose", "weight"});
}

TEST_CASE("normalize of an all-stopword sentence keeps raw and bigrams") {
  const auto s = normalize("the a an", norm_config());
  CHECK(s.tokens.empty());
  CHECK(s.raw == "the a an");
  CHECK(s.bigrams == std::vector<std::string>{"the a", "a an"});
}

TEST_CASE("normalize bigram count invariant") {
  remine::SplitRng rng(7);
  const std::vector<std::string> words = {"need",  "gym",   "open", "the",
                                          "a",     "covid", "exam", "how",
                                          "can",   "i"};
  for (int trial = 0; trial < 100; ++trial) {
    std::string raw;
    const std::size_t len = 1 + rng.next_below(12);
    for (std::size_t i = 0; i < len; ++i) {
      if (i) raw += ' ';
      raw += words[rng.next_below(words.size())];
    }
    const auto s = normalize(raw, norm_config());
    const auto pre = surface_tokens(raw);
    CHECK(s.bigrams.size() ==
          (pre.size() >= 2 ? pre.size() - 1 : std::size_t{0}));
  }
}

TEST_CASE("normalize is deterministic") {
  const auto a = normalize("Can we Request an Extension? ", norm_config());
  const auto b = normalize("Can we Request an Extension? ", norm_config());
  CHECK(a.tokens == b.tokens);
  CHECK(a.bigrams == b.bigrams);
  CHECK(a.raw == b.raw);
}

TEST_CASE("lemmatize suffix rules") {
  const auto& t = norm_config().lemmas;
  CHECK(lemmatize("cases", t) == "case");
  CHECK(lemmatize("studies", t) == "study");
  CHECK(lemmatize("running", t) == "run");
  CHECK(lemmatize("needed", t) == "need");
  CHECK(lemmatize("was", t) == "be");
  CHECK(lemmatize("children", t) == "child");
  CHECK(lemmatize("classes", t) == "class");
  CHECK(lemmatize("wishes", t) == "wish");
  CHECK(lemmatize("option", t) == "option");
  CHECK(lemmatize("xyzzy", t) == "xyzzy");
}

TEST_CASE("lemmatize against a 50-word hand-labeled list") {
  // surface -> expected lemma, checked by hand against the rule table
  const std::vector<std::pair<std::string, std::string>> gold = {
      {"cases", "case"},       {"studies", "study"},
      {"running", "run"},      {"needed", "need"},
      {"needs", "need"},       {"wanted", "want"},
      {"asked", "ask"},        {"asking", "ask"},
      {"requests", "request"}, {"requested", "request"},
      {"requires", "require"}, {"required", "require"},
      {"options", "option"},   {"problems", "problem"},
      {"issues", "issue"},     {"concerns", "concern"},
      {"wishes", "wish"},      {"wished", "wish"},
      {"hoping", "hope"},      {"hoped", "hope"},
      {"making", "make"},      {"made", "make"},
      {"taking", "take"},      {"getting", "get"},
      {"got", "get"},          {"sitting", "sit"},
      {"stopped", "stop"},     {"stopping", "stop"},
      {"planned", "plan"},     {"planning", "plan"},
      {"submitted", "submit"}, {"referred", "refer"},
      {"telling", "tell"},     {"calling", "call"},
      {"missing", "miss"},     {"passes", "pass"},
      {"passed", "pass"},      {"boxes", "box"},
      {"watches", "watch"},    {"viruses", "virus"},
      {"children", "child"},   {"women", "woman"},
      {"went", "go"},          {"said", "say"},
      {"was", "be"},           {"applied", "apply"},
      {"applies", "apply"},    {"agreed", "agree"},
      {"moved", "move"},       {"extended", "extend"}};
  REQUIRE(gold.size() == 50);
  const auto& t = norm_config().lemmas;
  for (const auto& [surface, lemma] : gold) {
    CAPTURE(surface);
    CHECK(lemmatize(surface, t) == lemma);
  }
}

TEST_CASE("lemmatize is idempotent on its own outputs") {
  const auto& t = norm_config().lemmas;
  // dictionary words plus random letter strings
  std::vector<std::string> inputs = {
      "buildings", "running",  "studies", "cases",   "needed",  "wishes",
      "watches",   "agreed",   "breeds",  "feelings", "classes", "going",
      "children",  "people",   "used",    "arranging", "movies", "news"};
  remine::SplitRng rng(11);
  for (int i = 0; i < 300; ++i) {
    std::string w;
    const std::size_t len = 2 + rng.next_below(9);
    for (std::size_t j = 0; j < len; ++j)
      w += static_cast<char>('a' + rng.next_below(26));
    inputs.push_back(w);
  }
  for (const auto& w : inputs) {
    CAPTURE(w);
    const auto once = lemmatize(w, t);
    CHECK(lemmatize(once, t) == once);
  }
}

TEST_CASE("lemma exception table outputs are stable") {
  const auto& t = norm_config().lemmas;
  for (const auto& [surface, lemma] : t.exceptions) {
    CAPTURE(surface);
    CHECK(lemmatize(lemma, t) == lemma);
  }
}

TEST_CASE("correct_typo") {
  FrequencyMap vocab = {{"lockdown", 5}, {"campus", 3}, {"exam", 2}};
  CHECK(correct_typo("campus", vocab) == "campus");      // in vocab
  CHECK(correct_typo("lockdwon", vocab) == "lockdwon");  // distance 2
  CHECK(correct_typo("lockdown", vocab) == "lockdown");
  CHECK(correct_typo("lockdow", vocab) == "lockdown");   // deletion
  CHECK(correct_typo("exam3", vocab) == "exam");         // insertion
  CHECK(correct_typo("exan", vocab) == "exam");          // substitution
  CHECK(correct_typo("xyzzy", vocab) == "xyzzy");        // no neighbor

  // ties break by frequency, then lexicographically
  FrequencyMap tied = {{"cat", 5}, {"cut", 9}};
  CHECK(correct_typo("cot", tied) == "cut");
  FrequencyMap even = {{"cat", 5}, {"cut", 5}};
  CHECK(correct_typo("cot", even) == "cat");
}

TEST_CASE("correct_typo edit-distance oracle") {
  // reference Levenshtein for the distance-1 predicate
  auto lev = [](const std::string& a, const std::string& b) {
    std::vector<std::vector<int>> d(a.size() + 1,
                                    std::vector<int>(b.size() + 1, 0));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i)
      for (std::size_t j = 1; j <= b.size(); ++j)
        d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                            d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    return d[a.size()][b.size()];
  };

  remine::SplitRng rng(23);
  auto random_word = [&](std::size_t max_len) {
    std::string w;
    const std::size_t len = 1 + rng.next_below(max_len);
    for (std::size_t j = 0; j < len; ++j)
      w += static_cast<char>('a' + rng.next_below(4));  // small alphabet
    return w;
  };
  for (int trial = 0; trial < 200; ++trial) {
    FrequencyMap vocab;
    const std::size_t v = 1 + rng.next_below(6);
    for (std::size_t i = 0; i < v; ++i)
      vocab[random_word(5)] = static_cast<long>(1 + rng.next_below(9));
    const std::string token = random_word(5);
    const std::string fixed = correct_typo(token, vocab);
    if (vocab.count(token)) {
      CHECK(fixed == token);
    } else if (fixed != token) {
      CHECK(lev(fixed, token) == 1);
      // no better candidate: equal-distance words must not beat it
      for (const auto& [w, freq] : vocab) {
        if (lev(w, token) != 1) continue;
        CHECK((freq < vocab[fixed] ||
               (freq == vocab[fixed] && !(w < fixed))));
      }
    } else {
      for (const auto& [w, freq] : vocab) CHECK(lev(w, token) != 1);
    }
  }
}

TEST_CASE("surface_tokens handles punctuation and apostrophes") {
  CHECK(surface_tokens("Don't panic, COVID-19!") ==
        std::vector<std::string>{"dont", "panic", "covid", "19"});
  CHECK(surface_tokens("") == std::vector<std::string>{});
  CHECK(surface_tokens("???") == std::vector<std::string>{});
}
