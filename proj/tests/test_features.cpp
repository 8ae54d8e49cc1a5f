#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "remine/errors.hpp"
#include "remine/features.hpp"
#include "remine/rng.hpp"

using namespace remine::features;
using testhelp::raw_tokens;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path = (std::filesystem::temp_directory_path() /
            ("remine_feat_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++)))
               .string();
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

// terms per sentence as the library sees them: tokens then bigrams
std::vector<std::string> term_stream(const remine::textnorm::ProcessedSentence& s) {
  std::vector<std::string> terms = s.tokens;
  terms.insert(terms.end(), s.bigrams.begin(), s.bigrams.end());
  return terms;
}

double matrix_value(const FeatureMatrix& m, std::size_t row,
                    const std::string& name) {
  for (std::size_t c = 0; c < m.feature_names.size(); ++c)
    if (m.feature_names[c] == name) return m.at(row, c);
  return 0.0;
}

}  // namespace

TEST_CASE("fit_tfidf idf formula") {
  SUBCASE("single document gives idf 1 everywhere") {
    const auto model = fit_tfidf({raw_tokens({"a", "b"})});
    for (const double idf : model.idf) CHECK(idf == doctest::Approx(1.0));
  }
  SUBCASE("two documents split terms by document frequency") {
    const auto model =
        fit_tfidf({raw_tokens({"shared", "only1"}), raw_tokens({"shared"})});
    // shared: ln(3/3)+1 = 1; only1: ln(3/2)+1
    CHECK(matrix_value(transform_tfidf(model, {raw_tokens({"shared"})}), 0,
                       "shared") == doctest::Approx(1.0));
    const auto it = model.vocabulary.find("only1");
    REQUIRE(it != model.vocabulary.end());
    CHECK(model.idf[it->second] == doctest::Approx(std::log(1.5) + 1.0));
    const auto shared_it = model.vocabulary.find("shared");
    REQUIRE(shared_it != model.vocabulary.end());
    CHECK(model.idf[shared_it->second] == doctest::Approx(1.0));
  }
  SUBCASE("refit on identical data is identical") {
    const std::vector<remine::textnorm::ProcessedSentence> docs = {
        raw_tokens({"a", "b"}), raw_tokens({"b", "c"})};
    const auto m1 = fit_tfidf(docs);
    const auto m2 = fit_tfidf(docs);
    CHECK(m1.vocabulary == m2.vocabulary);
    CHECK(m1.idf == m2.idf);
  }
  SUBCASE("empty corpus is rejected") {
    CHECK_THROWS_AS(fit_tfidf({}), remine::argument_error);
    CHECK_THROWS_AS(fit_tfidf({raw_tokens({})}), remine::argument_error);
  }
}

TEST_CASE("transform_tfidf") {
  const auto model =
      fit_tfidf({raw_tokens({"a", "b"}), raw_tokens({"b", "c"})});

  SUBCASE("out-of-vocabulary only rows are zero") {
    const auto m = transform_tfidf(model, {raw_tokens({"zz", "qq"})});
    CHECK(m.sparse[0].empty());
  }
  SUBCASE("rows have unit L2 norm unless empty") {
    const auto m = transform_tfidf(
        model, {raw_tokens({"a", "b", "b"}), raw_tokens({"zz"})});
    double sq = 0.0;
    for (const auto& [c, v] : m.sparse[0]) sq += v * v;
    CHECK(std::sqrt(sq) == doctest::Approx(1.0));
    CHECK(m.sparse[1].empty());
  }
  SUBCASE("sparse indices strictly increase") {
    const auto m = transform_tfidf(
        model, {raw_tokens({"c", "a", "b", "c", "a"})});
    for (std::size_t i = 1; i < m.sparse[0].size(); ++i)
      CHECK(m.sparse[0][i - 1].first < m.sparse[0][i].first);
  }
}

TEST_CASE("tfidf matches the direct-formula oracle") {
  remine::SplitRng rng(71);
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f",
                                         "g", "h", "i", "j"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<remine::textnorm::ProcessedSentence> docs;
    const std::size_t n = 1 + rng.next_below(12);
    bool any = false;
    for (std::size_t d = 0; d < n; ++d) {
      std::vector<std::string> tokens;
      for (std::size_t i = rng.next_below(8); i > 0; --i)
        tokens.push_back(pool[rng.next_below(pool.size())]);
      any = any || !tokens.empty();
      docs.push_back(raw_tokens(tokens, "doc", static_cast<int>(d)));
    }
    if (!any) continue;

    const auto model = fit_tfidf(docs);
    const auto matrix = transform_tfidf(model, docs);

    std::vector<std::vector<std::string>> streams;
    for (const auto& d : docs) streams.push_back(term_stream(d));
    const auto expected = oracle::tfidf(streams);

    for (std::size_t r = 0; r < docs.size(); ++r) {
      for (const auto& [term, value] : expected[r]) {
        CAPTURE(term);
        CHECK(std::fabs(matrix_value(matrix, r, term) - value) < 1e-9);
      }
      // and nothing extra: nonzero count matches
      CHECK(matrix.sparse[r].size() == expected[r].size());
    }
  }
}

TEST_CASE("tfidf transform is invariant under document reordering") {
  const std::vector<remine::textnorm::ProcessedSentence> docs = {
      raw_tokens({"a", "b"}, "d", 0), raw_tokens({"b", "c"}, "d", 1),
      raw_tokens({"c", "c", "a"}, "d", 2)};
  std::vector<remine::textnorm::ProcessedSentence> reversed(docs.rbegin(),
                                                            docs.rend());
  const auto m1 = transform_tfidf(fit_tfidf(docs), docs);
  const auto m2 = transform_tfidf(fit_tfidf(reversed), reversed);
  for (std::size_t r = 0; r < docs.size(); ++r) {
    const std::size_t rr = docs.size() - 1 - r;
    REQUIRE(m1.sparse[r].size() == m2.sparse[rr].size());
    for (std::size_t i = 0; i < m1.sparse[r].size(); ++i) {
      CHECK(m1.sparse[r][i].first == m2.sparse[rr][i].first);
      CHECK(m1.sparse[r][i].second ==
            doctest::Approx(m2.sparse[rr][i].second).epsilon(1e-12));
    }
  }
}

TEST_CASE("load_word_vectors") {
  SUBCASE("plain file") {
    TempFile f("alpha 1.0 2.0 3.0\nbeta 4.0 5.0 6.0\n");
    const auto wv = load_word_vectors(f.path);
    CHECK(wv.dim == 3);
    CHECK(wv.map.size() == 2);
    CHECK(wv.map.at("beta")[1] == doctest::Approx(5.0));
  }
  SUBCASE("word2vec-style header is skipped") {
    TempFile f("2 3\nalpha 1 2 3\nbeta 4 5 6\n");
    const auto wv = load_word_vectors(f.path);
    CHECK(wv.dim == 3);
    CHECK(wv.map.size() == 2);
  }
  SUBCASE("dimension mismatch names the line") {
    TempFile f("alpha 1 2 3\nbeta 4 5\n");
    try {
      load_word_vectors(f.path);
      FAIL("expected validation_error");
    } catch (const remine::validation_error& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }
  SUBCASE("non-numeric field rejected") {
    TempFile f("alpha 1 x 3\n");
    CHECK_THROWS_AS(load_word_vectors(f.path), remine::validation_error);
  }
  CHECK_THROWS_AS(load_word_vectors("/missing/vectors.txt"), remine::io_error);
}

TEST_CASE("embed_average") {
  WordVectors wv;
  wv.dim = 2;
  wv.map = {{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}};

  SUBCASE("single known word returns its vector") {
    bool oov = true;
    const auto v = embed_average(raw_tokens({"a"}), wv, &oov);
    CHECK_FALSE(oov);
    CHECK(v == std::vector<double>{1.0, 0.0});
  }
  SUBCASE("two known words average") {
    const auto v = embed_average(raw_tokens({"a", "b"}), wv);
    CHECK(v[0] == doctest::Approx(0.5));
    CHECK(v[1] == doctest::Approx(0.5));
  }
  SUBCASE("all OOV yields the zero vector and the flag") {
    bool oov = false;
    const auto v = embed_average(raw_tokens({"zz"}), wv, &oov);
    CHECK(oov);
    CHECK(v == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("token order does not matter") {
    wv.map["c"] = {3.0, -1.0};
    const auto v1 = embed_average(raw_tokens({"a", "b", "c"}), wv);
    const auto v2 = embed_average(raw_tokens({"c", "a", "b"}), wv);
    CHECK(v1[0] == doctest::Approx(v2[0]));
    CHECK(v1[1] == doctest::Approx(v2[1]));
  }
  SUBCASE("embed_matrix collects OOV diagnostics") {
    EmbedDiagnostics diag;
    const auto m = embed_matrix(
        {raw_tokens({"a"}, "d", 0), raw_tokens({"zz"}, "d", 1)}, wv, &diag);
    CHECK(m.n_rows == 2);
    CHECK(m.is_sparse == false);
    CHECK(diag.oov_rows == std::vector<std::size_t>{1});
  }
}

TEST_CASE("load_precomputed") {
  const std::vector<SentenceRef> refs = {{"d1", 0}, {"d1", 1}, {"d2", 0}};

  SUBCASE("aligned file loads in corpus order regardless of file order") {
    TempFile f(
        "doc_id,sent_index,v1,v2\n"
        "d2,0,5,6\n"
        "d1,0,1,2\n"
        "d1,1,3,4\n");
    const auto m = load_precomputed(f.path, refs);
    CHECK(m.n_rows == 3);
    CHECK(m.n_cols == 2);
    CHECK(m.dense[0] == std::vector<double>{1, 2});
    CHECK(m.dense[1] == std::vector<double>{3, 4});
    CHECK(m.dense[2] == std::vector<double>{5, 6});
  }
  SUBCASE("missing ref is named") {
    TempFile f("doc_id,sent_index,v1,v2\nd1,0,1,2\nd1,1,3,4\n");
    try {
      load_precomputed(f.path, refs);
      FAIL("expected validation_error");
    } catch (const remine::validation_error& e) {
      CHECK(std::string(e.what()).find("d2#0") != std::string::npos);
    }
  }
  SUBCASE("unknown ref is rejected") {
    TempFile f(
        "doc_id,sent_index,v1,v2\nd1,0,1,2\nd1,1,3,4\nd2,0,5,6\nd9,9,7,8\n");
    try {
      load_precomputed(f.path, refs);
      FAIL("expected validation_error");
    } catch (const remine::validation_error& e) {
      CHECK(std::string(e.what()).find("d9#9") != std::string::npos);
    }
  }
  SUBCASE("ragged vector length rejected") {
    TempFile f("doc_id,sent_index,v1,v2\nd1,0,1,2\nd1,1,3\nd2,0,5,6\n");
    CHECK_THROWS_AS(load_precomputed(f.path, refs), remine::validation_error);
  }
}

TEST_CASE("assemble appends binary flag columns") {
  using remine::signals::SignalTags;
  const auto model = fit_tfidf({raw_tokens({"a"}), raw_tokens({"b"})});
  const auto base = transform_tfidf(
      model, {raw_tokens({"a"}, "d", 0), raw_tokens({"b"}, "d", 1)});
  const std::vector<SignalTags> tags = {SignalTags{true, 2, true, 5},
                                        SignalTags{false, 0, false, 3}};

  SUBCASE("no flags means the matrix passes through") {
    FeatureSpec spec;
    const auto m = assemble(base, tags, spec);
    CHECK(m.n_cols == base.n_cols);
    CHECK(m.feature_names == base.feature_names);
  }
  SUBCASE("both flags add two named columns with 0/1 values") {
    FeatureSpec spec;
    spec.append_interrogative = true;
    spec.append_keyword = true;
    const auto m = assemble(base, tags, spec);
    CHECK(m.n_cols == base.n_cols + 2);
    CHECK(m.feature_names[m.n_cols - 2] == "is_interrogative");
    CHECK(m.feature_names[m.n_cols - 1] == "has_keyword");
    CHECK(m.at(0, m.n_cols - 2) == 1.0);
    CHECK(m.at(0, m.n_cols - 1) == 1.0);
    CHECK(m.at(1, m.n_cols - 2) == 0.0);
    CHECK(m.at(1, m.n_cols - 1) == 0.0);
    for (std::size_t r = 0; r < m.n_rows; ++r)
      for (const auto& [c, v] : m.sparse[r])
        if (c >= base.n_cols) CHECK((v == 0.0 || v == 1.0));
  }
  SUBCASE("tag misalignment is an error") {
    FeatureSpec spec;
    spec.append_keyword = true;
    CHECK_THROWS_AS(assemble(base, {tags[0]}, spec), remine::argument_error);
  }
}
