#include "remine/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "remine/errors.hpp"
#include "remine/io.hpp"

namespace remine::features {

double FeatureMatrix::at(std::size_t row, std::size_t col) const {
  if (!is_sparse) return dense[row][col];
  const auto& r = sparse[row];
  auto it = std::lower_bound(
      r.begin(), r.end(), col,
      [](const auto& entry, std::size_t c) { return entry.first < c; });
  if (it != r.end() && it->first == col) return it->second;
  return 0.0;
}

std::vector<double> FeatureMatrix::row_dense(std::size_t row) const {
  if (!is_sparse) return dense[row];
  std::vector<double> out(n_cols, 0.0);
  for (const auto& [c, v] : sparse[row]) out[c] = v;
  return out;
}

namespace {

// Term stream for one sentence: lemmas plus bigrams.
template <typename Fn>
void for_each_term(const textnorm::ProcessedSentence& s, Fn&& fn) {
  for (const auto& t : s.tokens) fn(t);
  for (const auto& b : s.bigrams) fn(b);
}

}  // namespace

TfidfModel fit_tfidf(const std::vector<textnorm::ProcessedSentence>& train,
                     Norm norm) {
  bool any_term = false;
  std::map<std::string, std::size_t> df;
  for (const auto& s : train) {
    std::set<std::string> seen;
    for_each_term(s, [&](const std::string& t) { seen.insert(t); });
    for (const auto& t : seen) ++df[t];
    if (!seen.empty()) any_term = true;
  }
  if (train.empty() || !any_term)
    throw argument_error("fit_tfidf: no terms in training corpus");

  TfidfModel model;
  model.norm = norm;
  const double n_docs = static_cast<double>(train.size());
  std::uint32_t col = 0;
  for (const auto& [term, f] : df) {
    model.vocabulary.emplace(term, col++);
    model.idf.push_back(std::log((1.0 + n_docs) / (1.0 + static_cast<double>(f))) +
                        1.0);
  }
  return model;
}

FeatureMatrix transform_tfidf(
    const TfidfModel& model,
    const std::vector<textnorm::ProcessedSentence>& sentences) {
  FeatureMatrix m;
  m.n_rows = sentences.size();
  m.n_cols = model.vocabulary.size();
  m.is_sparse = true;
  m.sparse.resize(m.n_rows);
  m.feature_names.reserve(m.n_cols);
  for (const auto& [term, col] : model.vocabulary) {
    (void)col;
    m.feature_names.push_back(term);
  }

  for (std::size_t i = 0; i < sentences.size(); ++i) {
    m.row_ids.push_back({sentences[i].doc_id, sentences[i].sent_index});
    std::map<std::uint32_t, double> tf;
    for_each_term(sentences[i], [&](const std::string& t) {
      if (auto it = model.vocabulary.find(t); it != model.vocabulary.end())
        tf[it->second] += 1.0;
    });
    auto& row = m.sparse[i];
    double sq = 0.0;
    for (const auto& [col, count] : tf) {
      const double v = count * model.idf[col];
      row.emplace_back(col, v);
      sq += v * v;
    }
    if (model.norm == Norm::l2 && sq > 0.0) {
      const double inv = 1.0 / std::sqrt(sq);
      for (auto& [col, v] : row) v *= inv;
    }
  }
  return m;
}

WordVectors load_word_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open word-vector file: " + path);

  WordVectors wv;
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string f;
    while (ss >> f) fields.push_back(f);
    if (fields.empty()) continue;

    if (first_content && fields.size() == 2) {
      // word2vec-style "count dim" header
      char* end = nullptr;
      std::strtod(fields[0].c_str(), &end);
      const bool f0_num = end && *end == '\0';
      std::strtod(fields[1].c_str(), &end);
      const bool f1_num = end && *end == '\0';
      if (f0_num && f1_num) {
        first_content = false;
        continue;
      }
    }
    first_content = false;

    if (fields.size() < 2)
      throw validation_error(path + ":" + std::to_string(lineno) +
                             ": expected 'word v1 ... vd'");
    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(fields[i].c_str(), &end);
      if (!end || *end != '\0')
        throw validation_error(path + ":" + std::to_string(lineno) +
                               ": non-numeric value '" + fields[i] + "'");
      vec.push_back(v);
    }
    if (wv.dim == 0) wv.dim = vec.size();
    if (vec.size() != wv.dim)
      throw validation_error(path + ":" + std::to_string(lineno) +
                             ": expected " + std::to_string(wv.dim) +
                             " values, found " + std::to_string(vec.size()));
    wv.map[fields[0]] = std::move(vec);
  }
  if (wv.map.empty())
    throw validation_error(path + ": no vectors found");
  return wv;
}

std::vector<double> embed_average(const textnorm::ProcessedSentence& sentence,
                                  const WordVectors& vectors, bool* all_oov) {
  std::vector<double> sum(vectors.dim, 0.0);
  std::size_t hits = 0;
  for (const auto& t : sentence.tokens) {
    if (auto it = vectors.map.find(t); it != vectors.map.end()) {
      for (std::size_t d = 0; d < vectors.dim; ++d) sum[d] += it->second[d];
      ++hits;
    }
  }
  if (all_oov) *all_oov = hits == 0;
  if (hits > 0) {
    const double inv = 1.0 / static_cast<double>(hits);
    for (auto& v : sum) v *= inv;
  }
  return sum;
}

FeatureMatrix embed_matrix(
    const std::vector<textnorm::ProcessedSentence>& sentences,
    const WordVectors& vectors, EmbedDiagnostics* diag) {
  FeatureMatrix m;
  m.n_rows = sentences.size();
  m.n_cols = vectors.dim;
  m.is_sparse = false;
  m.dense.reserve(sentences.size());
  for (std::size_t d = 0; d < vectors.dim; ++d)
    m.feature_names.push_back("v" + std::to_string(d));
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    m.row_ids.push_back({sentences[i].doc_id, sentences[i].sent_index});
    bool oov = false;
    m.dense.push_back(embed_average(sentences[i], vectors, &oov));
    if (oov && diag) diag->oov_rows.push_back(i);
  }
  return m;
}

FeatureMatrix load_precomputed(const std::string& path,
                               const std::vector<SentenceRef>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open embedding file: " + path);
  auto rows = io::parse_csv(in);
  if (rows.empty()) throw validation_error(path + ": empty embedding file");

  std::size_t start = 0;
  if (!rows[0].empty() && rows[0][0] == "doc_id") start = 1;  // header

  std::map<SentenceRef, std::vector<double>> by_ref;
  std::size_t dim = 0;
  std::vector<std::string> unknown;
  std::set<SentenceRef> wanted(expected.begin(), expected.end());

  for (std::size_t r = start; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 3)
      throw validation_error(path + ": record " + std::to_string(r + 1) +
                             ": expected doc_id,sent_index,v1,...");
    SentenceRef ref;
    ref.doc_id = row[0];
    try {
      ref.sent_index = std::stoi(row[1]);
    } catch (const std::exception&) {
      throw validation_error(path + ": record " + std::to_string(r + 1) +
                             ": bad sent_index '" + row[1] + "'");
    }
    std::vector<double> vec;
    vec.reserve(row.size() - 2);
    for (std::size_t i = 2; i < row.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(row[i].c_str(), &end);
      if (!end || *end != '\0')
        throw validation_error(path + ": record " + std::to_string(r + 1) +
                               ": non-numeric value '" + row[i] + "'");
      vec.push_back(v);
    }
    if (dim == 0) dim = vec.size();
    if (vec.size() != dim)
      throw validation_error(path + ": record " + std::to_string(r + 1) +
                             ": expected " + std::to_string(dim) +
                             " values, found " + std::to_string(vec.size()));
    if (!wanted.count(ref))
      unknown.push_back(ref.doc_id + "#" + std::to_string(ref.sent_index));
    by_ref[ref] = std::move(vec);
  }

  if (!unknown.empty()) {
    std::string msg = path + ": refs not in corpus:";
    for (const auto& u : unknown) msg += " " + u;
    throw validation_error(msg);
  }
  std::vector<std::string> missing;
  for (const auto& ref : expected)
    if (!by_ref.count(ref))
      missing.push_back(ref.doc_id + "#" + std::to_string(ref.sent_index));
  if (!missing.empty()) {
    std::string msg = path + ": missing embeddings for:";
    for (const auto& m : missing) msg += " " + m;
    throw validation_error(msg);
  }

  FeatureMatrix m;
  m.n_rows = expected.size();
  m.n_cols = dim;
  m.is_sparse = false;
  m.row_ids = expected;
  for (std::size_t d = 0; d < dim; ++d)
    m.feature_names.push_back("v" + std::to_string(d));
  for (const auto& ref : expected) m.dense.push_back(by_ref.at(ref));
  return m;
}

FeatureMatrix assemble(const FeatureMatrix& text_matrix,
                       const std::vector<signals::SignalTags>& tags,
                       const FeatureSpec& spec) {
  if (!spec.append_interrogative && !spec.append_keyword) return text_matrix;
  if (tags.size() != text_matrix.n_rows)
    throw argument_error("assemble: tag rows do not align with matrix rows");

  FeatureMatrix m = text_matrix;
  std::uint32_t col = static_cast<std::uint32_t>(m.n_cols);
  const std::uint32_t interrogative_col = spec.append_interrogative ? col++ : 0;
  const std::uint32_t keyword_col = spec.append_keyword ? col++ : 0;
  m.n_cols = col;
  if (spec.append_interrogative) m.feature_names.push_back("is_interrogative");
  if (spec.append_keyword) m.feature_names.push_back("has_keyword");

  for (std::size_t i = 0; i < m.n_rows; ++i) {
    if (m.is_sparse) {
      auto& row = m.sparse[i];
      if (spec.append_interrogative && tags[i].is_interrogative)
        row.emplace_back(interrogative_col, 1.0);
      if (spec.append_keyword && tags[i].has_keyword)
        row.emplace_back(keyword_col, 1.0);
    } else {
      auto& row = m.dense[i];
      if (spec.append_interrogative)
        row.push_back(tags[i].is_interrogative ? 1.0 : 0.0);
      if (spec.append_keyword) row.push_back(tags[i].has_keyword ? 1.0 : 0.0);
    }
  }
  return m;
}

}  // namespace remine::features
