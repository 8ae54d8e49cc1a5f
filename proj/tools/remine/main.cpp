// remine: mine requirement sentences from forum dumps.
//
// Subcommands cover every pipeline stage; `pipeline` chains them from raw
// dumps to the evaluation report with a run manifest. Every intermediate file
// is schema-versioned and any stage can be re-run in isolation.

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "remine/errors.hpp"
#include "remine/evalharness.hpp"
#include "remine/features.hpp"
#include "remine/fixture.hpp"
#include "remine/ingest.hpp"
#include "remine/io.hpp"
#include "remine/labels.hpp"
#include "remine/learn.hpp"
#include "remine/rng.hpp"
#include "remine/signals.hpp"
#include "remine/summarize.hpp"
#include "remine/textnorm.hpp"

namespace fs = std::filesystem;
using remine::io::ojson;

namespace {

constexpr const char* kVersion = "remine 1.0.0";

std::string data_path(const char* name) {
  return std::string(REMINE_DATA_DIR) + "/" + name;
}

std::uint64_t derive_seed(std::uint64_t seed, const char* label) {
  return remine::SplitRng(seed).split(label).next_u64();
}

// ---------------------------------------------------------------------------
// small utilities

std::int64_t parse_iso_date(const std::string& s) {
  int y = 0, m = 0, d = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3 || m < 1 || m > 12 ||
      d < 1 || d > 31)
    throw remine::argument_error("expected ISO date YYYY-MM-DD, got '" + s + "'");
  // days from civil epoch 1970-01-01
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
      static_cast<unsigned>(d) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  const std::int64_t days =
      static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) -
      719468;
  return days * 86400;
}

void require_input(const std::string& path) {
  if (!fs::exists(path))
    throw remine::io_error("missing input file: " + path);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw remine::io_error("cannot write: " + path);
  out << content;
}

// ---------------------------------------------------------------------------
// sentence-record (de)serialization, schema "sentences"/v1

struct SentenceRecord {
  remine::textnorm::ProcessedSentence sentence;
  std::optional<remine::signals::SignalTags> tags;
  std::vector<remine::labels::WorkerVote> votes;
  std::optional<remine::labels::Label> label;
  std::optional<double> score;  // summarizer score when kept by `summarize`
};

ojson sentence_to_json(const SentenceRecord& rec) {
  ojson j;
  j["doc_id"] = rec.sentence.doc_id;
  j["sent_index"] = rec.sentence.sent_index;
  j["raw"] = rec.sentence.raw;
  j["tokens"] = rec.sentence.tokens;
  j["bigrams"] = rec.sentence.bigrams;
  if (rec.score) j["score"] = *rec.score;
  if (rec.tags) {
    j["signals"] = {{"has_keyword", rec.tags->has_keyword},
                    {"keyword_count", rec.tags->keyword_count},
                    {"is_interrogative", rec.tags->is_interrogative},
                    {"word_count", rec.tags->word_count}};
  }
  if (!rec.votes.empty()) {
    ojson votes = ojson::array();
    for (const auto& v : rec.votes)
      votes.push_back({{"worker_id", v.worker_id},
                       {"vote", v.vote == remine::labels::Vote::yes ? "yes" : "no"}});
    j["votes"] = std::move(votes);
  }
  if (rec.label) {
    j["label"] = *rec.label == remine::labels::Label::requirement
                     ? "requirement"
                     : "non_requirement";
  }
  return j;
}

SentenceRecord sentence_from_json(const ojson& j) {
  SentenceRecord rec;
  rec.sentence.doc_id = j.at("doc_id").get<std::string>();
  rec.sentence.sent_index = j.at("sent_index").get<int>();
  rec.sentence.raw = j.at("raw").get<std::string>();
  rec.sentence.tokens = j.at("tokens").get<std::vector<std::string>>();
  rec.sentence.bigrams = j.at("bigrams").get<std::vector<std::string>>();
  if (j.contains("score")) rec.score = j.at("score").get<double>();
  if (j.contains("signals")) {
    remine::signals::SignalTags t;
    const auto& s = j.at("signals");
    t.has_keyword = s.at("has_keyword").get<bool>();
    t.keyword_count = s.at("keyword_count").get<int>();
    t.is_interrogative = s.at("is_interrogative").get<bool>();
    t.word_count = s.at("word_count").get<int>();
    rec.tags = t;
  }
  if (j.contains("votes")) {
    for (const auto& v : j.at("votes")) {
      remine::labels::WorkerVote vote;
      vote.task_id = remine::labels::task_id_for(rec.sentence.doc_id,
                                                 rec.sentence.sent_index);
      vote.worker_id = v.at("worker_id").get<std::string>();
      vote.vote = v.at("vote").get<std::string>() == "yes"
                      ? remine::labels::Vote::yes
                      : remine::labels::Vote::no;
      rec.votes.push_back(std::move(vote));
    }
  }
  if (j.contains("label")) {
    rec.label = j.at("label").get<std::string>() == "requirement"
                    ? remine::labels::Label::requirement
                    : remine::labels::Label::non_requirement;
  }
  return rec;
}

std::vector<SentenceRecord> read_sentences_file(const std::string& path) {
  require_input(path);
  const auto file = remine::io::read_jsonl(path, "sentences", 1);
  std::vector<SentenceRecord> records;
  records.reserve(file.records.size());
  for (const auto& j : file.records) records.push_back(sentence_from_json(j));
  return records;
}

void write_sentences_file(const std::string& path,
                          const std::vector<SentenceRecord>& records) {
  std::vector<ojson> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(sentence_to_json(r));
  remine::io::write_jsonl(path, remine::io::make_header("sentences", 1), out);
}

// ---------------------------------------------------------------------------
// corpus-record (de)serialization, schema "corpus"/v1

ojson post_to_json(const remine::ingest::RawPost& p) {
  ojson j;
  j["id"] = p.id;
  j["kind"] = p.kind == remine::ingest::PostKind::post ? "post" : "comment";
  if (p.parent_id) j["parent_id"] = *p.parent_id;
  j["created_utc"] = p.created_utc;
  if (p.title) j["title"] = *p.title;
  j["body"] = p.body;
  j["score"] = p.score;
  if (p.permalink) j["permalink"] = *p.permalink;
  return j;
}

remine::ingest::RawPost post_from_json(const ojson& j) {
  remine::ingest::RawPost p;
  p.id = j.at("id").get<std::string>();
  p.kind = j.at("kind").get<std::string>() == "post"
               ? remine::ingest::PostKind::post
               : remine::ingest::PostKind::comment;
  if (j.contains("parent_id")) p.parent_id = j.at("parent_id").get<std::string>();
  p.created_utc = j.at("created_utc").get<std::int64_t>();
  if (j.contains("title")) p.title = j.at("title").get<std::string>();
  p.body = j.at("body").get<std::string>();
  p.score = j.value("score", 0);
  if (j.contains("permalink")) p.permalink = j.at("permalink").get<std::string>();
  return p;
}

void write_corpus_file(const std::string& path, const remine::ingest::Corpus& c) {
  ojson header = remine::io::make_header("corpus", 1);
  if (c.window) header["window"] = {c.window->first, c.window->second};
  else header["window"] = nullptr;
  header["provenance"] = c.provenance;
  std::vector<ojson> records;
  records.reserve(c.records.size());
  for (const auto& p : c.records) records.push_back(post_to_json(p));
  remine::io::write_jsonl(path, header, records);
}

remine::ingest::Corpus read_corpus_file(const std::string& path) {
  require_input(path);
  const auto file = remine::io::read_jsonl(path, "corpus", 1);
  remine::ingest::Corpus c;
  if (file.header.contains("window") && !file.header["window"].is_null())
    c.window = {file.header["window"][0].get<std::int64_t>(),
                file.header["window"][1].get<std::int64_t>()};
  if (file.header.contains("provenance"))
    c.provenance = file.header["provenance"].get<std::vector<std::string>>();
  for (const auto& j : file.records) c.records.push_back(post_from_json(j));
  return c;
}

// ---------------------------------------------------------------------------
// stage options and implementations

struct IngestOptions {
  std::vector<std::string> dumps;
  std::string from_date, to_date;
  std::string keywords = data_path("covid_keywords.txt");
  std::string out = "corpus.jsonl";
};

void run_ingest(const IngestOptions& opt) {
  remine::ingest::Corpus merged;
  remine::ingest::ParseReport total;
  for (const auto& dump : opt.dumps) {
    require_input(dump);
    std::ifstream in(dump, std::ios::binary);
    remine::ingest::ParseReport report;
    auto corpus = remine::ingest::parse_dump(in, dump, &report);
    total.lines += report.lines;
    total.parsed += report.parsed;
    total.skipped += report.skipped;
    for (const auto& m : report.skip_messages) {
      if (total.skip_messages.size() < 20) total.skip_messages.push_back(m);
    }
    merged.provenance.push_back(dump);
    for (auto& r : corpus.records) merged.records.push_back(std::move(r));
  }
  std::cerr << "parsed " << total.parsed << "/" << total.lines << " lines";
  if (total.skipped) std::cerr << " (" << total.skipped << " skipped)";
  std::cerr << "\n";
  for (const auto& m : total.skip_messages) std::cerr << "  skip: " << m << "\n";

  if (!opt.from_date.empty() || !opt.to_date.empty()) {
    if (opt.from_date.empty() || opt.to_date.empty())
      throw remine::argument_error("--from and --to must be given together");
    merged = remine::ingest::filter_window(merged, parse_iso_date(opt.from_date),
                                           parse_iso_date(opt.to_date));
  }
  const auto lexicon = remine::ingest::load_relevance_lexicon(opt.keywords);
  merged = remine::ingest::filter_relevant(merged, lexicon);
  std::cerr << "kept " << merged.records.size() << " records ("
            << merged.post_count() << " posts, " << merged.comment_count()
            << " comments, " << remine::ingest::resolved_parent_links(merged)
            << " parent links resolved)\n";
  write_corpus_file(opt.out, merged);
}

struct SentencesOptions {
  std::string in = "corpus.jsonl";
  std::string out = "sentences.jsonl";
  std::string stopwords = data_path("stopwords.txt");
  std::string lemma_exceptions = data_path("lemma_exceptions.tsv");
  bool correct_typos = false;
};

remine::textnorm::NormConfig make_norm_config(const std::string& stopwords,
                                              const std::string& lemma_exceptions,
                                              bool correct_typos) {
  remine::textnorm::NormConfig cfg;
  cfg.stopwords = remine::textnorm::load_stopwords(stopwords);
  cfg.lemmas = remine::textnorm::load_lemma_table(lemma_exceptions);
  cfg.correct_typos = correct_typos;
  return cfg;
}

void run_sentences(const SentencesOptions& opt) {
  const auto corpus = read_corpus_file(opt.in);
  const auto cfg =
      make_norm_config(opt.stopwords, opt.lemma_exceptions, opt.correct_typos);

  remine::textnorm::FrequencyMap vocab;
  if (opt.correct_typos) {
    std::vector<std::string> texts;
    for (const auto& r : corpus.records) {
      if (r.title) texts.push_back(*r.title);
      texts.push_back(r.body);
    }
    vocab = remine::textnorm::build_vocabulary(texts);
  }

  std::vector<SentenceRecord> records;
  for (const auto& r : corpus.records) {
    int index = 0;
    auto add = [&](const std::string& text) {
      for (const auto& raw : remine::textnorm::split_sentences(text)) {
        SentenceRecord rec;
        rec.sentence = remine::textnorm::normalize(
            raw, cfg, opt.correct_typos ? &vocab : nullptr);
        rec.sentence.doc_id = r.id;
        rec.sentence.sent_index = index++;
        records.push_back(std::move(rec));
      }
    };
    if (r.title) add(*r.title);
    add(r.body);
  }
  std::cerr << "split " << corpus.records.size() << " records into "
            << records.size() << " sentences\n";
  write_sentences_file(opt.out, records);
}

struct SummarizeOptions {
  std::string in = "sentences.jsonl";
  std::string out = "summary.jsonl";
  std::string method = "textrank";
  double ratio = 0.3;
  int top_k = 0;
};

void run_summarize(const SummarizeOptions& opt) {
  auto records = read_sentences_file(opt.in);
  remine::summarize::SummaryConfig cfg;
  if (opt.method == "textrank") cfg.method = remine::summarize::Method::textrank;
  else if (opt.method == "lexrank") cfg.method = remine::summarize::Method::lexrank;
  else if (opt.method == "sumbasic") cfg.method = remine::summarize::Method::sumbasic;
  else throw remine::argument_error("unknown method: " + opt.method);
  cfg.ratio = opt.ratio;
  if (opt.top_k > 0) cfg.top_k = static_cast<std::size_t>(opt.top_k);

  std::vector<SentenceRecord> kept;
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    while (end < records.size() &&
           records[end].sentence.doc_id == records[begin].sentence.doc_id)
      ++end;
    std::vector<remine::textnorm::ProcessedSentence> doc;
    for (std::size_t i = begin; i < end; ++i) doc.push_back(records[i].sentence);
    const auto selected = remine::summarize::summarize(doc, cfg);
    for (const std::size_t i : selected) kept.push_back(records[begin + i]);
    begin = end;
  }
  std::cerr << "kept " << kept.size() << " of " << records.size()
            << " sentences\n";
  write_sentences_file(opt.out, kept);
}

struct RougeOptions {
  std::string cand, ref;
  int n = 0;  // 0 = report 1..4
};

void run_rouge(const RougeOptions& opt) {
  require_input(opt.cand);
  require_input(opt.ref);
  const auto cand_tokens =
      remine::textnorm::surface_tokens(remine::io::slurp_file(opt.cand));
  const auto ref_tokens =
      remine::textnorm::surface_tokens(remine::io::slurp_file(opt.ref));
  ojson out;
  const int lo = opt.n > 0 ? opt.n : 1;
  const int hi = opt.n > 0 ? opt.n : 4;
  for (int n = lo; n <= hi; ++n) {
    const auto s = remine::summarize::rouge_n(cand_tokens, ref_tokens, n);
    out["rouge-" + std::to_string(n)] = {
        {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  }
  std::cout << out.dump(2) << "\n";
}

struct TagOptions {
  std::string in = "sentences.jsonl";
  std::string out = "tagged.jsonl";
  std::string seeds = data_path("requirement_seeds.txt");
  std::string synonyms = data_path("requirement_synonyms.txt");
  std::string lemma_exceptions = data_path("lemma_exceptions.tsv");
};

remine::signals::RequirementLexicon load_requirement_lexicon(
    const std::string& seeds, const std::string& synonyms,
    const std::string& lemma_exceptions) {
  const auto lemmas = remine::textnorm::load_lemma_table(lemma_exceptions);
  return remine::signals::expand_lexicon(
      remine::signals::load_seed_terms(seeds),
      remine::signals::load_synonym_dict(synonyms), lemmas);
}

void run_tag(const TagOptions& opt) {
  auto records = read_sentences_file(opt.in);
  const auto lexicon =
      load_requirement_lexicon(opt.seeds, opt.synonyms, opt.lemma_exceptions);
  std::size_t keyword = 0, interrogative = 0;
  for (auto& rec : records) {
    rec.tags = remine::signals::tag_sentence(rec.sentence, lexicon);
    if (rec.tags->has_keyword) ++keyword;
    if (rec.tags->is_interrogative) ++interrogative;
  }
  std::cerr << "tagged " << records.size() << " sentences: " << keyword
            << " with keywords, " << interrogative << " interrogative\n";
  write_sentences_file(opt.out, records);
}

struct LabelExportOptions {
  std::string in = "tagged.jsonl";
  std::string out = "tasks.csv";
  double fraction = 0.1;
  std::uint64_t seed = 7;
};

void run_label_export(const LabelExportOptions& opt) {
  const auto records = read_sentences_file(opt.in);
  std::vector<remine::textnorm::ProcessedSentence> sentences;
  for (const auto& r : records) sentences.push_back(r.sentence);
  const auto tasks =
      remine::labels::sample_for_labeling(sentences, opt.fraction, opt.seed);
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw remine::io_error("cannot write: " + opt.out);
  remine::labels::export_tasks(tasks, out);
  std::cerr << "exported " << tasks.size() << " of " << sentences.size()
            << " sentences as label tasks\n";
}

struct LabelMergeOptions {
  std::string in = "tagged.jsonl";
  std::string tasks = "tasks.csv";
  std::string votes = "votes.csv";
  std::string out = "labeled.jsonl";
};

void run_label_merge(const LabelMergeOptions& opt) {
  auto records = read_sentences_file(opt.in);
  require_input(opt.tasks);
  require_input(opt.votes);

  std::ifstream tasks_in(opt.tasks, std::ios::binary);
  const auto tasks = remine::labels::import_tasks(tasks_in);
  std::unordered_set<std::string> known;
  for (const auto& t : tasks) known.insert(t.task_id);

  std::ifstream votes_in(opt.votes, std::ios::binary);
  const auto votes = remine::labels::import_votes(votes_in, known, opt.votes);

  std::map<std::string, std::vector<remine::labels::WorkerVote>> by_task;
  for (const auto& v : votes) by_task[v.task_id].push_back(v);

  std::size_t labeled = 0, unvoted = 0;
  for (const auto& t : tasks)
    if (!by_task.count(t.task_id)) ++unvoted;

  for (auto& rec : records) {
    const std::string task_id = remine::labels::task_id_for(
        rec.sentence.doc_id, rec.sentence.sent_index);
    auto it = by_task.find(task_id);
    if (it == by_task.end()) continue;
    rec.votes = it->second;
    rec.label = remine::labels::majority_vote(it->second);
    ++labeled;
  }
  std::cerr << "labeled " << labeled << " sentences";
  if (unvoted) std::cerr << " (" << unvoted << " tasks had no votes)";
  std::cerr << "\n";
  write_sentences_file(opt.out, records);
}

struct StatsOptions {
  std::string in = "labeled.jsonl";
  std::string out = "stats.json";
};

void run_stats(const StatsOptions& opt) {
  const auto records = read_sentences_file(opt.in);
  std::vector<remine::labels::StatRow> rows;
  for (const auto& rec : records) {
    if (!rec.label || !rec.tags) continue;
    rows.push_back({*rec.label, *rec.tags});
  }
  if (rows.empty())
    throw remine::validation_error(opt.in +
                                   ": no rows carry both label and signals");
  ojson stats = remine::labels::corpus_stats(rows);
  ojson out = remine::io::make_header("stats", 1);
  out.update(stats);
  write_text_file(opt.out, out.dump(2) + "\n");
  std::cerr << "stats over " << rows.size() << " labeled sentences -> "
            << opt.out << "\n";
}

// ---------------------------------------------------------------------------
// featurize / train / evaluate

remine::evalharness::LabeledCorpus labeled_corpus_from_records(
    const std::vector<SentenceRecord>& records) {
  remine::evalharness::LabeledCorpus corpus;
  for (const auto& rec : records) {
    if (!rec.label) continue;
    if (!rec.tags)
      throw remine::validation_error(
          "labeled sentence " + rec.sentence.doc_id + "#" +
          std::to_string(rec.sentence.sent_index) +
          " has no signals; run `tag` before labeling");
    corpus.sentences.push_back(rec.sentence);
    corpus.tags.push_back(*rec.tags);
    corpus.labels.push_back(
        *rec.label == remine::labels::Label::requirement ? 1 : 0);
  }
  return corpus;
}

remine::features::FeatureSpec parse_feature_spec(const std::string& rep,
                                                 const std::string& flags) {
  remine::features::FeatureSpec spec;
  spec.text_rep = remine::evalharness::text_rep_from_name(rep);
  std::stringstream ss(flags);
  std::string flag;
  while (std::getline(ss, flag, ',')) {
    if (flag.empty()) continue;
    if (flag == "interrogative") spec.append_interrogative = true;
    else if (flag == "keyword") spec.append_keyword = true;
    else throw remine::argument_error("unknown feature flag: " + flag);
  }
  return spec;
}

ojson sparse_matrix_to_json(const remine::features::FeatureMatrix& m) {
  ojson j = remine::io::make_header("features", 1);
  j["n_rows"] = m.n_rows;
  j["n_cols"] = m.n_cols;
  j["storage"] = m.is_sparse ? "sparse" : "dense";
  j["feature_names"] = m.feature_names;
  ojson ids = ojson::array();
  for (const auto& r : m.row_ids)
    ids.push_back({{"doc_id", r.doc_id}, {"sent_index", r.sent_index}});
  j["row_ids"] = std::move(ids);
  ojson rows = ojson::array();
  for (std::size_t r = 0; r < m.n_rows; ++r) {
    if (m.is_sparse) {
      ojson row = ojson::array();
      for (const auto& [c, v] : m.sparse[r]) row.push_back({c, v});
      rows.push_back(std::move(row));
    } else {
      rows.push_back(m.dense[r]);
    }
  }
  j["rows"] = std::move(rows);
  return j;
}

struct FeaturizeOptions {
  std::string in = "labeled.jsonl";
  std::string out = "features.json";
  std::string rep = "tfidf";
  std::string flags;
  std::string word_vectors;
  std::string embeddings;
};

remine::features::FeatureMatrix build_full_matrix(
    const remine::features::FeatureSpec& spec,
    const remine::evalharness::LabeledCorpus& corpus,
    const std::string& word_vectors, const std::string& embeddings) {
  remine::features::FeatureMatrix text;
  switch (spec.text_rep) {
    case remine::features::TextRep::tfidf: {
      const auto model = remine::features::fit_tfidf(corpus.sentences);
      text = remine::features::transform_tfidf(model, corpus.sentences);
      break;
    }
    case remine::features::TextRep::wordvec_avg: {
      if (word_vectors.empty())
        throw remine::argument_error("wordvec_avg needs --word-vectors");
      const auto wv = remine::features::load_word_vectors(word_vectors);
      text = remine::features::embed_matrix(corpus.sentences, wv);
      break;
    }
    case remine::features::TextRep::precomputed: {
      if (embeddings.empty())
        throw remine::argument_error("precomputed needs --embeddings");
      std::vector<remine::features::SentenceRef> refs;
      for (const auto& s : corpus.sentences)
        refs.push_back({s.doc_id, s.sent_index});
      text = remine::features::load_precomputed(embeddings, refs);
      break;
    }
  }
  return remine::features::assemble(text, corpus.tags, spec);
}

void run_featurize(const FeaturizeOptions& opt) {
  const auto records = read_sentences_file(opt.in);
  auto corpus = labeled_corpus_from_records(records);
  if (corpus.sentences.empty())
    throw remine::validation_error(opt.in + ": no labeled sentences");
  const auto spec = parse_feature_spec(opt.rep, opt.flags);
  const auto matrix =
      build_full_matrix(spec, corpus, opt.word_vectors, opt.embeddings);
  write_text_file(opt.out, sparse_matrix_to_json(matrix).dump() + "\n");
  std::cerr << "wrote " << matrix.n_rows << "x" << matrix.n_cols
            << " feature matrix -> " << opt.out << "\n";
}

struct TrainOptions {
  std::string in = "labeled.jsonl";
  std::string out = "model.json";
  std::string model = "nb";
  std::string rep = "tfidf";
  std::string flags;
  std::string word_vectors;
  std::string embeddings;
  std::vector<std::string> params;
  std::uint64_t seed = 7;
};

void run_train(const TrainOptions& opt) {
  const auto records = read_sentences_file(opt.in);
  auto corpus = labeled_corpus_from_records(records);
  if (corpus.sentences.empty())
    throw remine::validation_error(opt.in + ": no labeled sentences");
  const auto spec = parse_feature_spec(opt.rep, opt.flags);

  remine::learn::ModelSpec model_spec;
  model_spec.kind = remine::learn::kind_from_name(opt.model);
  if (model_spec.kind == remine::learn::ModelKind::multinomial_nb &&
      spec.text_rep != remine::features::TextRep::tfidf)
    model_spec.kind = remine::learn::ModelKind::gaussian_nb;
  model_spec.seed = opt.seed;
  for (const auto& p : opt.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos)
      throw remine::argument_error("--param expects key=value, got '" + p + "'");
    model_spec.hyperparams[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
  }

  ojson out;
  out["_schema"] = "trained_model";
  out["_version"] = 1;
  out["feature"] = {{"text_rep", remine::evalharness::text_rep_name(spec.text_rep)},
                    {"interrogative", spec.append_interrogative},
                    {"keyword", spec.append_keyword}};
  if (spec.text_rep == remine::features::TextRep::tfidf) {
    const auto tfidf = remine::features::fit_tfidf(corpus.sentences);
    auto matrix = remine::features::transform_tfidf(tfidf, corpus.sentences);
    matrix = remine::features::assemble(matrix, corpus.tags, spec);
    const auto model = remine::learn::train(model_spec, matrix, corpus.labels);
    ojson vocab = ojson::array();
    for (const auto& [term, col] : tfidf.vocabulary)
      vocab.push_back({term, col});
    out["tfidf"] = {{"vocabulary", std::move(vocab)}, {"idf", tfidf.idf}};
    out["model"] = remine::learn::model_to_json(model);
  } else {
    const auto matrix =
        build_full_matrix(spec, corpus, opt.word_vectors, opt.embeddings);
    const auto model = remine::learn::train(model_spec, matrix, corpus.labels);
    out["model"] = remine::learn::model_to_json(model);
  }
  write_text_file(opt.out, out.dump() + "\n");
  std::cerr << "trained " << remine::learn::kind_name(model_spec.kind) << " on "
            << corpus.labels.size() << " rows -> " << opt.out << "\n";
}

// ---------------------------------------------------------------------------
// run config (shared by evaluate and pipeline)

struct RunConfig {
  std::vector<std::string> dumps;
  std::string from_date = "2020-03-01";
  std::string to_date = "2021-09-01";
  std::string keywords = data_path("covid_keywords.txt");
  std::string stopwords = data_path("stopwords.txt");
  std::string lemma_exceptions = data_path("lemma_exceptions.tsv");
  std::string seeds = data_path("requirement_seeds.txt");
  std::string synonyms = data_path("requirement_synonyms.txt");

  bool do_summarize = false;
  std::string summarize_method = "textrank";
  double summarize_ratio = 0.3;

  double label_fraction = 1.0;
  std::string votes;

  std::vector<remine::features::FeatureSpec> feature_specs;
  std::vector<std::pair<remine::learn::ModelKind,
                        std::vector<remine::learn::HyperParams>>> grids;
  std::string word_vectors;
  std::string embeddings;

  int cv_k = 10;
  bool holdout = false;
  double holdout_train_fraction = 0.8;

  bool smote_enabled = true;
  remine::learn::SmoteConfig smote;
  bool unsafe_presplit_smote = false;

  bool featurize = false;
  std::string corpus;  // labeled-sentences path for a standalone evaluate
  std::uint64_t seed = 7;
};

RunConfig load_run_config(const std::string& path) {
  require_input(path);
  ojson j;
  try {
    j = ojson::parse(remine::io::slurp_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw remine::validation_error(path + ": bad JSON: " + e.what());
  }
  RunConfig cfg;
  if (j.contains("dumps")) cfg.dumps = j["dumps"].get<std::vector<std::string>>();
  cfg.from_date = j.value("from", cfg.from_date);
  cfg.to_date = j.value("to", cfg.to_date);
  cfg.keywords = j.value("keywords", cfg.keywords);
  cfg.stopwords = j.value("stopwords", cfg.stopwords);
  cfg.lemma_exceptions = j.value("lemma_exceptions", cfg.lemma_exceptions);
  cfg.seeds = j.value("seeds", cfg.seeds);
  cfg.synonyms = j.value("synonyms", cfg.synonyms);

  if (j.contains("summarize") && !j["summarize"].is_null()) {
    cfg.do_summarize = true;
    cfg.summarize_method = j["summarize"].value("method", "textrank");
    cfg.summarize_ratio = j["summarize"].value("ratio", 0.3);
  }
  if (j.contains("label")) {
    cfg.label_fraction = j["label"].value("fraction", 1.0);
    cfg.votes = j["label"].value("votes", "");
  }

  if (j.contains("features")) {
    for (const auto& f : j["features"]) {
      std::string flags;
      if (f.contains("flags"))
        for (const auto& fl : f["flags"])
          flags += (flags.empty() ? "" : ",") + fl.get<std::string>();
      cfg.feature_specs.push_back(
          parse_feature_spec(f.value("rep", "tfidf"), flags));
    }
  } else {
    // default: the four-row tfidf ablation
    for (const bool interrogative : {false, true})
      for (const bool keyword : {false, true}) {
        remine::features::FeatureSpec spec;
        spec.append_interrogative = interrogative;
        spec.append_keyword = keyword;
        cfg.feature_specs.push_back(spec);
      }
  }
  cfg.word_vectors = j.value("word_vectors", "");
  cfg.embeddings = j.value("embeddings", "");

  std::vector<std::string> model_names = {"nb"};
  if (j.contains("models")) model_names = j["models"].get<std::vector<std::string>>();
  for (const auto& name : model_names) {
    const auto kind = remine::learn::kind_from_name(name);
    std::vector<remine::learn::HyperParams> grid;
    if (j.contains("grids") && j["grids"].contains(name)) {
      for (const auto& cell : j["grids"][name])
        grid.push_back(cell.get<remine::learn::HyperParams>());
    } else {
      grid = remine::learn::default_grid(kind);
    }
    cfg.grids.emplace_back(kind, std::move(grid));
  }

  if (j.contains("cv")) {
    cfg.cv_k = j["cv"].value("k", 10);
    if (j["cv"].contains("holdout_train_fraction")) {
      cfg.holdout = true;
      cfg.holdout_train_fraction = j["cv"]["holdout_train_fraction"].get<double>();
    }
  }
  if (j.contains("smote")) {
    cfg.smote_enabled = j["smote"].value("enabled", true);
    cfg.smote.k_neighbors = j["smote"].value("k_neighbors", 5);
    cfg.smote.target_ratio = j["smote"].value("target_ratio", 1.0);
  }
  cfg.unsafe_presplit_smote = j.value("unsafe_presplit_smote", false);
  cfg.featurize = j.value("featurize", false);
  cfg.corpus = j.value("corpus", "");
  cfg.seed = j.value("seed", 7);
  return cfg;
}

struct EvaluateOptions {
  std::string in;  // explicit --in wins over the config's "corpus" path
  std::string config;
  std::string out = "report.json";
  bool unsafe_presplit_smote = false;
};

void run_evaluate(const EvaluateOptions& opt_in) {
  EvaluateOptions opt = opt_in;
  RunConfig cfg = opt.config.empty() ? RunConfig{} : load_run_config(opt.config);
  if (opt.in.empty()) opt.in = cfg.corpus.empty() ? "labeled.jsonl" : cfg.corpus;
  if (opt.unsafe_presplit_smote) cfg.unsafe_presplit_smote = true;
  if (cfg.feature_specs.empty()) {
    for (const bool interrogative : {false, true})
      for (const bool keyword : {false, true}) {
        remine::features::FeatureSpec spec;
        spec.append_interrogative = interrogative;
        spec.append_keyword = keyword;
        cfg.feature_specs.push_back(spec);
      }
  }
  if (cfg.grids.empty())
    cfg.grids.emplace_back(remine::learn::ModelKind::multinomial_nb,
                           remine::learn::default_grid(
                               remine::learn::ModelKind::multinomial_nb));

  const auto records = read_sentences_file(opt.in);
  const auto corpus = labeled_corpus_from_records(records);
  if (corpus.sentences.empty())
    throw remine::validation_error(opt.in + ": no labeled sentences");

  remine::evalharness::CvOptions options;
  std::optional<remine::features::WordVectors> wv;
  std::optional<remine::features::FeatureMatrix> pre;
  if (!cfg.word_vectors.empty()) {
    wv = remine::features::load_word_vectors(cfg.word_vectors);
    options.word_vectors = &*wv;
  }
  if (!cfg.embeddings.empty()) {
    std::vector<remine::features::SentenceRef> refs;
    for (const auto& s : corpus.sentences) refs.push_back({s.doc_id, s.sent_index});
    pre = remine::features::load_precomputed(cfg.embeddings, refs);
    options.precomputed = &*pre;
  }
  if (cfg.smote_enabled && !cfg.unsafe_presplit_smote) {
    auto smote = cfg.smote;
    smote.seed = derive_seed(cfg.seed, "smote");
    options.smote = smote;
  }

  const auto plan =
      cfg.holdout
          ? remine::evalharness::stratified_holdout(
                corpus.labels, cfg.holdout_train_fraction, cfg.seed)
          : remine::evalharness::stratified_kfold(corpus.labels, cfg.cv_k,
                                                  cfg.seed);

  remine::evalharness::EvalReport report;
  report.seed = cfg.seed;
  report.corpus_hash = remine::io::hash_file_hex(opt.in);
  report.tool_version = kVersion;
  report.folds = cfg.holdout ? 1 : cfg.cv_k;
  report.smote = cfg.smote_enabled;

  for (const auto& spec : cfg.feature_specs) {
    if (cfg.unsafe_presplit_smote && cfg.smote_enabled) {
      // leaky comparison mode: one cell per (kind, first grid entry)
      for (const auto& [kind, grid] : cfg.grids) {
        remine::learn::ModelSpec model_spec;
        model_spec.kind = kind;
        model_spec.hyperparams = grid.front();
        model_spec.seed = cfg.seed;
        auto smote = cfg.smote;
        smote.seed = derive_seed(cfg.seed, "presplit_smote");
        remine::evalharness::CellResult cell;
        cell.feature_spec = spec;
        cell.kind = kind;
        cell.hyperparams = grid.front();
        cell.folds = remine::evalharness::cross_validate_presplit_smote(
            model_spec, spec, corpus, cfg.cv_k, cfg.seed, smote, options);
        cell.summary = remine::evalharness::summarize_folds(cell.folds);
        cell.best_for_kind = true;
        report.cells.push_back(std::move(cell));
      }
    } else {
      auto cells = remine::evalharness::grid_search(cfg.grids, spec, corpus,
                                                    plan, cfg.seed, options);
      for (auto& cell : cells) report.cells.push_back(std::move(cell));
    }
  }

  write_text_file(opt.out,
                  remine::evalharness::report_to_json(report).dump(2) + "\n");
  std::cerr << "evaluated " << report.cells.size() << " cells -> " << opt.out
            << "\n";
}

struct ReportOptions {
  std::string in = "report.json";
  std::string out = "report.txt";
};

void run_report(const ReportOptions& opt) {
  require_input(opt.in);
  const std::string content = remine::io::slurp_file(opt.in);
  ojson j;
  try {
    j = ojson::parse(content);
  } catch (const nlohmann::json::exception& e) {
    // a schema-versioned JSON-lines intermediate fails the whole-file parse;
    // diagnose it from its header line instead of reporting bad JSON
    const auto nl = content.find('\n');
    if (nl != std::string::npos) {
      try {
        const ojson first = ojson::parse(content.substr(0, nl));
        if (first.is_object() && first.contains("_schema"))
          throw remine::schema_error(
              opt.in + ": expected schema report/v1, found " +
              first["_schema"].get<std::string>() + " (JSON-lines file)");
      } catch (const nlohmann::json::exception&) {
      }
    }
    throw remine::validation_error(opt.in + ": bad JSON: " + e.what());
  }
  const auto report = remine::evalharness::report_from_json(j);
  const std::string text = remine::evalharness::render_report(report);
  write_text_file(opt.out, text);
  std::cout << text;
}

// ---------------------------------------------------------------------------
// pipeline: chain the stages with a manifest and a run-directory lock

class RunLock {
 public:
  explicit RunLock(const std::string& dir) : path_(dir + "/.lock") {
    fs::create_directories(dir);
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0)
      throw remine::validation_error(
          "run directory is locked (remove " + path_ +
          " if no other run is active)");
  }
  ~RunLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      ::unlink(path_.c_str());
    }
  }
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::string path_;
  int fd_ = -1;
};

struct PipelineOptions {
  std::string config;
  std::string out_dir = "run";
};

void run_pipeline(const PipelineOptions& opt) {
  const RunConfig cfg = load_run_config(opt.config);
  if (cfg.dumps.empty())
    throw remine::argument_error("pipeline config needs a non-empty \"dumps\" list");
  if (cfg.votes.empty())
    throw remine::argument_error("pipeline config needs label.votes (a vote CSV)");

  const RunLock lock(opt.out_dir);
  const std::string dir = opt.out_dir + "/";

  ojson manifest;
  manifest["_schema"] = "manifest";
  manifest["_version"] = 1;
  manifest["tool_version"] = kVersion;
  manifest["seed"] = cfg.seed;
  manifest["config_file"] = opt.config;
  manifest["config_hash"] = remine::io::hash_file_hex(opt.config);
  ojson inputs;
  for (const auto& d : cfg.dumps) inputs[d] = remine::io::hash_file_hex(d);
  inputs[cfg.votes] = remine::io::hash_file_hex(cfg.votes);
  manifest["inputs"] = std::move(inputs);

  ojson stages = ojson::array();
  const auto timed = [&](const char* name, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    stages.push_back({{"stage", name}, {"ms", ms}});
    std::cerr << "[" << name << "] " << ms << " ms\n";
  };

  timed("ingest", [&] {
    IngestOptions o;
    o.dumps = cfg.dumps;
    o.from_date = cfg.from_date;
    o.to_date = cfg.to_date;
    o.keywords = cfg.keywords;
    o.out = dir + "corpus.jsonl";
    run_ingest(o);
  });
  timed("sentences", [&] {
    SentencesOptions o;
    o.in = dir + "corpus.jsonl";
    o.out = dir + "sentences.jsonl";
    o.stopwords = cfg.stopwords;
    o.lemma_exceptions = cfg.lemma_exceptions;
    run_sentences(o);
  });
  std::string sentence_file = dir + "sentences.jsonl";
  if (cfg.do_summarize) {
    timed("summarize", [&] {
      SummarizeOptions o;
      o.in = sentence_file;
      o.out = dir + "summary.jsonl";
      o.method = cfg.summarize_method;
      o.ratio = cfg.summarize_ratio;
      run_summarize(o);
    });
    sentence_file = dir + "summary.jsonl";
  }
  timed("tag", [&] {
    TagOptions o;
    o.in = sentence_file;
    o.out = dir + "tagged.jsonl";
    o.seeds = cfg.seeds;
    o.synonyms = cfg.synonyms;
    o.lemma_exceptions = cfg.lemma_exceptions;
    run_tag(o);
  });
  timed("label-export", [&] {
    LabelExportOptions o;
    o.in = dir + "tagged.jsonl";
    o.out = dir + "tasks.csv";
    o.fraction = cfg.label_fraction;
    o.seed = cfg.seed;
    run_label_export(o);
  });
  timed("label-merge", [&] {
    LabelMergeOptions o;
    o.in = dir + "tagged.jsonl";
    o.tasks = dir + "tasks.csv";
    o.votes = cfg.votes;
    o.out = dir + "labeled.jsonl";
    run_label_merge(o);
  });
  timed("stats", [&] {
    StatsOptions o;
    o.in = dir + "labeled.jsonl";
    o.out = dir + "stats.json";
    run_stats(o);
  });
  if (cfg.featurize) {
    timed("featurize", [&] {
      FeaturizeOptions o;
      o.in = dir + "labeled.jsonl";
      o.out = dir + "features.json";
      o.word_vectors = cfg.word_vectors;
      o.embeddings = cfg.embeddings;
      run_featurize(o);
    });
  }
  timed("evaluate", [&] {
    EvaluateOptions o;
    o.in = dir + "labeled.jsonl";
    o.config = opt.config;
    o.out = dir + "report.json";
    run_evaluate(o);
  });
  timed("report", [&] {
    ReportOptions o;
    o.in = dir + "report.json";
    o.out = dir + "report.txt";
    run_report(o);
  });

  manifest["stages"] = std::move(stages);
  ojson artifacts;
  for (const char* name :
       {"corpus.jsonl", "sentences.jsonl", "summary.jsonl", "tagged.jsonl",
        "tasks.csv", "labeled.jsonl", "stats.json", "features.json",
        "report.json", "report.txt"}) {
    const std::string path = dir + name;
    if (fs::exists(path)) artifacts[name] = remine::io::hash_file_hex(path);
  }
  manifest["artifacts"] = std::move(artifacts);
  write_text_file(dir + "manifest.json", manifest.dump(2) + "\n");
  std::cerr << "pipeline complete; manifest -> " << dir << "manifest.json\n";
}

struct GenFixtureOptions {
  std::string out_dir = "fixture";
  std::size_t sentences = 2000;
  std::uint64_t seed = 7;
};

void run_gen_fixture(const GenFixtureOptions& opt) {
  remine::fixture::FixtureConfig cfg;
  cfg.n_sentences = opt.sentences;
  cfg.seed = opt.seed;
  const auto fx = remine::fixture::generate(cfg);
  remine::fixture::write_fixture(fx, opt.out_dir);
  std::cerr << "fixture: " << fx.requirement_count << " requirement + "
            << fx.non_requirement_count << " non-requirement sentences -> "
            << opt.out_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"remine: mine requirement sentences from forum dumps"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  IngestOptions ingest_opt;
  auto* ingest = app.add_subcommand("ingest", "parse and filter forum dumps");
  ingest->add_option("--dump", ingest_opt.dumps, "dump file(s), JSON lines")
      ->required();
  ingest->add_option("--from", ingest_opt.from_date, "window start (YYYY-MM-DD)");
  ingest->add_option("--to", ingest_opt.to_date, "window end, exclusive");
  ingest->add_option("--keywords", ingest_opt.keywords, "relevance keyword file");
  ingest->add_option("--out", ingest_opt.out, "output corpus file");

  SentencesOptions sentences_opt;
  auto* sentences =
      app.add_subcommand("sentences", "split and normalize into sentences");
  sentences->add_option("--in", sentences_opt.in, "corpus file");
  sentences->add_option("--out", sentences_opt.out, "sentences file");
  sentences->add_option("--stopwords", sentences_opt.stopwords, "stopword file");
  sentences->add_option("--lemma-exceptions", sentences_opt.lemma_exceptions,
                        "lemma exception TSV");
  sentences->add_flag("--correct-typos", sentences_opt.correct_typos,
                      "enable corpus-vocabulary typo correction");

  SummarizeOptions summarize_opt;
  auto* summarize =
      app.add_subcommand("summarize", "keep the top sentences per document");
  summarize->add_option("--in", summarize_opt.in, "sentences file");
  summarize->add_option("--out", summarize_opt.out, "summary file");
  summarize->add_option("--method", summarize_opt.method,
                        "sumbasic | textrank | lexrank");
  summarize->add_option("--ratio", summarize_opt.ratio, "fraction kept per doc");
  summarize->add_option("--top-k", summarize_opt.top_k, "fixed sentence count");

  RougeOptions rouge_opt;
  auto* rouge = app.add_subcommand("rouge", "score a candidate summary");
  rouge->add_option("--cand", rouge_opt.cand, "candidate text file")->required();
  rouge->add_option("--ref", rouge_opt.ref, "reference text file")->required();
  rouge->add_option("--n", rouge_opt.n, "n-gram order (default: 1..4)");

  TagOptions tag_opt;
  auto* tag = app.add_subcommand("tag", "tag keyword and interrogative signals");
  tag->add_option("--in", tag_opt.in, "sentences file");
  tag->add_option("--out", tag_opt.out, "tagged sentences file");
  tag->add_option("--seeds", tag_opt.seeds, "requirement seed keywords");
  tag->add_option("--synonyms", tag_opt.synonyms, "synonym expansion file");
  tag->add_option("--lemma-exceptions", tag_opt.lemma_exceptions,
                  "lemma exception TSV");

  LabelExportOptions export_opt;
  auto* label_export =
      app.add_subcommand("label-export", "sample sentences into a task CSV");
  label_export->add_option("--in", export_opt.in, "tagged sentences file");
  label_export->add_option("--out", export_opt.out, "task CSV");
  label_export->add_option("--fraction", export_opt.fraction, "sample fraction");
  label_export->add_option("--seed", export_opt.seed, "sampling seed");

  LabelMergeOptions merge_opt;
  auto* label_merge =
      app.add_subcommand("label-merge", "merge worker votes into labels");
  label_merge->add_option("--in", merge_opt.in, "tagged sentences file");
  label_merge->add_option("--tasks", merge_opt.tasks, "task CSV");
  label_merge->add_option("--votes", merge_opt.votes, "vote CSV");
  label_merge->add_option("--out", merge_opt.out, "labeled sentences file");

  StatsOptions stats_opt;
  auto* stats = app.add_subcommand("stats", "labeled-corpus statistics");
  stats->add_option("--in", stats_opt.in, "labeled sentences file");
  stats->add_option("--out", stats_opt.out, "stats JSON");

  FeaturizeOptions feat_opt;
  auto* featurize =
      app.add_subcommand("featurize", "write the feature matrix for inspection");
  featurize->add_option("--in", feat_opt.in, "labeled sentences file");
  featurize->add_option("--out", feat_opt.out, "feature matrix JSON");
  featurize->add_option("--rep", feat_opt.rep, "tfidf | wordvec_avg | precomputed");
  featurize->add_option("--flags", feat_opt.flags, "interrogative,keyword");
  featurize->add_option("--word-vectors", feat_opt.word_vectors,
                        "word vector text file");
  featurize->add_option("--embeddings", feat_opt.embeddings,
                        "precomputed sentence embedding CSV");

  TrainOptions train_opt;
  auto* train = app.add_subcommand("train", "train one model on all labeled rows");
  train->add_option("--in", train_opt.in, "labeled sentences file");
  train->add_option("--out", train_opt.out, "model JSON");
  train->add_option("--model", train_opt.model,
                    "nb | gaussian_nb | logreg | svm | random_forest | knn");
  train->add_option("--features", train_opt.rep,
                    "tfidf | wordvec_avg | precomputed");
  train->add_option("--flags", train_opt.flags, "interrogative,keyword");
  train->add_option("--word-vectors", train_opt.word_vectors, "vector file");
  train->add_option("--embeddings", train_opt.embeddings, "embedding CSV");
  train->add_option("--param", train_opt.params, "hyperparameter key=value");
  train->add_option("--seed", train_opt.seed, "model seed");

  EvaluateOptions eval_opt;
  auto* evaluate =
      app.add_subcommand("evaluate", "cross-validated benchmark -> report.json");
  evaluate->add_option("--in", eval_opt.in, "labeled sentences file");
  evaluate->add_option("--config", eval_opt.config, "run config JSON");
  evaluate->add_option("--out", eval_opt.out, "report JSON");
  evaluate->add_flag("--unsafe-presplit-smote", eval_opt.unsafe_presplit_smote,
                     "oversample before the fold split (leaky comparison mode)");

  ReportOptions report_opt;
  auto* report = app.add_subcommand("report", "render report.json as text tables");
  report->add_option("--in", report_opt.in, "report JSON");
  report->add_option("--out", report_opt.out, "report text file");

  PipelineOptions pipe_opt;
  auto* pipeline =
      app.add_subcommand("pipeline", "run every stage from dumps to report");
  pipeline->add_option("--config", pipe_opt.config, "run config JSON")->required();
  pipeline->add_option("--out-dir", pipe_opt.out_dir, "run directory");

  GenFixtureOptions fix_opt;
  auto* gen_fixture =
      app.add_subcommand("gen-fixture", "generate the synthetic test corpus");
  gen_fixture->add_option("--out-dir", fix_opt.out_dir, "output directory");
  gen_fixture->add_option("--sentences", fix_opt.sentences, "sentence count");
  gen_fixture->add_option("--seed", fix_opt.seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) run_ingest(ingest_opt);
    else if (*sentences) run_sentences(sentences_opt);
    else if (*summarize) run_summarize(summarize_opt);
    else if (*rouge) run_rouge(rouge_opt);
    else if (*tag) run_tag(tag_opt);
    else if (*label_export) run_label_export(export_opt);
    else if (*label_merge) run_label_merge(merge_opt);
    else if (*stats) run_stats(stats_opt);
    else if (*featurize) run_featurize(feat_opt);
    else if (*train) run_train(train_opt);
    else if (*evaluate) run_evaluate(eval_opt);
    else if (*report) run_report(report_opt);
    else if (*pipeline) run_pipeline(pipe_opt);
    else if (*gen_fixture) run_gen_fixture(fix_opt);
  } catch (const remine::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const remine::schema_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const remine::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
