#include "remine/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "remine/errors.hpp"
#include "remine/rng.hpp"

namespace remine::evalharness {

FoldPlan stratified_kfold(const std::vector<int>& labels, int k,
                          std::uint64_t seed) {
  if (k < 2) throw argument_error("stratified_kfold: k must be >= 2");
  if (labels.size() < static_cast<std::size_t>(k))
    throw argument_error("stratified_kfold: fewer rows than folds");
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), -1);

  SplitRng rng = SplitRng(seed).split("stratified_kfold");
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) rows.push_back(i);
    if (rows.empty())
      throw argument_error("stratified_kfold: class " + std::to_string(cls) +
                           " has no rows");
    // a class smaller than k still round-robins within one of exact
    // proportionality; some folds just see no test row of that class
    SplitRng class_rng = rng.split(static_cast<std::uint64_t>(cls));
    class_rng.shuffle(rows);
    for (std::size_t i = 0; i < rows.size(); ++i)
      plan.assignments[rows[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  }
  return plan;
}

FoldPlan stratified_holdout(const std::vector<int>& labels,
                            double train_fraction, std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw argument_error("stratified_holdout: train_fraction out of (0, 1)");
  FoldPlan plan;
  plan.k = 1;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), -1);

  SplitRng rng = SplitRng(seed).split("stratified_holdout");
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) rows.push_back(i);
    SplitRng class_rng = rng.split(static_cast<std::uint64_t>(cls));
    class_rng.shuffle(rows);
    const std::size_t test_count = rows.size() -
        static_cast<std::size_t>(std::floor(train_fraction *
                                            static_cast<double>(rows.size())));
    for (std::size_t i = 0; i < test_count && i < rows.size(); ++i)
      plan.assignments[rows[i]] = 0;
  }
  return plan;
}

Metrics compute_metrics(const std::vector<int>& y_true,
                        const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size())
    throw argument_error("compute_metrics: length mismatch");
  if (y_true.empty()) throw argument_error("compute_metrics: empty input");

  Metrics m;
  for (std::size_t i = 0; i < y_true.size(); ++i)
    ++m.confusion[y_true[i]][y_pred[i]];

  for (int cls = 0; cls < 2; ++cls) {
    const double tp = static_cast<double>(m.confusion[cls][cls]);
    const double fp = static_cast<double>(m.confusion[1 - cls][cls]);
    const double fn = static_cast<double>(m.confusion[cls][1 - cls]);
    ClassMetrics& cm = m.per_class[cls];
    if (tp + fp > 0.0) cm.precision = tp / (tp + fp);
    else m.zero_division = true;
    if (tp + fn > 0.0) cm.recall = tp / (tp + fn);
    else m.zero_division = true;
    const double pr = cm.precision + cm.recall;
    cm.f1 = pr > 0.0 ? 2.0 * cm.precision * cm.recall / pr : 0.0;
  }
  m.macro_precision = (m.per_class[0].precision + m.per_class[1].precision) / 2.0;
  m.macro_recall = (m.per_class[0].recall + m.per_class[1].recall) / 2.0;
  m.macro_f1 = (m.per_class[0].f1 + m.per_class[1].f1) / 2.0;
  return m;
}

namespace {

std::vector<textnorm::ProcessedSentence> take_sentences(
    const LabeledCorpus& corpus, const std::vector<std::size_t>& rows) {
  std::vector<textnorm::ProcessedSentence> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(corpus.sentences[r]);
  return out;
}

features::FeatureMatrix slice_matrix(const features::FeatureMatrix& m,
                                     const std::vector<std::size_t>& rows) {
  features::FeatureMatrix out;
  out.n_rows = rows.size();
  out.n_cols = m.n_cols;
  out.is_sparse = m.is_sparse;
  out.feature_names = m.feature_names;
  for (std::size_t r : rows) {
    out.row_ids.push_back(m.row_ids[r]);
    if (m.is_sparse) out.sparse.push_back(m.sparse[r]);
    else out.dense.push_back(m.dense[r]);
  }
  return out;
}

// Text-representation matrices for one fold. tf-idf vocabulary is fitted on
// the training rows only; embedding reps carry no fitted state.
struct FoldFeatures {
  features::FeatureMatrix train;
  features::FeatureMatrix test;
};

FoldFeatures featurize_fold(const features::FeatureSpec& spec,
                            const LabeledCorpus& corpus,
                            const std::vector<std::size_t>& train_rows,
                            const std::vector<std::size_t>& test_rows,
                            const CvOptions& options, int fold) {
  FoldFeatures out;
  switch (spec.text_rep) {
    case features::TextRep::tfidf: {
      const auto train_sentences = take_sentences(corpus, train_rows);
      const auto model = features::fit_tfidf(train_sentences);
      if (options.on_fold_tfidf) options.on_fold_tfidf(fold, model);
      out.train = features::transform_tfidf(model, train_sentences);
      out.test =
          features::transform_tfidf(model, take_sentences(corpus, test_rows));
      break;
    }
    case features::TextRep::wordvec_avg: {
      if (!options.word_vectors)
        throw argument_error("cross_validate: word_vectors not provided");
      const auto full =
          features::embed_matrix(corpus.sentences, *options.word_vectors);
      out.train = slice_matrix(full, train_rows);
      out.test = slice_matrix(full, test_rows);
      break;
    }
    case features::TextRep::precomputed: {
      if (!options.precomputed)
        throw argument_error("cross_validate: precomputed matrix not provided");
      if (options.precomputed->n_rows != corpus.sentences.size())
        throw argument_error("cross_validate: precomputed rows misaligned");
      out.train = slice_matrix(*options.precomputed, train_rows);
      out.test = slice_matrix(*options.precomputed, test_rows);
      break;
    }
  }

  std::vector<signals::SignalTags> train_tags, test_tags;
  for (std::size_t r : train_rows) train_tags.push_back(corpus.tags[r]);
  for (std::size_t r : test_rows) test_tags.push_back(corpus.tags[r]);
  out.train = features::assemble(out.train, train_tags, spec);
  out.test = features::assemble(out.test, test_tags, spec);
  return out;
}

void append_dense_row(features::FeatureMatrix& m, const std::vector<double>& row) {
  if (m.is_sparse) {
    std::vector<std::pair<std::uint32_t, double>> sparse_row;
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c] != 0.0) sparse_row.emplace_back(static_cast<std::uint32_t>(c), row[c]);
    m.sparse.push_back(std::move(sparse_row));
  } else {
    m.dense.push_back(row);
  }
  m.row_ids.push_back({"synthetic", static_cast<int>(m.n_rows)});
  ++m.n_rows;
}

// Balances the training matrix in place by synthesizing minority rows.
void apply_smote(features::FeatureMatrix& train, std::vector<int>& labels,
                 const learn::SmoteConfig& cfg) {
  const long ones = std::count(labels.begin(), labels.end(), 1);
  const long zeros = static_cast<long>(labels.size()) - ones;
  if (ones == zeros) return;
  const int minority = ones < zeros ? 1 : 0;
  const long n_minority = std::min(ones, zeros);
  const long n_majority = std::max(ones, zeros);
  const long target = static_cast<long>(
      std::llround(cfg.target_ratio * static_cast<double>(n_majority)));
  const long n_synthetic = target - n_minority;
  if (n_synthetic <= 0) return;

  std::vector<std::size_t> minority_rows;
  for (std::size_t r = 0; r < train.n_rows; ++r)
    if (labels[r] == minority) minority_rows.push_back(r);

  const auto result = learn::smote_rows(train, minority_rows, cfg,
                                        static_cast<std::size_t>(n_synthetic));
  for (const auto& row : result.rows) {
    append_dense_row(train, row);
    labels.push_back(minority);
  }
}

}  // namespace

std::vector<Metrics> cross_validate(const learn::ModelSpec& model_spec,
                                    const features::FeatureSpec& feature_spec,
                                    const LabeledCorpus& corpus,
                                    const FoldPlan& plan,
                                    const CvOptions& options) {
  if (plan.assignments.size() != corpus.labels.size())
    throw argument_error("cross_validate: plan does not match corpus");

  std::vector<Metrics> fold_metrics;
  for (int fold = 0; fold < plan.k; ++fold) {
    try {
      std::vector<std::size_t> train_rows, test_rows;
      for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
        if (plan.assignments[i] == fold) test_rows.push_back(i);
        else train_rows.push_back(i);
      }
      if (test_rows.empty())
        throw argument_error("empty test fold");

      auto fold_features = featurize_fold(feature_spec, corpus, train_rows,
                                          test_rows, options, fold);
      std::vector<int> train_labels, test_labels;
      for (std::size_t r : train_rows) train_labels.push_back(corpus.labels[r]);
      for (std::size_t r : test_rows) test_labels.push_back(corpus.labels[r]);

      if (options.smote)
        apply_smote(fold_features.train, train_labels, *options.smote);
      if (options.on_fold_train) {
        const std::size_t ones =
            static_cast<std::size_t>(std::count(train_labels.begin(),
                                                train_labels.end(), 1));
        options.on_fold_train(fold, train_labels.size() - ones, ones);
      }

      const auto model = learn::train(model_spec, fold_features.train, train_labels);
      const auto predictions = learn::predict(model, fold_features.test);
      fold_metrics.push_back(compute_metrics(test_labels, predictions));
    } catch (const error& e) {
      throw validation_error("fold " + std::to_string(fold) + ": " + e.what());
    }
  }
  return fold_metrics;
}

std::vector<Metrics> cross_validate_presplit_smote(
    const learn::ModelSpec& model_spec,
    const features::FeatureSpec& feature_spec, const LabeledCorpus& corpus,
    int k, std::uint64_t seed, const learn::SmoteConfig& smote,
    const CvOptions& options) {
  std::vector<std::size_t> all_rows(corpus.labels.size());
  std::iota(all_rows.begin(), all_rows.end(), 0);
  auto full = featurize_fold(feature_spec, corpus, all_rows, {}, options, -1);
  std::vector<int> labels = corpus.labels;
  apply_smote(full.train, labels, smote);

  const FoldPlan plan = stratified_kfold(labels, k, seed);
  std::vector<Metrics> fold_metrics;
  for (int fold = 0; fold < k; ++fold) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (plan.assignments[i] == fold) test_rows.push_back(i);
      else train_rows.push_back(i);
    }
    features::FeatureMatrix train = slice_matrix(full.train, train_rows);
    features::FeatureMatrix test = slice_matrix(full.train, test_rows);
    std::vector<int> train_labels, test_labels;
    for (std::size_t r : train_rows) train_labels.push_back(labels[r]);
    for (std::size_t r : test_rows) test_labels.push_back(labels[r]);
    const auto model = learn::train(model_spec, train, train_labels);
    fold_metrics.push_back(
        compute_metrics(test_labels, learn::predict(model, test)));
  }
  return fold_metrics;
}

MetricsSummary summarize_folds(const std::vector<Metrics>& folds) {
  MetricsSummary s;
  if (folds.empty()) return s;
  const double n = static_cast<double>(folds.size());
  for (const auto& f : folds) {
    for (int c = 0; c < 2; ++c) {
      s.mean.per_class[c].precision += f.per_class[c].precision / n;
      s.mean.per_class[c].recall += f.per_class[c].recall / n;
      s.mean.per_class[c].f1 += f.per_class[c].f1 / n;
      for (int p = 0; p < 2; ++p) s.mean.confusion[c][p] += f.confusion[c][p];
    }
    s.mean.macro_precision += f.macro_precision / n;
    s.mean.macro_recall += f.macro_recall / n;
    s.mean.macro_f1 += f.macro_f1 / n;
    s.mean.zero_division = s.mean.zero_division || f.zero_division;
  }
  if (folds.size() > 1) {
    double vf = 0.0, vp = 0.0, vr = 0.0;
    for (const auto& f : folds) {
      vf += (f.macro_f1 - s.mean.macro_f1) * (f.macro_f1 - s.mean.macro_f1);
      vp += (f.macro_precision - s.mean.macro_precision) *
            (f.macro_precision - s.mean.macro_precision);
      vr += (f.macro_recall - s.mean.macro_recall) *
            (f.macro_recall - s.mean.macro_recall);
    }
    s.sd_macro_f1 = std::sqrt(vf / (n - 1.0));
    s.sd_macro_precision = std::sqrt(vp / (n - 1.0));
    s.sd_macro_recall = std::sqrt(vr / (n - 1.0));
  }
  return s;
}

std::vector<CellResult> grid_search(
    const std::vector<std::pair<learn::ModelKind, std::vector<learn::HyperParams>>>&
        grids,
    const features::FeatureSpec& feature_spec, const LabeledCorpus& corpus,
    const FoldPlan& plan, std::uint64_t seed, const CvOptions& options) {
  if (grids.empty()) throw argument_error("grid_search: empty grids");

  std::vector<CellResult> cells;
  for (const auto& [kind, grid] : grids) {
    if (grid.empty())
      throw argument_error("grid_search: empty grid for " + learn::kind_name(kind));
    const std::size_t first_cell = cells.size();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      learn::ModelSpec spec;
      spec.kind = kind;
      spec.hyperparams = grid[g];
      spec.seed = SplitRng(seed)
                      .split(learn::kind_name(kind))
                      .split(static_cast<std::uint64_t>(g))
                      .next_u64();
      CellResult cell;
      cell.feature_spec = feature_spec;
      cell.kind = kind;
      cell.hyperparams = grid[g];
      cell.folds = cross_validate(spec, feature_spec, corpus, plan, options);
      cell.summary = summarize_folds(cell.folds);
      cells.push_back(std::move(cell));
    }
    // best by mean macro-F, ties by mean precision, then first-in-grid
    std::size_t best = first_cell;
    for (std::size_t i = first_cell + 1; i < cells.size(); ++i) {
      const auto& a = cells[i].summary.mean;
      const auto& b = cells[best].summary.mean;
      if (a.macro_f1 > b.macro_f1 ||
          (a.macro_f1 == b.macro_f1 && a.macro_precision > b.macro_precision))
        best = i;
    }
    cells[best].best_for_kind = true;
  }
  return cells;
}

namespace {

io::ojson metrics_to_json(const Metrics& m) {
  io::ojson j;
  j["macro_precision"] = m.macro_precision;
  j["macro_recall"] = m.macro_recall;
  j["macro_f1"] = m.macro_f1;
  io::ojson pc = io::ojson::array();
  for (int c = 0; c < 2; ++c)
    pc.push_back({{"precision", m.per_class[c].precision},
                  {"recall", m.per_class[c].recall},
                  {"f1", m.per_class[c].f1}});
  j["per_class"] = std::move(pc);
  j["confusion"] = {{m.confusion[0][0], m.confusion[0][1]},
                    {m.confusion[1][0], m.confusion[1][1]}};
  j["zero_division"] = m.zero_division;
  return j;
}

Metrics metrics_from_json(const io::ojson& j) {
  Metrics m;
  m.macro_precision = j.at("macro_precision").get<double>();
  m.macro_recall = j.at("macro_recall").get<double>();
  m.macro_f1 = j.at("macro_f1").get<double>();
  for (int c = 0; c < 2; ++c) {
    const auto& pc = j.at("per_class")[c];
    m.per_class[c].precision = pc.at("precision").get<double>();
    m.per_class[c].recall = pc.at("recall").get<double>();
    m.per_class[c].f1 = pc.at("f1").get<double>();
    for (int p = 0; p < 2; ++p)
      m.confusion[c][p] = j.at("confusion")[c][p].get<long>();
  }
  m.zero_division = j.at("zero_division").get<bool>();
  return m;
}

std::string format_cell(double v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string text_rep_name(features::TextRep rep) {
  switch (rep) {
    case features::TextRep::tfidf: return "tfidf";
    case features::TextRep::wordvec_avg: return "wordvec_avg";
    case features::TextRep::precomputed: return "precomputed";
  }
  return "unknown";
}

features::TextRep text_rep_from_name(const std::string& name) {
  if (name == "tfidf") return features::TextRep::tfidf;
  if (name == "wordvec_avg" || name == "wordvec") return features::TextRep::wordvec_avg;
  if (name == "precomputed") return features::TextRep::precomputed;
  throw argument_error("unknown text representation: " + name);
}

std::string feature_spec_name(const features::FeatureSpec& spec) {
  std::string name = text_rep_name(spec.text_rep);
  if (spec.append_interrogative) name += "+interrogative";
  if (spec.append_keyword) name += "+keyword";
  return name;
}

io::ojson report_to_json(const EvalReport& report) {
  io::ojson j;
  j["_schema"] = "report";
  j["_version"] = 1;
  j["seed"] = report.seed;
  j["corpus_hash"] = report.corpus_hash;
  j["tool_version"] = report.tool_version;
  j["folds"] = report.folds;
  j["smote"] = report.smote;

  io::ojson cells = io::ojson::array();
  for (const auto& cell : report.cells) {
    io::ojson c;
    c["feature"] = {{"text_rep", text_rep_name(cell.feature_spec.text_rep)},
                    {"interrogative", cell.feature_spec.append_interrogative},
                    {"keyword", cell.feature_spec.append_keyword}};
    c["model"] = learn::kind_name(cell.kind);
    c["hyperparams"] = cell.hyperparams;
    c["best_for_model"] = cell.best_for_kind;
    c["mean"] = metrics_to_json(cell.summary.mean);
    c["sd"] = {{"macro_precision", cell.summary.sd_macro_precision},
               {"macro_recall", cell.summary.sd_macro_recall},
               {"macro_f1", cell.summary.sd_macro_f1}};
    io::ojson folds = io::ojson::array();
    for (const auto& f : cell.folds) folds.push_back(metrics_to_json(f));
    c["folds"] = std::move(folds);
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j;
}

EvalReport report_from_json(const io::ojson& j) {
  if (j.value("_schema", "") != "report" || j.value("_version", -1) != 1)
    throw schema_error("report file: expected schema report/v1");
  EvalReport report;
  report.seed = j.at("seed").get<std::uint64_t>();
  report.corpus_hash = j.at("corpus_hash").get<std::string>();
  report.tool_version = j.at("tool_version").get<std::string>();
  report.folds = j.at("folds").get<int>();
  report.smote = j.at("smote").get<bool>();
  for (const auto& c : j.at("cells")) {
    CellResult cell;
    cell.feature_spec.text_rep =
        text_rep_from_name(c.at("feature").at("text_rep").get<std::string>());
    cell.feature_spec.append_interrogative =
        c.at("feature").at("interrogative").get<bool>();
    cell.feature_spec.append_keyword = c.at("feature").at("keyword").get<bool>();
    cell.kind = learn::kind_from_name(c.at("model").get<std::string>());
    cell.hyperparams = c.at("hyperparams").get<learn::HyperParams>();
    cell.best_for_kind = c.at("best_for_model").get<bool>();
    cell.summary.mean = metrics_from_json(c.at("mean"));
    cell.summary.sd_macro_precision = c.at("sd").at("macro_precision").get<double>();
    cell.summary.sd_macro_recall = c.at("sd").at("macro_recall").get<double>();
    cell.summary.sd_macro_f1 = c.at("sd").at("macro_f1").get<double>();
    for (const auto& f : c.at("folds"))
      cell.folds.push_back(metrics_from_json(f));
    report.cells.push_back(std::move(cell));
  }
  return report;
}

std::string render_report(const EvalReport& report) {
  std::ostringstream out;

  auto emit_table = [&](const std::string& title,
                        const std::vector<std::pair<std::string, Metrics>>& rows) {
    if (rows.empty()) return;
    std::size_t label_width = 24;
    for (const auto& [label, m] : rows)
      label_width = std::max(label_width, label.size() + 2);
    double best_f = -1.0;
    for (const auto& [label, m] : rows) best_f = std::max(best_f, m.macro_f1);

    out << "=== " << title << " ===\n";
    out << std::string(label_width, ' ') << "Precision  Recall  F-Score\n";
    for (const auto& [label, m] : rows) {
      out << label << std::string(label_width - label.size(), ' ');
      out << "     " << format_cell(m.macro_precision);
      out << "    " << format_cell(m.macro_recall);
      out << "     " << format_cell(m.macro_f1);
      if (m.macro_f1 == best_f) out << "*";
      out << "\n";
    }
    out << "\n";
  };

  // one table per text representation over flag-free specs
  for (const auto rep : {features::TextRep::tfidf, features::TextRep::wordvec_avg,
                         features::TextRep::precomputed}) {
    std::vector<std::pair<std::string, Metrics>> rows;
    for (const auto& cell : report.cells) {
      if (cell.feature_spec.text_rep != rep) continue;
      if (cell.feature_spec.append_interrogative ||
          cell.feature_spec.append_keyword)
        continue;
      if (!cell.best_for_kind) continue;
      rows.emplace_back(learn::kind_name(cell.kind), cell.summary.mean);
    }
    emit_table("classifiers on " + text_rep_name(rep), rows);
  }

  // ablation table per (model, rep) that ran all four flag combinations
  for (const auto rep : {features::TextRep::tfidf, features::TextRep::wordvec_avg,
                         features::TextRep::precomputed}) {
    for (int kind_idx = 0; kind_idx < 6; ++kind_idx) {
      const auto kind = static_cast<learn::ModelKind>(kind_idx);
      const CellResult* combo[4] = {nullptr, nullptr, nullptr, nullptr};
      for (const auto& cell : report.cells) {
        if (cell.feature_spec.text_rep != rep || cell.kind != kind) continue;
        if (!cell.best_for_kind) continue;
        const int slot = (cell.feature_spec.append_interrogative ? 1 : 0) +
                         (cell.feature_spec.append_keyword ? 2 : 0);
        combo[slot] = &cell;
      }
      if (!combo[0] || !combo[1] || !combo[2] || !combo[3]) continue;
      const std::string base = learn::kind_name(kind) + " + " + text_rep_name(rep);
      std::vector<std::pair<std::string, Metrics>> rows = {
          {base, combo[0]->summary.mean},
          {base + " + interrogative", combo[1]->summary.mean},
          {base + " + keyword", combo[2]->summary.mean},
          {base + " + interrogative + keyword", combo[3]->summary.mean}};
      emit_table("feature ablation: " + base, rows);
    }
  }
  return out.str();
}

}  // namespace remine::evalharness
