#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "remine/features.hpp"
#include "remine/io.hpp"
#include "remine/learn.hpp"
#include "remine/signals.hpp"
#include "remine/textnorm.hpp"

namespace remine::evalharness {

// assignments[i] is the fold whose TEST set holds row i; -1 marks rows that
// are train-only (holdout mode).
struct FoldPlan {
  int k = 10;
  std::vector<int> assignments;
  std::uint64_t seed = 0;
};

FoldPlan stratified_kfold(const std::vector<int>& labels, int k,
                          std::uint64_t seed);
FoldPlan stratified_holdout(const std::vector<int>& labels,
                            double train_fraction, std::uint64_t seed);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Metrics {
  std::array<ClassMetrics, 2> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  // confusion[t][p] = rows with true class t predicted as p
  std::array<std::array<long, 2>, 2> confusion{{{0, 0}, {0, 0}}};
  bool zero_division = false;
};

Metrics compute_metrics(const std::vector<int>& y_true,
                        const std::vector<int>& y_pred);

// Labeled, tagged sentences ready for featurization.
struct LabeledCorpus {
  std::vector<textnorm::ProcessedSentence> sentences;
  std::vector<signals::SignalTags> tags;
  std::vector<int> labels;
};

struct CvOptions {
  std::optional<learn::SmoteConfig> smote;  // applied inside train folds only
  const features::WordVectors* word_vectors = nullptr;
  const features::FeatureMatrix* precomputed = nullptr;  // full-corpus rows
  // diagnostic hooks: the tf-idf model fitted per fold, and the training
  // label composition per fold after oversampling
  std::function<void(int fold, const features::TfidfModel&)> on_fold_tfidf;
  std::function<void(int fold, std::size_t train_class0, std::size_t train_class1)>
      on_fold_train;
};

// Per fold: fit features on training rows only, oversample training rows
// only, train, score the held-out rows.
std::vector<Metrics> cross_validate(const learn::ModelSpec& model_spec,
                                    const features::FeatureSpec& feature_spec,
                                    const LabeledCorpus& corpus,
                                    const FoldPlan& plan,
                                    const CvOptions& options = {});

// The leaky protocol kept for comparison runs (--unsafe-presplit-smote):
// features are fitted and SMOTE is applied on the whole corpus before the
// fold split, so synthetic neighbors of test rows leak into training.
std::vector<Metrics> cross_validate_presplit_smote(
    const learn::ModelSpec& model_spec,
    const features::FeatureSpec& feature_spec, const LabeledCorpus& corpus,
    int k, std::uint64_t seed, const learn::SmoteConfig& smote,
    const CvOptions& options = {});

struct MetricsSummary {
  Metrics mean;
  double sd_macro_f1 = 0.0;
  double sd_macro_precision = 0.0;
  double sd_macro_recall = 0.0;
};

MetricsSummary summarize_folds(const std::vector<Metrics>& folds);

struct CellResult {
  features::FeatureSpec feature_spec;
  learn::ModelKind kind = learn::ModelKind::multinomial_nb;
  learn::HyperParams hyperparams;
  std::vector<Metrics> folds;
  MetricsSummary summary;
  bool best_for_kind = false;  // best hyperparams among this (spec, kind) group
};

struct EvalReport {
  std::uint64_t seed = 0;
  std::string corpus_hash;
  std::string tool_version;
  int folds = 0;
  bool smote = false;
  std::vector<CellResult> cells;
};

// Exhaustive grid evaluation; best per (feature_spec, kind) by mean macro-F,
// ties by mean macro precision, then first-in-grid.
std::vector<CellResult> grid_search(
    const std::vector<std::pair<learn::ModelKind, std::vector<learn::HyperParams>>>&
        grids,
    const features::FeatureSpec& feature_spec, const LabeledCorpus& corpus,
    const FoldPlan& plan, std::uint64_t seed, const CvOptions& options = {});

io::ojson report_to_json(const EvalReport& report);
EvalReport report_from_json(const io::ojson& j);

// Aligned-text tables: one per text representation over flag-free specs, one
// feature-ablation table per (kind, rep) that ran all four flag combinations.
// Best F per table is starred.
std::string render_report(const EvalReport& report);

std::string feature_spec_name(const features::FeatureSpec& spec);
std::string text_rep_name(features::TextRep rep);
features::TextRep text_rep_from_name(const std::string& name);

}  // namespace remine::evalharness
