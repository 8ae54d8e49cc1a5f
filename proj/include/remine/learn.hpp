#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "remine/features.hpp"
#include "remine/io.hpp"

namespace remine::learn {

enum class ModelKind {
  multinomial_nb,
  gaussian_nb,
  logreg,
  linear_svm,
  random_forest,
  knn
};

std::string kind_name(ModelKind kind);
ModelKind kind_from_name(const std::string& name);

// Free-form hyperparameters; unknown keys are ignored, missing keys fall back
// to per-model defaults documented in train().
using HyperParams = std::map<std::string, double>;

struct ModelSpec {
  ModelKind kind = ModelKind::multinomial_nb;
  HyperParams hyperparams;
  std::uint64_t seed = 0;
};

struct SmoteConfig {
  int k_neighbors = 5;
  double target_ratio = 1.0;  // 1.0 = fully balanced
  std::uint64_t seed = 0;
  std::optional<double> u_override;  // test hook: pins the interpolation u
};

struct SmoteParent {
  std::size_t base = 0;
  std::size_t neighbor = 0;
  double u = 0.0;
};

struct SmoteResult {
  std::vector<std::vector<double>> rows;
  std::vector<SmoteParent> parents;  // aligned with rows
};

// Synthetic minority rows: x + u * (x_nn - x) with x a seeded-random minority
// row, x_nn one of its k nearest minority neighbors (Euclidean), u ~ U(0,1).
SmoteResult smote(const std::vector<std::vector<double>>& minority,
                  const SmoteConfig& cfg, std::size_t n_synthetic);

// Same sampling over rows of a feature matrix, with the neighbor search done
// sparsely; draws and output match smote() on the densified rows.
SmoteResult smote_rows(const features::FeatureMatrix& X,
                       const std::vector<std::size_t>& minority_rows,
                       const SmoteConfig& cfg, std::size_t n_synthetic);

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<std::int64_t, 2> counts{0, 0};
};

struct Tree {
  std::vector<TreeNode> nodes;
};

struct TrainedModel {
  ModelKind kind = ModelKind::multinomial_nb;
  HyperParams hyperparams;
  std::uint64_t seed = 0;
  std::size_t n_features = 0;
  int majority_class = 0;  // training majority; class 0 on a tie

  // naive bayes
  std::array<double, 2> log_prior{0.0, 0.0};
  std::vector<std::array<double, 2>> feature_log_prob;  // multinomial
  std::vector<std::array<double, 2>> mean;              // gaussian
  std::vector<std::array<double, 2>> variance;

  // linear models
  std::vector<double> weights;
  double bias = 0.0;

  // forest
  std::vector<Tree> trees;

  // knn
  features::FeatureMatrix knn_train;
  std::vector<int> knn_labels;
  bool knn_cosine = false;
};

TrainedModel train(const ModelSpec& spec, const features::FeatureMatrix& X,
                   const std::vector<int>& y);

// P(class 1) for the Bayes/logistic models, signed margin for the SVM, vote
// fraction for forest and knn.
std::vector<double> predict_scores(const TrainedModel& model,
                                   const features::FeatureMatrix& X);
std::vector<int> predict(const TrainedModel& model,
                         const features::FeatureMatrix& X);

io::ojson model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const io::ojson& j);

// Grids from the benchmarking defaults; grid_search walks these when the
// run config does not override them.
std::vector<HyperParams> default_grid(ModelKind kind);

}  // namespace remine::learn
