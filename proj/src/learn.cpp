#include "remine/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "remine/errors.hpp"
#include "remine/rng.hpp"

namespace remine::learn {

namespace {

double get_param(const HyperParams& hp, const std::string& key, double fallback) {
  auto it = hp.find(key);
  return it == hp.end() ? fallback : it->second;
}

double sq_euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double row_dot_weights(const features::FeatureMatrix& X, std::size_t row,
                       const std::vector<double>& w) {
  double s = 0.0;
  if (X.is_sparse) {
    for (const auto& [c, v] : X.sparse[row]) s += v * w[c];
  } else {
    const auto& r = X.dense[row];
    for (std::size_t c = 0; c < r.size(); ++c) s += r[c] * w[c];
  }
  return s;
}

void check_training_inputs(const features::FeatureMatrix& X,
                           const std::vector<int>& y) {
  if (X.n_rows != y.size())
    throw argument_error("train: labels do not align with rows");
  if (X.n_rows < 2) throw argument_error("train: need at least 2 rows");
  bool has0 = false, has1 = false;
  for (int label : y) {
    if (label == 0) has0 = true;
    else if (label == 1) has1 = true;
    else throw argument_error("train: labels must be 0 or 1");
  }
  if (!has0 || !has1)
    throw argument_error("train: both classes must be present");
}

int majority_of(const std::vector<int>& y) {
  long ones = std::count(y.begin(), y.end(), 1);
  long zeros = static_cast<long>(y.size()) - ones;
  return ones > zeros ? 1 : 0;
}

double softplus(double x) {
  // log(1 + e^x) without overflow
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// ---------------------------------------------------------------------------
// multinomial naive bayes

TrainedModel train_multinomial_nb(const ModelSpec& spec,
                                  const features::FeatureMatrix& X,
                                  const std::vector<int>& y) {
  const double alpha = get_param(spec.hyperparams, "alpha", 1.0);
  if (alpha <= 0.0) throw argument_error("multinomial_nb: alpha must be > 0");

  TrainedModel m;
  m.n_features = X.n_cols;
  std::array<double, 2> class_total{0.0, 0.0};
  std::array<long, 2> class_rows{0, 0};
  m.feature_log_prob.assign(X.n_cols, {0.0, 0.0});

  for (std::size_t r = 0; r < X.n_rows; ++r) {
    const int c = y[r];
    ++class_rows[c];
    if (X.is_sparse) {
      for (const auto& [col, v] : X.sparse[r]) {
        if (v < 0.0)
          throw argument_error(
              "multinomial_nb: negative feature values; use gaussian_nb for "
              "dense embedding features");
        m.feature_log_prob[col][c] += v;
        class_total[c] += v;
      }
    } else {
      for (std::size_t col = 0; col < X.n_cols; ++col) {
        const double v = X.dense[r][col];
        if (v < 0.0)
          throw argument_error(
              "multinomial_nb: negative feature values; use gaussian_nb for "
              "dense embedding features");
        m.feature_log_prob[col][c] += v;
        class_total[c] += v;
      }
    }
  }

  const double v_count = static_cast<double>(X.n_cols);
  for (int c = 0; c < 2; ++c) {
    m.log_prior[c] = std::log(static_cast<double>(class_rows[c]) /
                              static_cast<double>(X.n_rows));
    const double denom = std::log(class_total[c] + alpha * v_count);
    for (std::size_t col = 0; col < X.n_cols; ++col)
      m.feature_log_prob[col][c] =
          std::log(m.feature_log_prob[col][c] + alpha) - denom;
  }
  return m;
}

double score_multinomial_nb(const TrainedModel& m,
                            const features::FeatureMatrix& X, std::size_t row) {
  std::array<double, 2> logj = m.log_prior;
  auto add = [&](std::size_t col, double v) {
    logj[0] += v * m.feature_log_prob[col][0];
    logj[1] += v * m.feature_log_prob[col][1];
  };
  if (X.is_sparse) {
    for (const auto& [col, v] : X.sparse[row]) add(col, v);
  } else {
    for (std::size_t col = 0; col < X.n_cols; ++col)
      if (X.dense[row][col] != 0.0) add(col, X.dense[row][col]);
  }
  const double hi = std::max(logj[0], logj[1]);
  const double z0 = std::exp(logj[0] - hi), z1 = std::exp(logj[1] - hi);
  return z1 / (z0 + z1);
}

// ---------------------------------------------------------------------------
// gaussian naive bayes

TrainedModel train_gaussian_nb(const ModelSpec& spec,
                               const features::FeatureMatrix& X,
                               const std::vector<int>& y) {
  constexpr double kVarFloor = 1e-9;
  (void)spec;
  TrainedModel m;
  m.n_features = X.n_cols;
  m.mean.assign(X.n_cols, {0.0, 0.0});
  m.variance.assign(X.n_cols, {0.0, 0.0});
  std::array<long, 2> class_rows{0, 0};
  for (int label : y) ++class_rows[label];

  for (std::size_t r = 0; r < X.n_rows; ++r) {
    const int c = y[r];
    for (std::size_t col = 0; col < X.n_cols; ++col)
      m.mean[col][c] += X.at(r, col);
  }
  for (int c = 0; c < 2; ++c)
    for (std::size_t col = 0; col < X.n_cols; ++col)
      m.mean[col][c] /= static_cast<double>(class_rows[c]);

  for (std::size_t r = 0; r < X.n_rows; ++r) {
    const int c = y[r];
    for (std::size_t col = 0; col < X.n_cols; ++col) {
      const double d = X.at(r, col) - m.mean[col][c];
      m.variance[col][c] += d * d;
    }
  }
  for (int c = 0; c < 2; ++c) {
    m.log_prior[c] = std::log(static_cast<double>(class_rows[c]) /
                              static_cast<double>(X.n_rows));
    for (std::size_t col = 0; col < X.n_cols; ++col)
      m.variance[col][c] = std::max(
          m.variance[col][c] / static_cast<double>(class_rows[c]), kVarFloor);
  }
  return m;
}

double score_gaussian_nb(const TrainedModel& m, const features::FeatureMatrix& X,
                         std::size_t row) {
  constexpr double kLog2Pi = 1.8378770664093453;
  std::array<double, 2> logj = m.log_prior;
  for (std::size_t col = 0; col < m.n_features; ++col) {
    const double x = X.at(row, col);
    for (int c = 0; c < 2; ++c) {
      const double d = x - m.mean[col][c];
      logj[c] -= 0.5 * (kLog2Pi + std::log(m.variance[col][c]) +
                        d * d / m.variance[col][c]);
    }
  }
  const double hi = std::max(logj[0], logj[1]);
  const double z0 = std::exp(logj[0] - hi), z1 = std::exp(logj[1] - hi);
  return z1 / (z0 + z1);
}

// ---------------------------------------------------------------------------
// logistic regression: full-batch gradient descent with backtracking

TrainedModel train_logreg(const ModelSpec& spec, const features::FeatureMatrix& X,
                          const std::vector<int>& y) {
  const double lambda = get_param(spec.hyperparams, "l2_lambda", 1e-3);
  const int max_iter =
      static_cast<int>(get_param(spec.hyperparams, "max_iter", 500));
  const double tol = get_param(spec.hyperparams, "tol", 1e-6);

  TrainedModel m;
  m.n_features = X.n_cols;
  m.weights.assign(X.n_cols, 0.0);
  m.bias = 0.0;
  const double inv_n = 1.0 / static_cast<double>(X.n_rows);

  auto objective = [&](const std::vector<double>& w, double b) {
    double loss = 0.0;
    for (std::size_t r = 0; r < X.n_rows; ++r) {
      const double margin = row_dot_weights(X, r, w) + b;
      const double ysign = y[r] == 1 ? 1.0 : -1.0;
      loss += softplus(-ysign * margin);
    }
    double reg = 0.0;
    for (double wi : w) reg += wi * wi;
    return loss * inv_n + 0.5 * lambda * reg;
  };

  std::vector<double> grad_w(X.n_cols, 0.0);
  std::vector<double> trial_w(X.n_cols, 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t r = 0; r < X.n_rows; ++r) {
      const double margin = row_dot_weights(X, r, m.weights) + m.bias;
      const double ysign = y[r] == 1 ? 1.0 : -1.0;
      const double coeff = -ysign / (1.0 + std::exp(ysign * margin));
      if (X.is_sparse) {
        for (const auto& [c, v] : X.sparse[r]) grad_w[c] += coeff * v;
      } else {
        for (std::size_t c = 0; c < X.n_cols; ++c)
          grad_w[c] += coeff * X.dense[r][c];
      }
      grad_b += coeff;
    }
    double gnorm_sq = 0.0;
    for (std::size_t c = 0; c < X.n_cols; ++c) {
      grad_w[c] = grad_w[c] * inv_n + lambda * m.weights[c];
      gnorm_sq += grad_w[c] * grad_w[c];
    }
    grad_b *= inv_n;
    gnorm_sq += grad_b * grad_b;
    if (std::sqrt(gnorm_sq) < tol) break;

    const double j0 = objective(m.weights, m.bias);
    double step = 1.0;
    for (;;) {
      for (std::size_t c = 0; c < X.n_cols; ++c)
        trial_w[c] = m.weights[c] - step * grad_w[c];
      const double trial_b = m.bias - step * grad_b;
      if (objective(trial_w, trial_b) <= j0 - 1e-4 * step * gnorm_sq ||
          step < 1e-12) {
        m.weights.swap(trial_w);
        m.bias = trial_b;
        break;
      }
      step *= 0.5;
    }
  }
  return m;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// ---------------------------------------------------------------------------
// linear svm via the Pegasos schedule

TrainedModel train_linear_svm(const ModelSpec& spec,
                              const features::FeatureMatrix& X,
                              const std::vector<int>& y) {
  const double lambda = get_param(spec.hyperparams, "l2_lambda", 1e-3);
  const int epochs = static_cast<int>(get_param(spec.hyperparams, "epochs", 100));

  TrainedModel m;
  m.n_features = X.n_cols;
  m.weights.assign(X.n_cols, 0.0);
  m.bias = 0.0;

  SplitRng rng = SplitRng(spec.seed).split("linear_svm");
  std::vector<std::size_t> order(X.n_rows);
  std::iota(order.begin(), order.end(), 0);

  double t = 1.0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t r : order) {
      const double eta = 1.0 / (lambda * t);
      const double ysign = y[r] == 1 ? 1.0 : -1.0;
      const double margin = row_dot_weights(X, r, m.weights) + m.bias;
      const double shrink = 1.0 - eta * lambda;  // = 1 - 1/t
      for (auto& w : m.weights) w *= shrink;
      if (ysign * margin < 1.0) {
        if (X.is_sparse) {
          for (const auto& [c, v] : X.sparse[r]) m.weights[c] += eta * ysign * v;
        } else {
          for (std::size_t c = 0; c < X.n_cols; ++c)
            m.weights[c] += eta * ysign * X.dense[r][c];
        }
        m.bias += eta * ysign;
      }
      t += 1.0;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// random forest: bagged CART with Gini splits and sqrt(d) feature sampling

struct ForestParams {
  int max_depth = 16;  // 0 = unlimited
  int min_leaf = 1;
  bool bootstrap = true;
};

int grow_tree(Tree& tree, const features::FeatureMatrix& X,
              const std::vector<int>& y, std::vector<std::size_t>& rows,
              std::size_t begin, std::size_t end, int depth,
              const ForestParams& params, std::size_t feature_sample,
              SplitRng& rng) {
  TreeNode node;
  for (std::size_t i = begin; i < end; ++i) ++node.counts[y[rows[i]]];

  const bool pure = node.counts[0] == 0 || node.counts[1] == 0;
  const bool too_deep = params.max_depth > 0 && depth >= params.max_depth;
  const std::size_t size = end - begin;
  if (pure || too_deep || size < 2 * static_cast<std::size_t>(params.min_leaf)) {
    tree.nodes.push_back(node);
    return static_cast<int>(tree.nodes.size() - 1);
  }

  // candidate features, sampled without replacement
  std::vector<std::uint32_t> all_features(X.n_cols);
  std::iota(all_features.begin(), all_features.end(), 0u);
  std::vector<std::uint32_t> candidates;
  for (std::size_t i = 0; i < feature_sample && i < all_features.size(); ++i) {
    const std::size_t j = i + rng.next_below(all_features.size() - i);
    std::swap(all_features[i], all_features[j]);
    candidates.push_back(all_features[i]);
  }

  const double total = static_cast<double>(size);
  auto gini = [](double c0, double c1) {
    const double n = c0 + c1;
    if (n == 0.0) return 0.0;
    const double p0 = c0 / n, p1 = c1 / n;
    return 1.0 - p0 * p0 - p1 * p1;
  };

  int best_feature = -1;
  double best_threshold = 0.0;
  double best_score = gini(static_cast<double>(node.counts[0]),
                           static_cast<double>(node.counts[1]));
  std::vector<std::pair<double, int>> values;
  values.reserve(size);

  for (const std::uint32_t f : candidates) {
    values.clear();
    for (std::size_t i = begin; i < end; ++i)
      values.emplace_back(X.at(rows[i], f), y[rows[i]]);
    std::sort(values.begin(), values.end());
    double left0 = 0.0, left1 = 0.0;
    const double all0 = static_cast<double>(node.counts[0]);
    const double all1 = static_cast<double>(node.counts[1]);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      if (values[i].second == 0) ++left0;
      else ++left1;
      if (values[i].first == values[i + 1].first) continue;
      const double nl = left0 + left1;
      const double nr = total - nl;
      if (nl < params.min_leaf || nr < params.min_leaf) continue;
      const double score = (nl / total) * gini(left0, left1) +
                           (nr / total) * gini(all0 - left0, all1 - left1);
      if (score < best_score - 1e-12) {
        best_score = score;
        best_feature = static_cast<int>(f);
        best_threshold = (values[i].first + values[i + 1].first) / 2.0;
      }
    }
  }

  if (best_feature < 0) {
    tree.nodes.push_back(node);
    return static_cast<int>(tree.nodes.size() - 1);
  }

  const auto mid = std::stable_partition(
      rows.begin() + static_cast<std::ptrdiff_t>(begin),
      rows.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t r) {
        return X.at(r, static_cast<std::size_t>(best_feature)) <= best_threshold;
      });
  const std::size_t split =
      static_cast<std::size_t>(mid - rows.begin());

  node.feature = best_feature;
  node.threshold = best_threshold;
  tree.nodes.push_back(node);
  const int self = static_cast<int>(tree.nodes.size() - 1);
  const int left = grow_tree(tree, X, y, rows, begin, split, depth + 1, params,
                             feature_sample, rng);
  const int right = grow_tree(tree, X, y, rows, split, end, depth + 1, params,
                              feature_sample, rng);
  tree.nodes[self].left = left;
  tree.nodes[self].right = right;
  return self;
}

TrainedModel train_random_forest(const ModelSpec& spec,
                                 const features::FeatureMatrix& X,
                                 const std::vector<int>& y) {
  ForestParams params;
  const int n_trees = static_cast<int>(get_param(spec.hyperparams, "n_trees", 100));
  params.max_depth = static_cast<int>(get_param(spec.hyperparams, "max_depth", 16));
  params.min_leaf = static_cast<int>(get_param(spec.hyperparams, "min_leaf", 1));
  params.bootstrap = get_param(spec.hyperparams, "bootstrap", 1.0) != 0.0;
  if (n_trees < 1) throw argument_error("random_forest: n_trees must be >= 1");

  TrainedModel m;
  m.n_features = X.n_cols;
  const std::size_t feature_sample = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::sqrt(
             static_cast<double>(X.n_cols)))));

  const SplitRng base = SplitRng(spec.seed).split("random_forest");
  for (int tree_idx = 0; tree_idx < n_trees; ++tree_idx) {
    SplitRng rng = base.split(static_cast<std::uint64_t>(tree_idx));
    std::vector<std::size_t> rows;
    rows.reserve(X.n_rows);
    if (params.bootstrap) {
      for (std::size_t i = 0; i < X.n_rows; ++i)
        rows.push_back(rng.next_below(X.n_rows));
    } else {
      rows.resize(X.n_rows);
      std::iota(rows.begin(), rows.end(), 0);
    }
    Tree tree;
    grow_tree(tree, X, y, rows, 0, rows.size(), 0, params, feature_sample, rng);
    m.trees.push_back(std::move(tree));
  }
  return m;
}

int tree_vote(const Tree& tree, const features::FeatureMatrix& X,
              std::size_t row, int majority_class) {
  int at = 0;  // grow_tree pushes parents before children, root is node 0
  for (;;) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(at)];
    if (node.feature < 0) {
      if (node.counts[0] == node.counts[1]) return majority_class;
      return node.counts[1] > node.counts[0] ? 1 : 0;
    }
    const double v = X.at(row, static_cast<std::size_t>(node.feature));
    at = v <= node.threshold ? node.left : node.right;
  }
}

// ---------------------------------------------------------------------------
// k nearest neighbors

TrainedModel train_knn(const ModelSpec& spec, const features::FeatureMatrix& X,
                       const std::vector<int>& y) {
  const int k = static_cast<int>(get_param(spec.hyperparams, "k", 5));
  if (k < 1) throw argument_error("knn: k must be >= 1");
  TrainedModel m;
  m.n_features = X.n_cols;
  m.knn_train = X;
  m.knn_labels = y;
  const double metric = get_param(spec.hyperparams, "metric", 0.0);
  // 0 = auto (cosine for sparse, euclidean for dense), 1 = cosine, 2 = euclidean
  m.knn_cosine = metric == 1.0 || (metric == 0.0 && X.is_sparse);
  return m;
}

double knn_distance(const TrainedModel& m, const std::vector<double>& probe,
                    double probe_norm, std::size_t train_row) {
  const auto& T = m.knn_train;
  if (m.knn_cosine) {
    double dot = 0.0, norm = 0.0;
    if (T.is_sparse) {
      for (const auto& [c, v] : T.sparse[train_row]) {
        dot += v * probe[c];
        norm += v * v;
      }
    } else {
      for (std::size_t c = 0; c < T.n_cols; ++c) {
        const double v = T.dense[train_row][c];
        dot += v * probe[c];
        norm += v * v;
      }
    }
    if (norm == 0.0 || probe_norm == 0.0) return 1.0;
    return 1.0 - dot / (std::sqrt(norm) * probe_norm);
  }
  double s = 0.0;
  if (T.is_sparse) {
    std::vector<double> trow(T.n_cols, 0.0);
    for (const auto& [c, v] : T.sparse[train_row]) trow[c] = v;
    s = sq_euclidean(trow, probe);
  } else {
    s = sq_euclidean(T.dense[train_row], probe);
  }
  return s;
}

double score_knn(const TrainedModel& m, const features::FeatureMatrix& X,
                 std::size_t row) {
  const int k = static_cast<int>(get_param(m.hyperparams, "k", 5));
  const std::vector<double> probe = X.row_dense(row);
  double probe_norm = 0.0;
  for (double v : probe) probe_norm += v * v;
  probe_norm = std::sqrt(probe_norm);

  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(m.knn_train.n_rows);
  for (std::size_t t = 0; t < m.knn_train.n_rows; ++t)
    dist.emplace_back(knn_distance(m, probe, probe_norm, t), t);
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k),
                                               dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk),
                    dist.end());
  std::size_t ones = 0;
  for (std::size_t i = 0; i < kk; ++i)
    if (m.knn_labels[dist[i].second] == 1) ++ones;
  return static_cast<double>(ones) / static_cast<double>(kk);
}

}  // namespace

std::string kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::multinomial_nb: return "multinomial_nb";
    case ModelKind::gaussian_nb: return "gaussian_nb";
    case ModelKind::logreg: return "logreg";
    case ModelKind::linear_svm: return "linear_svm";
    case ModelKind::random_forest: return "random_forest";
    case ModelKind::knn: return "knn";
  }
  return "unknown";
}

ModelKind kind_from_name(const std::string& name) {
  if (name == "multinomial_nb" || name == "nb") return ModelKind::multinomial_nb;
  if (name == "gaussian_nb") return ModelKind::gaussian_nb;
  if (name == "logreg") return ModelKind::logreg;
  if (name == "linear_svm" || name == "svm") return ModelKind::linear_svm;
  if (name == "random_forest") return ModelKind::random_forest;
  if (name == "knn") return ModelKind::knn;
  throw argument_error("unknown model kind: " + name);
}

namespace {

void check_smote_args(std::size_t minority_count, const SmoteConfig& cfg) {
  if (cfg.k_neighbors < 1)
    throw argument_error("smote: k_neighbors must be >= 1");
  if (cfg.target_ratio <= 0.0 || cfg.target_ratio > 1.0)
    throw argument_error("smote: target_ratio must be in (0, 1]");
  if (minority_count <= static_cast<std::size_t>(cfg.k_neighbors))
    throw argument_error(
        "smote: need more minority rows (" + std::to_string(minority_count) +
        ") than k_neighbors (" + std::to_string(cfg.k_neighbors) + ")");
}

// Sampling core shared by the dense and sparse entry points: the rng draws
// depend only on (seed, m, k, n_synthetic), so both produce identical
// synthetic rows for the same data.
template <typename RowAt>
SmoteResult smote_sample(RowAt&& row_at, std::size_t m,
                         const std::vector<std::vector<std::size_t>>& neighbors,
                         const SmoteConfig& cfg, std::size_t n_synthetic) {
  const std::size_t k = static_cast<std::size_t>(cfg.k_neighbors);
  SmoteResult result;
  result.rows.reserve(n_synthetic);
  result.parents.reserve(n_synthetic);
  SplitRng rng = SplitRng(cfg.seed).split("smote");
  for (std::size_t s = 0; s < n_synthetic; ++s) {
    const std::size_t base = rng.next_below(m);
    const std::size_t nn = neighbors[base][rng.next_below(k)];
    const double u = cfg.u_override ? *cfg.u_override : rng.next_unit();
    const std::vector<double> x = row_at(base);
    const std::vector<double> x_nn = row_at(nn);
    std::vector<double> row(x.size());
    for (std::size_t c = 0; c < row.size(); ++c)
      row[c] = x[c] + u * (x_nn[c] - x[c]);
    result.rows.push_back(std::move(row));
    result.parents.push_back({base, nn, u});
  }
  return result;
}

std::vector<std::size_t> k_smallest(std::vector<std::pair<double, std::size_t>>& dist,
                                    std::size_t k) {
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                    dist.end());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t t = 0; t < k; ++t) out.push_back(dist[t].second);
  return out;
}

}  // namespace

SmoteResult smote(const std::vector<std::vector<double>>& minority,
                  const SmoteConfig& cfg, std::size_t n_synthetic) {
  check_smote_args(minority.size(), cfg);
  const std::size_t m = minority.size();
  const std::size_t k = static_cast<std::size_t>(cfg.k_neighbors);

  std::vector<std::vector<std::size_t>> neighbors(m);
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t i = 0; i < m; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      dist.emplace_back(sq_euclidean(minority[i], minority[j]), j);
    }
    neighbors[i] = k_smallest(dist, k);
  }
  return smote_sample([&](std::size_t i) { return minority[i]; },
                      m, neighbors, cfg, n_synthetic);
}

SmoteResult smote_rows(const features::FeatureMatrix& X,
                       const std::vector<std::size_t>& minority_rows,
                       const SmoteConfig& cfg, std::size_t n_synthetic) {
  check_smote_args(minority_rows.size(), cfg);
  const std::size_t m = minority_rows.size();
  const std::size_t k = static_cast<std::size_t>(cfg.k_neighbors);

  std::vector<std::vector<std::size_t>> neighbors(m);
  std::vector<std::pair<double, std::size_t>> dist;
  if (X.is_sparse) {
    // ||a-b||^2 = ||a||^2 + ||b||^2 - 2 a.b over the sparse entries
    std::vector<double> norm_sq(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (const auto& [c, v] : X.sparse[minority_rows[i]]) norm_sq[i] += v * v;
    for (std::size_t i = 0; i < m; ++i) {
      dist.clear();
      const auto& a = X.sparse[minority_rows[i]];
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const auto& b = X.sparse[minority_rows[j]];
        double dot = 0.0;
        std::size_t x = 0, y = 0;
        while (x < a.size() && y < b.size()) {
          if (a[x].first == b[y].first) dot += a[x++].second * b[y++].second;
          else if (a[x].first < b[y].first) ++x;
          else ++y;
        }
        dist.emplace_back(norm_sq[i] + norm_sq[j] - 2.0 * dot, j);
      }
      neighbors[i] = k_smallest(dist, k);
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      dist.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        dist.emplace_back(sq_euclidean(X.dense[minority_rows[i]],
                                       X.dense[minority_rows[j]]),
                          j);
      }
      neighbors[i] = k_smallest(dist, k);
    }
  }
  return smote_sample(
      [&](std::size_t i) { return X.row_dense(minority_rows[i]); },
      m, neighbors, cfg, n_synthetic);
}

TrainedModel train(const ModelSpec& spec, const features::FeatureMatrix& X,
                   const std::vector<int>& y) {
  check_training_inputs(X, y);
  TrainedModel m;
  switch (spec.kind) {
    case ModelKind::multinomial_nb: m = train_multinomial_nb(spec, X, y); break;
    case ModelKind::gaussian_nb: m = train_gaussian_nb(spec, X, y); break;
    case ModelKind::logreg: m = train_logreg(spec, X, y); break;
    case ModelKind::linear_svm: m = train_linear_svm(spec, X, y); break;
    case ModelKind::random_forest: m = train_random_forest(spec, X, y); break;
    case ModelKind::knn: m = train_knn(spec, X, y); break;
  }
  m.kind = spec.kind;
  m.hyperparams = spec.hyperparams;
  m.seed = spec.seed;
  m.majority_class = majority_of(y);
  return m;
}

std::vector<double> predict_scores(const TrainedModel& model,
                                   const features::FeatureMatrix& X) {
  if (X.n_rows > 0 && X.n_cols != model.n_features)
    throw argument_error("predict: feature count " + std::to_string(X.n_cols) +
                         " does not match training " +
                         std::to_string(model.n_features));
  std::vector<double> scores;
  scores.reserve(X.n_rows);
  for (std::size_t r = 0; r < X.n_rows; ++r) {
    switch (model.kind) {
      case ModelKind::multinomial_nb:
        scores.push_back(score_multinomial_nb(model, X, r));
        break;
      case ModelKind::gaussian_nb:
        scores.push_back(score_gaussian_nb(model, X, r));
        break;
      case ModelKind::logreg:
        scores.push_back(sigmoid(row_dot_weights(X, r, model.weights) + model.bias));
        break;
      case ModelKind::linear_svm:
        scores.push_back(row_dot_weights(X, r, model.weights) + model.bias);
        break;
      case ModelKind::random_forest: {
        std::size_t ones = 0;
        for (const auto& tree : model.trees)
          if (tree_vote(tree, X, r, model.majority_class) == 1) ++ones;
        scores.push_back(static_cast<double>(ones) /
                         static_cast<double>(model.trees.size()));
        break;
      }
      case ModelKind::knn:
        scores.push_back(score_knn(model, X, r));
        break;
    }
  }
  return scores;
}

std::vector<int> predict(const TrainedModel& model,
                         const features::FeatureMatrix& X) {
  const auto scores = predict_scores(model, X);
  const double threshold = model.kind == ModelKind::linear_svm ? 0.0 : 0.5;
  std::vector<int> labels;
  labels.reserve(scores.size());
  for (const double s : scores) {
    if (s > threshold) labels.push_back(1);
    else if (s < threshold) labels.push_back(0);
    else labels.push_back(model.majority_class);
  }
  return labels;
}

io::ojson model_to_json(const TrainedModel& m) {
  io::ojson j;
  j["_schema"] = "model";
  j["_version"] = 1;
  j["kind"] = kind_name(m.kind);
  j["hyperparams"] = m.hyperparams;
  j["seed"] = m.seed;
  j["n_features"] = m.n_features;
  j["majority_class"] = m.majority_class;

  switch (m.kind) {
    case ModelKind::multinomial_nb: {
      j["log_prior"] = m.log_prior;
      io::ojson rows = io::ojson::array();
      for (const auto& p : m.feature_log_prob) rows.push_back({p[0], p[1]});
      j["feature_log_prob"] = std::move(rows);
      break;
    }
    case ModelKind::gaussian_nb: {
      j["log_prior"] = m.log_prior;
      io::ojson means = io::ojson::array(), vars = io::ojson::array();
      for (const auto& p : m.mean) means.push_back({p[0], p[1]});
      for (const auto& p : m.variance) vars.push_back({p[0], p[1]});
      j["mean"] = std::move(means);
      j["variance"] = std::move(vars);
      break;
    }
    case ModelKind::logreg:
    case ModelKind::linear_svm:
      j["weights"] = m.weights;
      j["bias"] = m.bias;
      break;
    case ModelKind::random_forest: {
      io::ojson trees = io::ojson::array();
      for (const auto& tree : m.trees) {
        io::ojson nodes = io::ojson::array();
        for (const auto& n : tree.nodes)
          nodes.push_back({n.feature, n.threshold, n.left, n.right,
                           n.counts[0], n.counts[1]});
        trees.push_back(std::move(nodes));
      }
      j["trees"] = std::move(trees);
      break;
    }
    case ModelKind::knn: {
      j["metric"] = m.knn_cosine ? "cosine" : "euclidean";
      j["labels"] = m.knn_labels;
      io::ojson rows = io::ojson::array();
      for (std::size_t r = 0; r < m.knn_train.n_rows; ++r) {
        if (m.knn_train.is_sparse) {
          io::ojson row = io::ojson::array();
          for (const auto& [c, v] : m.knn_train.sparse[r]) row.push_back({c, v});
          rows.push_back(std::move(row));
        } else {
          rows.push_back(m.knn_train.dense[r]);
        }
      }
      j["train_sparse"] = m.knn_train.is_sparse;
      j["train_rows"] = std::move(rows);
      break;
    }
  }
  return j;
}

TrainedModel model_from_json(const io::ojson& j) {
  if (j.value("_schema", "") != "model" || j.value("_version", -1) != 1)
    throw schema_error("model file: expected schema model/v1");
  TrainedModel m;
  m.kind = kind_from_name(j.at("kind").get<std::string>());
  m.hyperparams = j.at("hyperparams").get<HyperParams>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.n_features = j.at("n_features").get<std::size_t>();
  m.majority_class = j.at("majority_class").get<int>();

  switch (m.kind) {
    case ModelKind::multinomial_nb: {
      m.log_prior = j.at("log_prior").get<std::array<double, 2>>();
      for (const auto& row : j.at("feature_log_prob"))
        m.feature_log_prob.push_back({row[0].get<double>(), row[1].get<double>()});
      break;
    }
    case ModelKind::gaussian_nb: {
      m.log_prior = j.at("log_prior").get<std::array<double, 2>>();
      for (const auto& row : j.at("mean"))
        m.mean.push_back({row[0].get<double>(), row[1].get<double>()});
      for (const auto& row : j.at("variance"))
        m.variance.push_back({row[0].get<double>(), row[1].get<double>()});
      break;
    }
    case ModelKind::logreg:
    case ModelKind::linear_svm:
      m.weights = j.at("weights").get<std::vector<double>>();
      m.bias = j.at("bias").get<double>();
      break;
    case ModelKind::random_forest: {
      for (const auto& tj : j.at("trees")) {
        Tree tree;
        for (const auto& nj : tj) {
          TreeNode n;
          n.feature = nj[0].get<std::int32_t>();
          n.threshold = nj[1].get<double>();
          n.left = nj[2].get<std::int32_t>();
          n.right = nj[3].get<std::int32_t>();
          n.counts = {nj[4].get<std::int64_t>(), nj[5].get<std::int64_t>()};
          tree.nodes.push_back(n);
        }
        m.trees.push_back(std::move(tree));
      }
      break;
    }
    case ModelKind::knn: {
      m.knn_cosine = j.at("metric").get<std::string>() == "cosine";
      m.knn_labels = j.at("labels").get<std::vector<int>>();
      m.knn_train.is_sparse = j.at("train_sparse").get<bool>();
      m.knn_train.n_cols = m.n_features;
      const auto& rows = j.at("train_rows");
      m.knn_train.n_rows = rows.size();
      for (const auto& rj : rows) {
        if (m.knn_train.is_sparse) {
          std::vector<std::pair<std::uint32_t, double>> row;
          for (const auto& e : rj)
            row.emplace_back(e[0].get<std::uint32_t>(), e[1].get<double>());
          m.knn_train.sparse.push_back(std::move(row));
        } else {
          m.knn_train.dense.push_back(rj.get<std::vector<double>>());
        }
      }
      break;
    }
  }
  return m;
}

std::vector<HyperParams> default_grid(ModelKind kind) {
  switch (kind) {
    case ModelKind::multinomial_nb:
    case ModelKind::gaussian_nb:
      return {{{"alpha", 0.1}}, {{"alpha", 0.5}}, {{"alpha", 1.0}}};
    case ModelKind::logreg:
      return {{{"l2_lambda", 1e-4}}, {{"l2_lambda", 1e-3}}, {{"l2_lambda", 1e-2}}};
    case ModelKind::linear_svm:
      return {{{"l2_lambda", 1e-4}}, {{"l2_lambda", 1e-3}}, {{"l2_lambda", 1e-2}}};
    case ModelKind::random_forest: {
      std::vector<HyperParams> grid;
      for (double trees : {50.0, 100.0})
        for (double depth : {8.0, 16.0})
          grid.push_back({{"n_trees", trees}, {"max_depth", depth}});
      return grid;
    }
    case ModelKind::knn:
      return {{{"k", 3.0}}, {{"k", 5.0}}, {{"k", 11.0}}};
  }
  return {};
}

}  // namespace remine::learn
