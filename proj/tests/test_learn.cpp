#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "remine/errors.hpp"
#include "remine/learn.hpp"
#include "remine/rng.hpp"

using namespace remine::learn;
using remine::features::FeatureMatrix;

namespace {

FeatureMatrix dense_matrix(const std::vector<std::vector<double>>& rows) {
  FeatureMatrix m;
  m.n_rows = rows.size();
  m.n_cols = rows.empty() ? 0 : rows[0].size();
  m.is_sparse = false;
  m.dense = rows;
  for (std::size_t c = 0; c < m.n_cols; ++c)
    m.feature_names.push_back("f" + std::to_string(c));
  for (std::size_t r = 0; r < m.n_rows; ++r)
    m.row_ids.push_back({"d", static_cast<int>(r)});
  return m;
}

FeatureMatrix sparse_matrix(const std::vector<std::vector<double>>& rows) {
  FeatureMatrix m = dense_matrix(rows);
  m.is_sparse = true;
  m.dense.clear();
  for (const auto& row : rows) {
    std::vector<std::pair<std::uint32_t, double>> sparse_row;
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c] != 0.0)
        sparse_row.emplace_back(static_cast<std::uint32_t>(c), row[c]);
    m.sparse.push_back(std::move(sparse_row));
  }
  return m;
}

}  // namespace

TEST_CASE("smote interpolation hooks and parents") {
  const std::vector<std::vector<double>> minority = {
      {0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 2}, {3, 3}};
  SmoteConfig cfg;
  cfg.k_neighbors = 2;
  cfg.seed = 9;

  SUBCASE("u forced to zero reproduces the base row") {
    cfg.u_override = 0.0;
    const auto result = smote(minority, cfg, 10);
    REQUIRE(result.rows.size() == 10);
    for (std::size_t i = 0; i < result.rows.size(); ++i)
      CHECK(result.rows[i] == minority[result.parents[i].base]);
  }
  SUBCASE("u forced to one reproduces the neighbor row") {
    cfg.u_override = 1.0;
    const auto result = smote(minority, cfg, 10);
    for (std::size_t i = 0; i < result.rows.size(); ++i)
      CHECK(result.rows[i] == minority[result.parents[i].neighbor]);
  }
  SUBCASE("every synthetic row replays from its recorded parents") {
    const auto result = smote(minority, cfg, 50);
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const auto& p = result.parents[i];
      CHECK(p.u >= 0.0);
      CHECK(p.u < 1.0);
      for (std::size_t c = 0; c < 2; ++c) {
        const double expect =
            minority[p.base][c] +
            p.u * (minority[p.neighbor][c] - minority[p.base][c]);
        CHECK(std::fabs(result.rows[i][c] - expect) < 1e-12);
      }
    }
  }
  SUBCASE("too few minority rows fail") {
    cfg.k_neighbors = 6;
    CHECK_THROWS_AS(smote(minority, cfg, 1), remine::argument_error);
  }
  SUBCASE("identical draws for identical seeds") {
    const auto a = smote(minority, cfg, 5);
    const auto b = smote(minority, cfg, 5);
    CHECK(a.rows == b.rows);
  }
  SUBCASE("sparse entry point matches the neighbor geometry") {
    const auto m = sparse_matrix(minority);
    std::vector<std::size_t> rows = {0, 1, 2, 3, 4, 5};
    const auto result = smote_rows(m, rows, cfg, 20);
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const auto& p = result.parents[i];
      for (std::size_t c = 0; c < 2; ++c) {
        const double expect =
            minority[p.base][c] +
            p.u * (minority[p.neighbor][c] - minority[p.base][c]);
        CHECK(std::fabs(result.rows[i][c] - expect) < 1e-12);
      }
    }
  }
}

TEST_CASE("multinomial naive bayes against hand-computed posteriors") {
  // class 0: one doc "x x"; class 1: one doc "y";  alpha = 1
  // P(x|0) = (2+1)/(2+2) = 3/4, P(y|0) = 1/4
  // P(x|1) = (0+1)/(1+2) = 1/3, P(y|1) = 2/3
  // posterior for doc "x": 0.5*3/4 vs 0.5*1/3 -> P(class1) = (1/3)/(3/4+1/3)
  const auto X = sparse_matrix({{2, 0}, {0, 1}});
  ModelSpec spec;
  spec.kind = ModelKind::multinomial_nb;
  const auto model = train(spec, X, {0, 1});

  const auto probe = sparse_matrix({{1, 0}});
  const auto scores = predict_scores(model, probe);
  const double expected = (1.0 / 3.0) / (3.0 / 4.0 + 1.0 / 3.0);
  CHECK(std::fabs(scores[0] - expected) < 1e-9);
  CHECK(predict(model, probe) == std::vector<int>{0});

  SUBCASE("posteriors complement to one") {
    const auto p1 = predict_scores(model, probe)[0];
    // score is P(class1); P(class0) = 1 - score by construction of the
    // normalization, checked to tight tolerance
    const auto more = sparse_matrix({{1, 1}, {0, 2}, {3, 0}});
    for (const double s : predict_scores(model, more)) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    CHECK(p1 == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("negative features are redirected to gaussian_nb") {
    const auto bad = dense_matrix({{-1, 0}, {0, 1}});
    try {
      train(spec, bad, {0, 1});
      FAIL("expected argument_error");
    } catch (const remine::argument_error& e) {
      CHECK(std::string(e.what()).find("gaussian_nb") != std::string::npos);
    }
  }
}

TEST_CASE("training input validation") {
  ModelSpec spec;
  spec.kind = ModelKind::multinomial_nb;
  const auto X = sparse_matrix({{1, 0}, {0, 1}});
  CHECK_THROWS_AS(train(spec, X, {1, 1}), remine::argument_error);  // one class
  CHECK_THROWS_AS(train(spec, X, {0}), remine::argument_error);     // misaligned
  CHECK_THROWS_AS(train(spec, sparse_matrix({{1.0}}), {0}),
                  remine::argument_error);  // too few rows
}

TEST_CASE("gaussian naive bayes separates shifted blobs") {
  remine::SplitRng rng(55);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    const bool hi = i % 2 == 0;
    rows.push_back({(hi ? 5.0 : 0.0) + rng.next_unit(),
                    (hi ? -3.0 : 2.0) + rng.next_unit()});
    labels.push_back(hi ? 1 : 0);
  }
  ModelSpec spec;
  spec.kind = ModelKind::gaussian_nb;
  const auto model = train(spec, dense_matrix(rows), labels);
  const auto probe = dense_matrix({{5.5, -2.5}, {0.5, 2.5}});
  CHECK(predict(model, probe) == std::vector<int>{1, 0});
  const auto scores = predict_scores(model, probe);
  CHECK(scores[0] > 0.9);
  CHECK(scores[1] < 0.1);
}

TEST_CASE("logistic regression fits a separable fixture perfectly") {
  const auto X = dense_matrix({{0, 0}, {0, 1}, {3, 3}, {3, 4}});
  const std::vector<int> y = {0, 0, 1, 1};
  ModelSpec spec;
  spec.kind = ModelKind::logreg;
  const auto model = train(spec, X, y);
  CHECK(predict(model, X) == y);
  const auto scores = predict_scores(model, X);
  for (const double s : scores) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("linear svm reaches full training accuracy on separable data") {
  remine::SplitRng rng(77);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    const bool pos = i % 2 == 0;
    rows.push_back({(pos ? 2.0 : -2.0) + rng.next_unit() * 0.5,
                    (pos ? 2.0 : -2.0) + rng.next_unit() * 0.5});
    labels.push_back(pos ? 1 : 0);
  }
  ModelSpec spec;
  spec.kind = ModelKind::linear_svm;
  spec.seed = 3;
  const auto model = train(spec, dense_matrix(rows), labels);
  CHECK(predict(model, dense_matrix(rows)) == labels);
}

TEST_CASE("random forest single unbagged deep tree memorizes clean data") {
  remine::SplitRng rng(11);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 25; ++i) {
    rows.push_back({static_cast<double>(i), rng.next_unit()});
    labels.push_back(static_cast<int>(rng.next_below(2)));
  }
  ModelSpec spec;
  spec.kind = ModelKind::random_forest;
  spec.hyperparams = {{"n_trees", 1},
                      {"max_depth", 0},
                      {"bootstrap", 0},
                      {"min_leaf", 1}};
  spec.seed = 5;
  const auto model = train(spec, dense_matrix(rows), labels);
  CHECK(predict(model, dense_matrix(rows)) == labels);
}

TEST_CASE("knn basics") {
  const auto X = dense_matrix({{0, 0}, {0, 1}, {5, 5}, {5, 6}});
  const std::vector<int> y = {0, 0, 1, 1};

  SUBCASE("k=1 recovers each training row's own label") {
    ModelSpec spec;
    spec.kind = ModelKind::knn;
    spec.hyperparams = {{"k", 1}};
    const auto model = train(spec, X, y);
    CHECK(predict(model, X) == y);
  }
  SUBCASE("cosine metric on sparse input") {
    const auto S = sparse_matrix({{1, 0}, {2, 0}, {0, 1}, {0, 3}});
    ModelSpec spec;
    spec.kind = ModelKind::knn;
    spec.hyperparams = {{"k", 1}};
    const auto model = train(spec, S, {0, 0, 1, 1});
    const auto probe = sparse_matrix({{4, 0}, {0, 9}});
    CHECK(predict(model, probe) == std::vector<int>{0, 1});
  }
}

TEST_CASE("predict is the thresholded score for every model") {
  remine::SplitRng rng(31);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 24; ++i) {
    const bool pos = rng.next_unit() < 0.5;
    rows.push_back({(pos ? 1.5 : -1.5) + rng.next_unit(),
                    rng.next_unit(),
                    (pos ? 0.5 : -0.5) + rng.next_unit()});
    labels.push_back(pos ? 1 : 0);
  }
  // keep multinomial happy: shift nonnegative
  std::vector<std::vector<double>> nonneg = rows;
  for (auto& r : nonneg)
    for (auto& v : r) v += 3.0;

  const auto dense = dense_matrix(rows);
  const auto counts = sparse_matrix(nonneg);

  for (const auto kind :
       {ModelKind::multinomial_nb, ModelKind::gaussian_nb, ModelKind::logreg,
        ModelKind::linear_svm, ModelKind::random_forest, ModelKind::knn}) {
    CAPTURE(kind_name(kind));
    ModelSpec spec;
    spec.kind = kind;
    spec.seed = 17;
    const auto& X = kind == ModelKind::multinomial_nb ? counts : dense;
    const auto model = train(spec, X, labels);
    const auto scores = predict_scores(model, X);
    const auto predictions = predict(model, X);
    const double threshold = kind == ModelKind::linear_svm ? 0.0 : 0.5;
    REQUIRE(scores.size() == predictions.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] > threshold) CHECK(predictions[i] == 1);
      else if (scores[i] < threshold) CHECK(predictions[i] == 0);
      else CHECK(predictions[i] == model.majority_class);
    }
    // empty probe produces empty predictions
    FeatureMatrix empty;
    empty.n_cols = X.n_cols;
    empty.is_sparse = X.is_sparse;
    CHECK(predict(model, empty).empty());
    // mismatched width is rejected
    FeatureMatrix narrow = dense_matrix({{1.0}});
    narrow.is_sparse = X.is_sparse;
    if (narrow.is_sparse) {
      narrow.sparse = {{{0, 1.0}}};
      narrow.dense.clear();
    }
    CHECK_THROWS_AS(predict(model, narrow), remine::argument_error);
  }
}

TEST_CASE("training is deterministic: identical serialized models") {
  remine::SplitRng rng(41);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    rows.push_back({rng.next_unit() * 2.0, rng.next_unit(), rng.next_unit()});
    labels.push_back(static_cast<int>(rng.next_below(2)));
  }
  const auto dense = dense_matrix(rows);

  for (const auto kind :
       {ModelKind::gaussian_nb, ModelKind::logreg, ModelKind::linear_svm,
        ModelKind::random_forest, ModelKind::knn}) {
    CAPTURE(kind_name(kind));
    ModelSpec spec;
    spec.kind = kind;
    spec.seed = 1234;
    const auto a = model_to_json(train(spec, dense, labels)).dump();
    const auto b = model_to_json(train(spec, dense, labels)).dump();
    CHECK(a == b);
  }
}

TEST_CASE("model serialization round trips through JSON") {
  const auto X = sparse_matrix({{2, 0}, {0, 1}, {1, 1}, {0, 2}});
  const std::vector<int> y = {0, 1, 0, 1};
  for (const auto kind :
       {ModelKind::multinomial_nb, ModelKind::logreg, ModelKind::linear_svm,
        ModelKind::random_forest, ModelKind::knn}) {
    CAPTURE(kind_name(kind));
    ModelSpec spec;
    spec.kind = kind;
    spec.seed = 2;
    spec.hyperparams = default_grid(kind).front();
    const auto model = train(spec, X, y);
    const auto restored = model_from_json(model_to_json(model));
    CHECK(predict(restored, X) == predict(model, X));
    CHECK(model_to_json(restored).dump() == model_to_json(model).dump());
  }
}

TEST_CASE("default grids match the documented sweeps") {
  CHECK(default_grid(ModelKind::multinomial_nb).size() == 3);
  CHECK(default_grid(ModelKind::logreg).size() == 3);
  CHECK(default_grid(ModelKind::linear_svm).size() == 3);
  CHECK(default_grid(ModelKind::random_forest).size() == 4);
  CHECK(default_grid(ModelKind::knn).size() == 3);
  CHECK(default_grid(ModelKind::multinomial_nb)[0].at("alpha") ==
        doctest::Approx(0.1));
}
