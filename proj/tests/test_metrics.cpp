#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "trustcat/metrics.hpp"

using namespace trustcat;

namespace {

ClassificationRecord rec(const std::string& g, int yt, int yp,
                         std::optional<double> s = std::nullopt) {
  return {g, yt, yp, s};
}

ClassificationData random_dataset(std::mt19937& rng, size_t max_records, bool with_scores) {
  std::uniform_int_distribution<size_t> size(1, max_records);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  ClassificationData data;
  size_t n = size(rng);
  for (size_t i = 0; i < n; ++i) {
    ClassificationRecord r;
    r.group = coin(rng) ? "a" : "b";
    r.y_true = coin(rng);
    r.y_pred = coin(rng);
    if (with_scores) r.score = score(rng);
    data.push_back(r);
  }
  return data;
}

}  // namespace

TEST_CASE("csv loading") {
  std::istringstream in("group,y_true,y_pred,score\na,1,1,0.9\na,0,1,0.7\nb,0,0,0.2\nb,1,0,0.4\n");
  auto data = load_classification_csv(in);
  REQUIRE(data.size() == 4);
  CHECK(data[0].group == "a");
  CHECK(data[0].y_true == 1);
  CHECK(*data[3].score == doctest::Approx(0.4));

  std::istringstream eight(
      "group,y_true,y_pred\na,1,1\na,1,1\na,0,0\na,0,0\nb,1,1\nb,0,0\nb,0,0\nb,0,0\n");
  CHECK(load_classification_csv(eight).size() == 8);

  SUBCASE("score out of range") {
    std::istringstream bad("group,y_true,y_pred,score\na,1,1,1.3\n");
    try {
      load_classification_csv(bad);
      FAIL("expected range error");
    } catch (const MetricError& e) {
      CHECK(e.code == MetricError::Code::Range);
    }
  }
  SUBCASE("missing column") {
    std::istringstream bad("y_true\n1\n");
    try {
      load_regression_csv(bad);
      FAIL("expected missing column");
    } catch (const MetricError& e) {
      CHECK(e.code == MetricError::Code::MissingColumn);
    }
  }
  SUBCASE("crlf and binary label validation") {
    std::istringstream crlf("y_true,y_pred\r\n1.5,2.0\r\n");
    CHECK(load_regression_csv(crlf).size() == 1);
    std::istringstream bad("group,y_true,y_pred\na,2,1\n");
    CHECK_THROWS_AS(load_classification_csv(bad), MetricError);
  }
}

TEST_CASE("confusion counts") {
  ClassificationData d = {rec("a", 1, 1), rec("a", 0, 1), rec("a", 0, 0), rec("a", 1, 0)};
  ConfusionCounts c = confusion_counts(d);
  CHECK(c.tp == 1);
  CHECK(c.fp == 1);
  CHECK(c.tn == 1);
  CHECK(c.fn == 1);

  ClassificationData correct = {rec("a", 1, 1), rec("a", 0, 0)};
  c = confusion_counts(correct);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);

  CHECK_THROWS_AS(confusion_counts(d, std::string("zz")), MetricError);

  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto data = random_dataset(rng, 16, false);
    ConfusionCounts got = confusion_counts(data);
    long tp = oracle::count_if_int(data, 1, 1), fp = oracle::count_if_int(data, 0, 1);
    long tn = oracle::count_if_int(data, 0, 0), fn = oracle::count_if_int(data, 1, 0);
    CHECK(got.tp == tp);
    CHECK(got.fp == fp);
    CHECK(got.tn == tn);
    CHECK(got.fn == fn);
  }
}

TEST_CASE("performance metric hand values") {
  ClassificationData correct = {rec("a", 1, 1), rec("a", 0, 0), rec("b", 1, 1)};
  CHECK(performance_metric("accuracy", correct).value == doctest::Approx(1.0));

  ClassificationData mixed = {rec("a", 1, 1), rec("a", 0, 1), rec("a", 1, 0)};
  CHECK(performance_metric("precision", mixed).value == doctest::Approx(0.5));
  CHECK(performance_metric("recall", mixed).value == doctest::Approx(0.5));
  CHECK(performance_metric("f1", mixed).value == doctest::Approx(0.5));

  RegressionData r = {{1.0, 1.0}, {2.0, 4.0}};
  CHECK(performance_metric("mse", r).value == doctest::Approx(2.0));
  CHECK(performance_metric("mae", r).value == doctest::Approx(1.0));
}

TEST_CASE("undefined denominators raise") {
  ClassificationData no_pred_pos = {rec("a", 1, 0), rec("a", 0, 0)};
  try {
    performance_metric("precision", no_pred_pos);
    FAIL("expected undefined");
  } catch (const MetricError& e) {
    CHECK(e.code == MetricError::Code::Undefined);
  }
  ClassificationData no_scores = {rec("a", 1, 1), rec("a", 0, 0)};
  CHECK_THROWS_AS(performance_metric("auc", no_scores), MetricError);
  ClassificationData one_class = {rec("a", 1, 1, 0.9), rec("a", 1, 0, 0.3)};
  CHECK_THROWS_AS(performance_metric("auc", one_class), MetricError);
}

TEST_CASE("auc equals pair enumeration on random data") {
  std::mt19937 rng(11);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    auto data = random_dataset(rng, 16, true);
    bool has_pos = false, has_neg = false;
    for (const auto& r : data) (r.y_true ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) continue;
    ++checked;
    CHECK(performance_metric("auc", data).value ==
          doctest::Approx(oracle::auc(data)).epsilon(1e-12));
  }
  CHECK(checked > 50);
}

TEST_CASE("fairness hand values") {
  // group a predicts positive twice out of four, group b once out of four
  ClassificationData d = {rec("a", 1, 1), rec("a", 0, 1), rec("a", 0, 0), rec("a", 1, 0),
                          rec("b", 1, 1), rec("b", 0, 0), rec("b", 0, 0), rec("b", 1, 0)};
  CHECK(fairness_metric("statistical_parity_difference", d, "a", "b").value ==
        doctest::Approx(0.25));

  SUBCASE("identical groups score zero everywhere") {
    ClassificationData twin;
    for (const auto& r : d) {
      twin.push_back(rec("x", r.y_true, r.y_pred));
      twin.push_back(rec("y", r.y_true, r.y_pred));
    }
    for (const char* name :
         {"statistical_parity_difference", "equal_opportunity_difference",
          "predictive_equality_difference", "equalized_odds", "predictive_parity_difference",
          "conditional_use_accuracy_difference", "overall_accuracy_difference",
          "treatment_equality_difference"}) {
      try {
        CHECK(fairness_metric(name, twin, "x", "y").value == doctest::Approx(0.0));
      } catch (const MetricError& e) {
        CHECK(e.code == MetricError::Code::Undefined);  // fp=0 for treatment equality
      }
    }
  }

  SUBCASE("equalized odds is the larger rate gap") {
    ClassificationData eo = {rec("a", 1, 1), rec("a", 1, 1), rec("a", 1, 0), rec("a", 0, 1),
                             rec("a", 0, 0), rec("b", 1, 1), rec("b", 1, 0), rec("b", 1, 0),
                             rec("b", 0, 0), rec("b", 0, 0)};
    // TPR: a = 2/3, b = 1/3; FPR: a = 1/2, b = 0
    double tpr_gap = std::fabs(2.0 / 3.0 - 1.0 / 3.0);
    double fpr_gap = 0.5;
    CHECK(fairness_metric("equalized_odds", eo, "a", "b").value ==
          doctest::Approx(std::max(tpr_gap, fpr_gap)));
  }

  SUBCASE("treatment equality needs false positives in both groups") {
    ClassificationData te = {rec("a", 0, 1), rec("a", 1, 0), rec("b", 1, 1), rec("b", 0, 0)};
    try {
      fairness_metric("treatment_equality_difference", te, "a", "b");
      FAIL("expected undefined");
    } catch (const MetricError& e) {
      CHECK(e.code == MetricError::Code::Undefined);
    }
  }
}

TEST_CASE("fairness symmetry and permutation invariance") {
  std::mt19937 rng(23);
  for (int i = 0; i < 100; ++i) {
    auto data = random_dataset(rng, 16, false);
    bool has_a = false, has_b = false;
    for (const auto& r : data) (r.group == "a" ? has_a : has_b) = true;
    if (!has_a || !has_b) continue;
    auto shuffled = data;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (const char* name :
         {"statistical_parity_difference", "equal_opportunity_difference",
          "predictive_equality_difference", "equalized_odds", "predictive_parity_difference",
          "conditional_use_accuracy_difference", "overall_accuracy_difference",
          "treatment_equality_difference"}) {
      try {
        double ab = fairness_metric(name, data, "a", "b").value;
        double ba = fairness_metric(name, data, "b", "a").value;
        double shuffled_ab = fairness_metric(name, shuffled, "a", "b").value;
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ab == doctest::Approx(shuffled_ab).epsilon(1e-12));
        if (std::string(name) != "treatment_equality_difference") {
          CHECK(ab >= 0.0);
          CHECK(ab <= 1.0);
        }
      } catch (const MetricError&) {
        // undefined slices are acceptable for random tiny data
      }
    }
  }
}

TEST_CASE("calibration hand values") {
  ClassificationData perfect = {rec("a", 1, 1, 1.0), rec("a", 1, 1, 1.0)};
  CHECK(calibration_metric("brier", perfect).value == doctest::Approx(0.0));
  CHECK(calibration_metric("nll", perfect).value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(calibration_metric("ece", perfect).value == doctest::Approx(0.0));

  ClassificationData half = {rec("a", 1, 1, 0.5)};
  CHECK(calibration_metric("brier", half).value == doctest::Approx(0.25));

  // ten records, all confidence 0.7, exactly seven positives: perfectly calibrated
  ClassificationData calibrated;
  for (int i = 0; i < 10; ++i) calibrated.push_back(rec("a", i < 7 ? 1 : 0, 1, 0.7));
  CHECK(calibration_metric("ece", calibrated).value == doctest::Approx(0.0).epsilon(1e-12));

  SUBCASE("errors") {
    ClassificationData no_scores = {rec("a", 1, 1)};
    try {
      calibration_metric("brier", no_scores);
      FAIL("expected missing scores");
    } catch (const MetricError& e) {
      CHECK(e.code == MetricError::Code::MissingScores);
    }
    ClassificationData ok = {rec("a", 1, 1, 0.5)};
    try {
      calibration_metric("ece", ok, {0});
      FAIL("expected bad bin count");
    } catch (const MetricError& e) {
      CHECK(e.code == MetricError::Code::BadBinCount);
    }
  }
}

TEST_CASE("ece matches the per-bin oracle and the single-bin identity") {
  std::mt19937 rng(31);
  for (int i = 0; i < 100; ++i) {
    auto data = random_dataset(rng, 20, true);
    CHECK(calibration_metric("ece", data, {5}).value ==
          doctest::Approx(oracle::ece(data, 5)).epsilon(1e-12));

    // one bin: |mean score - base rate|
    double mean_score = 0.0, base = 0.0;
    for (const auto& r : data) {
      mean_score += *r.score;
      base += r.y_true;
    }
    mean_score /= double(data.size());
    base /= double(data.size());
    CHECK(calibration_metric("ece", data, {1}).value ==
          doctest::Approx(std::fabs(mean_score - base)).epsilon(1e-12));
  }
}

TEST_CASE("interval checks") {
  Interval bleu_floor{35.0, std::nullopt, true, true};
  CHECK(check_interval(40.0, bleu_floor));
  CHECK(check_interval(35.0, bleu_floor));
  CHECK_FALSE(check_interval(34.9, bleu_floor));

  Interval point{0.0, 0.0, true, true};
  CHECK(check_interval(0.0, point));
  CHECK_FALSE(check_interval(0.001, point));

  Interval band{0.0, 0.2, true, true};
  CHECK_FALSE(check_interval(0.3, band));

  Interval open{0.0, 1.0, false, false};
  CHECK_FALSE(check_interval(0.0, open));
  CHECK_FALSE(check_interval(1.0, open));
  CHECK(check_interval(0.5, open));

  Interval bad{1.0, 0.0, true, true};
  CHECK_FALSE(bad.well_formed());
  Interval bad_point{1.0, 1.0, false, true};
  CHECK_FALSE(bad_point.well_formed());
}

TEST_CASE("registry rejects out-of-scope metric names") {
  for (const char* name : {"bleu", "perplexity", "miou", "ssim", "psnr", "silhouette", "mrr", "dcg"}) {
    try {
      require_supported(name);
      FAIL("expected rejection for ", name);
    } catch (const MetricError& e) {
      CHECK(e.code == MetricError::Code::NotSupported);
      CHECK(std::string(e.what()).find("recognized") != std::string::npos);
    }
  }
  try {
    require_supported("no_such_metric");
    FAIL("expected rejection");
  } catch (const MetricError& e) {
    CHECK(std::string(e.what()).find("unknown") != std::string::npos);
  }
  CHECK(find_metric("statistical_parity_difference") != nullptr);
  CHECK(find_metric("ece") != nullptr);
}

TEST_CASE("every metric equals its oracle on random small datasets") {
  std::mt19937 rng(1234);
  int datasets = 0;
  while (datasets < 200) {
    auto data = random_dataset(rng, 16, true);
    ++datasets;

    struct Case {
      const char* name;
      double (*oracle_fn)(const ClassificationData&);
    };
    const Case perf_cases[] = {
        {"accuracy", oracle::accuracy},   {"precision", oracle::precision},
        {"recall", oracle::recall},       {"sensitivity", oracle::recall},
        {"specificity", oracle::specificity}, {"balanced_accuracy", oracle::balanced_accuracy},
        {"f1", oracle::f1},               {"auc", oracle::auc},
        {"brier", oracle::brier},         {"nll", oracle::nll},
    };
    for (const auto& pc : perf_cases) {
      std::optional<double> expected;
      try {
        expected = pc.oracle_fn(data);
      } catch (const oracle::Undefined&) {
      }
      try {
        double got = std::string(pc.name) == "brier" || std::string(pc.name) == "nll"
                         ? calibration_metric(pc.name, data).value
                         : performance_metric(pc.name, data).value;
        REQUIRE(expected.has_value());
        CHECK(got == doctest::Approx(*expected).epsilon(1e-12));
      } catch (const MetricError&) {
        CHECK_FALSE(expected.has_value());
      }
    }

    CHECK(calibration_metric("ece", data, {10}).value ==
          doctest::Approx(oracle::ece(data, 10)).epsilon(1e-12));

    for (const char* name :
         {"statistical_parity_difference", "equal_opportunity_difference",
          "predictive_equality_difference", "equalized_odds", "predictive_parity_difference",
          "conditional_use_accuracy_difference", "overall_accuracy_difference",
          "treatment_equality_difference"}) {
      std::optional<double> expected;
      try {
        expected = oracle::fairness(name, data, "a", "b");
      } catch (const oracle::Undefined&) {
      }
      try {
        double got = fairness_metric(name, data, "a", "b").value;
        REQUIRE(expected.has_value());
        CHECK(got == doctest::Approx(*expected).epsilon(1e-12));
      } catch (const MetricError&) {
        CHECK_FALSE(expected.has_value());
      }
    }

    // regression pair derived from the same randomness
    RegressionData reg;
    for (const auto& r : data) reg.push_back({double(r.y_true), *r.score});
    CHECK(performance_metric("mse", reg).value == doctest::Approx(oracle::mse(reg)).epsilon(1e-12));
    CHECK(performance_metric("mae", reg).value == doctest::Approx(oracle::mae(reg)).epsilon(1e-12));
  }
}
