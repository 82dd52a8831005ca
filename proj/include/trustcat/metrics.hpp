#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace trustcat {

struct ClassificationRecord {
  std::string group;
  int y_true = 0;   // {0,1}
  int y_pred = 0;   // {0,1}
  std::optional<double> score;  // confidence that y=1, in [0,1]
};

struct RegressionRecord {
  double y_true = 0.0;
  double y_pred = 0.0;
};

using ClassificationData = std::vector<ClassificationRecord>;
using RegressionData = std::vector<RegressionRecord>;

struct ConfusionCounts {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  long total() const { return tp + fp + tn + fn; }
};

struct MetricError : std::runtime_error {
  enum class Code {
    Csv,            // malformed CSV content
    MissingColumn,
    Range,          // value outside its domain (per-row)
    EmptySlice,
    Undefined,      // denominator is zero / inputs make the metric undefined
    MissingScores,
    BadBinCount,
    NotSupported,   // metric name known or unknown but not computable here
    BadParams,
  };
  MetricError(Code c, std::string msg) : std::runtime_error(std::move(msg)), code(c) {}
  Code code;
};

// Closed interval bounds are the default; null-equivalent infinities are
// expressed by leaving a bound empty.
struct Interval {
  std::optional<double> lower;  // empty = -inf
  std::optional<double> upper;  // empty = +inf
  bool lower_closed = true;
  bool upper_closed = true;

  // lower <= upper; a point interval needs both bounds closed.
  bool well_formed() const;
};

bool check_interval(double value, const Interval& target);

struct MetricResult {
  std::string name;
  double value = 0.0;
  std::string slice;  // whole set or "group_a vs group_b"
  std::map<std::string, std::string> params;
};

// CSV ingestion (UTF-8, header row required).
// Classification columns: group,y_true,y_pred[,score]; regression: y_true,y_pred.
ClassificationData load_classification_csv(std::istream& in);
RegressionData load_regression_csv(std::istream& in);
ClassificationData load_classification_file(const std::string& path);
RegressionData load_regression_file(const std::string& path);

// Exact confusion tally over the whole set or one group slice.
ConfusionCounts confusion_counts(const ClassificationData& data,
                                 const std::optional<std::string>& group = std::nullopt);

// name in {accuracy, precision, recall, f1, sensitivity, specificity,
// balanced_accuracy, auc} for classification or {mse, mae} for regression.
MetricResult performance_metric(const std::string& name, const ClassificationData& data);
MetricResult performance_metric(const std::string& name, const RegressionData& data);

// Absolute-difference group fairness metrics over two named groups.
MetricResult fairness_metric(const std::string& name, const ClassificationData& data,
                             const std::string& group_a, const std::string& group_b);

struct CalibrationParams {
  int bins = 10;  // ece only
};

// name in {ece, brier, nll}; every record must carry a score.
MetricResult calibration_metric(const std::string& name, const ClassificationData& data,
                                const CalibrationParams& params = {});

// What a registered metric consumes.
enum class MetricInputKind { Classification, Regression, ClassificationGroups, ClassificationScores };

struct MetricSpec {
  std::string name;
  MetricInputKind input;
};

// All metric names the engine evaluates.
const std::vector<MetricSpec>& metric_registry();
const MetricSpec* find_metric(const std::string& name);

// Throws MetricError::NotSupported with a message distinguishing
// recognized-but-not-implemented names (ranking/clustering/vision/NLP
// metrics) from unknown ones.
void require_supported(const std::string& name);

}  // namespace trustcat
