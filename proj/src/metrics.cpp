#include "trustcat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace trustcat {

namespace {

constexpr double kNllClamp = 1e-12;

[[noreturn]] void csv_error(size_t row, const std::string& what) {
  throw MetricError(MetricError::Code::Csv, "row " + std::to_string(row) + ": " + what);
}

// Minimal CSV reader: comma-separated, optional double-quote quoting with
// "" escapes, \n or \r\n newlines.
std::vector<std::string> split_csv_line(const std::string& line, size_t row) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) csv_error(row, "unterminated quote");
  fields.push_back(cur);
  return fields;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    rows.push_back(split_csv_line(line, row));
  }
  if (rows.empty()) throw MetricError(MetricError::Code::Csv, "empty CSV input");
  return rows;
}

size_t find_column(const std::vector<std::string>& header, const std::string& name, bool required) {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  if (required)
    throw MetricError(MetricError::Code::MissingColumn, "missing column '" + name + "'");
  return header.size();
}

double parse_real(const std::string& field, size_t row, const std::string& col) {
  try {
    size_t pos = 0;
    double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument("trailing");
    if (!std::isfinite(v))
      throw MetricError(MetricError::Code::Range,
                        "row " + std::to_string(row) + ", " + col + ": not finite");
    return v;
  } catch (const MetricError&) {
    throw;
  } catch (const std::exception&) {
    csv_error(row, "bad number '" + field + "' in column " + col);
  }
}

int parse_binary(const std::string& field, size_t row, const std::string& col) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw MetricError(MetricError::Code::Range,
                    "row " + std::to_string(row) + ", " + col + ": expected 0 or 1, got '" + field + "'");
}

[[noreturn]] void undefined(const std::string& what) {
  throw MetricError(MetricError::Code::Undefined, what);
}

ConfusionCounts tally(const ClassificationData& data, const std::string* group) {
  ConfusionCounts c;
  for (const auto& r : data) {
    if (group && r.group != *group) continue;
    if (r.y_true == 1)
      (r.y_pred == 1 ? c.tp : c.fn)++;
    else
      (r.y_pred == 1 ? c.fp : c.tn)++;
  }
  return c;
}

double rate(long num, long den, const std::string& what) {
  if (den == 0) undefined(what + " undefined: zero denominator");
  return static_cast<double>(num) / static_cast<double>(den);
}

struct Rates {
  ConfusionCounts c;
  double tpr(const std::string& who) const { return rate(c.tp, c.tp + c.fn, who + " TPR"); }
  double fpr(const std::string& who) const { return rate(c.fp, c.fp + c.tn, who + " FPR"); }
  double ppv(const std::string& who) const { return rate(c.tp, c.tp + c.fp, who + " PPV"); }
  double npv(const std::string& who) const { return rate(c.tn, c.tn + c.fn, who + " NPV"); }
  double acc(const std::string& who) const { return rate(c.tp + c.tn, c.total(), who + " accuracy"); }
  double ppr(const std::string& who) const { return rate(c.tp + c.fp, c.total(), who + " positive rate"); }
  double fn_fp(const std::string& who) const {
    if (c.fp == 0) undefined(who + " FN/FP ratio undefined: zero false positives");
    return static_cast<double>(c.fn) / static_cast<double>(c.fp);
  }
};

double auc_score(const ClassificationData& data) {
  std::vector<double> pos, neg;
  for (const auto& r : data) {
    if (!r.score) throw MetricError(MetricError::Code::MissingScores, "auc requires scores on all rows");
    (r.y_true == 1 ? pos : neg).push_back(*r.score);
  }
  if (pos.empty() || neg.empty())
    undefined("auc requires at least one positive and one negative record");
  // Mann-Whitney statistic via ranking; ties get the midrank.
  struct Entry { double score; bool positive; };
  std::vector<Entry> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.push_back({s, true});
  for (double s : neg) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.score < b.score; });
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < all.size()) {
    size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k < j; ++k)
      if (all[k].positive) rank_sum_pos += midrank;
    i = j;
  }
  double n_pos = static_cast<double>(pos.size());
  double n_neg = static_cast<double>(neg.size());
  double u = rank_sum_pos - n_pos * (n_pos + 1) / 2.0;
  return u / (n_pos * n_neg);
}

std::vector<double> require_scores(const ClassificationData& data, const std::string& name) {
  std::vector<double> scores;
  scores.reserve(data.size());
  for (const auto& r : data) {
    if (!r.score)
      throw MetricError(MetricError::Code::MissingScores, name + " requires scores on all rows");
    scores.push_back(*r.score);
  }
  return scores;
}

}  // namespace

bool Interval::well_formed() const {
  if (lower && upper) {
    if (*lower > *upper) return false;
    if (*lower == *upper && (!lower_closed || !upper_closed)) return false;
  }
  return true;
}

bool check_interval(double value, const Interval& target) {
  if (target.lower) {
    if (target.lower_closed ? value < *target.lower : value <= *target.lower) return false;
  }
  if (target.upper) {
    if (target.upper_closed ? value > *target.upper : value >= *target.upper) return false;
  }
  return true;
}

ClassificationData load_classification_csv(std::istream& in) {
  auto rows = read_csv(in);
  const auto& header = rows[0];
  size_t c_group = find_column(header, "group", true);
  size_t c_true = find_column(header, "y_true", true);
  size_t c_pred = find_column(header, "y_pred", true);
  size_t c_score = find_column(header, "score", false);
  bool has_score = c_score < header.size();

  ClassificationData data;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    size_t line = i + 1;
    if (row.size() != header.size()) csv_error(line, "wrong field count");
    ClassificationRecord r;
    r.group = row[c_group];
    r.y_true = parse_binary(row[c_true], line, "y_true");
    r.y_pred = parse_binary(row[c_pred], line, "y_pred");
    if (has_score && !row[c_score].empty()) {
      double s = parse_real(row[c_score], line, "score");
      if (s < 0.0 || s > 1.0)
        throw MetricError(MetricError::Code::Range,
                          "row " + std::to_string(line) + ", score: " + row[c_score] + " outside [0,1]");
      r.score = s;
    }
    data.push_back(std::move(r));
  }
  return data;
}

RegressionData load_regression_csv(std::istream& in) {
  auto rows = read_csv(in);
  const auto& header = rows[0];
  size_t c_true = find_column(header, "y_true", true);
  size_t c_pred = find_column(header, "y_pred", true);

  RegressionData data;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    size_t line = i + 1;
    if (row.size() != header.size()) csv_error(line, "wrong field count");
    data.push_back({parse_real(row[c_true], line, "y_true"), parse_real(row[c_pred], line, "y_pred")});
  }
  return data;
}

ClassificationData load_classification_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MetricError(MetricError::Code::Csv, "cannot open " + path);
  return load_classification_csv(in);
}

RegressionData load_regression_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MetricError(MetricError::Code::Csv, "cannot open " + path);
  return load_regression_csv(in);
}

ConfusionCounts confusion_counts(const ClassificationData& data,
                                 const std::optional<std::string>& group) {
  ConfusionCounts c = tally(data, group ? &*group : nullptr);
  if (group && c.total() == 0)
    throw MetricError(MetricError::Code::EmptySlice, "no records in group '" + *group + "'");
  return c;
}

MetricResult performance_metric(const std::string& name, const ClassificationData& data) {
  if (data.empty()) undefined(name + " undefined on empty data");
  MetricResult res{name, 0.0, "all", {}};
  ConfusionCounts c = tally(data, nullptr);
  if (name == "accuracy") {
    res.value = rate(c.tp + c.tn, c.total(), "accuracy");
  } else if (name == "precision") {
    res.value = rate(c.tp, c.tp + c.fp, "precision");
  } else if (name == "recall" || name == "sensitivity") {
    res.value = rate(c.tp, c.tp + c.fn, name);
  } else if (name == "specificity") {
    res.value = rate(c.tn, c.tn + c.fp, "specificity");
  } else if (name == "balanced_accuracy") {
    double tpr = rate(c.tp, c.tp + c.fn, "balanced_accuracy sensitivity");
    double tnr = rate(c.tn, c.tn + c.fp, "balanced_accuracy specificity");
    res.value = (tpr + tnr) / 2.0;
  } else if (name == "f1") {
    double p = rate(c.tp, c.tp + c.fp, "f1 precision");
    double r = rate(c.tp, c.tp + c.fn, "f1 recall");
    if (p + r == 0.0) undefined("f1 undefined: precision + recall is zero");
    res.value = 2.0 * p * r / (p + r);
  } else if (name == "auc") {
    res.value = auc_score(data);
  } else {
    require_supported(name);
    throw MetricError(MetricError::Code::NotSupported, name + " is not a classification metric");
  }
  return res;
}

MetricResult performance_metric(const std::string& name, const RegressionData& data) {
  if (data.empty()) undefined(name + " undefined on empty data");
  MetricResult res{name, 0.0, "all", {}};
  double acc = 0.0;
  if (name == "mse") {
    for (const auto& r : data) acc += (r.y_pred - r.y_true) * (r.y_pred - r.y_true);
  } else if (name == "mae") {
    for (const auto& r : data) acc += std::abs(r.y_pred - r.y_true);
  } else {
    require_supported(name);
    throw MetricError(MetricError::Code::NotSupported, name + " is not a regression metric");
  }
  res.value = acc / static_cast<double>(data.size());
  return res;
}

MetricResult fairness_metric(const std::string& name, const ClassificationData& data,
                             const std::string& group_a, const std::string& group_b) {
  Rates a{confusion_counts(data, group_a)};
  Rates b{confusion_counts(data, group_b)};
  MetricResult res{name, 0.0, group_a + " vs " + group_b, {}};

  if (name == "statistical_parity_difference") {
    res.value = std::abs(a.ppr(group_a) - b.ppr(group_b));
  } else if (name == "equal_opportunity_difference") {
    res.value = std::abs(a.tpr(group_a) - b.tpr(group_b));
  } else if (name == "predictive_equality_difference") {
    res.value = std::abs(a.fpr(group_a) - b.fpr(group_b));
  } else if (name == "equalized_odds") {
    res.value = std::max(std::abs(a.tpr(group_a) - b.tpr(group_b)),
                         std::abs(a.fpr(group_a) - b.fpr(group_b)));
  } else if (name == "predictive_parity_difference") {
    res.value = std::abs(a.ppv(group_a) - b.ppv(group_b));
  } else if (name == "conditional_use_accuracy_difference") {
    res.value = std::max(std::abs(a.ppv(group_a) - b.ppv(group_b)),
                         std::abs(a.npv(group_a) - b.npv(group_b)));
  } else if (name == "overall_accuracy_difference") {
    res.value = std::abs(a.acc(group_a) - b.acc(group_b));
  } else if (name == "treatment_equality_difference") {
    res.value = std::abs(a.fn_fp(group_a) - b.fn_fp(group_b));
  } else {
    require_supported(name);
    throw MetricError(MetricError::Code::NotSupported, name + " is not a fairness metric");
  }
  return res;
}

MetricResult calibration_metric(const std::string& name, const ClassificationData& data,
                                const CalibrationParams& params) {
  if (data.empty()) undefined(name + " undefined on empty data");
  auto scores = require_scores(data, name);
  MetricResult res{name, 0.0, "all", {}};
  double n = static_cast<double>(data.size());

  if (name == "brier") {
    double acc = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
      double d = scores[i] - static_cast<double>(data[i].y_true);
      acc += d * d;
    }
    res.value = acc / n;
  } else if (name == "nll") {
    double acc = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
      double s = std::clamp(scores[i], kNllClamp, 1.0 - kNllClamp);
      acc -= data[i].y_true == 1 ? std::log(s) : std::log(1.0 - s);
    }
    res.value = acc / n;
    res.params["clamp"] = "1e-12";
  } else if (name == "ece") {
    int bins = params.bins;
    if (bins < 1) throw MetricError(MetricError::Code::BadBinCount, "ece needs at least one bin");
    // Equal-width bins [k/B, (k+1)/B); the last bin is closed at 1.0.
    std::vector<long> count(bins, 0);
    std::vector<double> conf_sum(bins, 0.0), hit_sum(bins, 0.0);
    for (size_t i = 0; i < data.size(); ++i) {
      int b = static_cast<int>(scores[i] * bins);
      if (b == bins) b = bins - 1;
      count[b]++;
      conf_sum[b] += scores[i];
      hit_sum[b] += data[i].y_true == 1 ? 1.0 : 0.0;
    }
    double ece = 0.0;
    for (int b = 0; b < bins; ++b) {
      if (count[b] == 0) continue;
      double cb = static_cast<double>(count[b]);
      ece += (cb / n) * std::abs(conf_sum[b] / cb - hit_sum[b] / cb);
    }
    res.value = ece;
    res.params["bins"] = std::to_string(bins);
  } else {
    require_supported(name);
    throw MetricError(MetricError::Code::NotSupported, name + " is not a calibration metric");
  }
  return res;
}

const std::vector<MetricSpec>& metric_registry() {
  static const std::vector<MetricSpec> registry = {
      {"accuracy", MetricInputKind::Classification},
      {"precision", MetricInputKind::Classification},
      {"recall", MetricInputKind::Classification},
      {"sensitivity", MetricInputKind::Classification},
      {"specificity", MetricInputKind::Classification},
      {"balanced_accuracy", MetricInputKind::Classification},
      {"f1", MetricInputKind::Classification},
      {"auc", MetricInputKind::ClassificationScores},
      {"mse", MetricInputKind::Regression},
      {"mae", MetricInputKind::Regression},
      {"statistical_parity_difference", MetricInputKind::ClassificationGroups},
      {"equal_opportunity_difference", MetricInputKind::ClassificationGroups},
      {"predictive_equality_difference", MetricInputKind::ClassificationGroups},
      {"equalized_odds", MetricInputKind::ClassificationGroups},
      {"predictive_parity_difference", MetricInputKind::ClassificationGroups},
      {"conditional_use_accuracy_difference", MetricInputKind::ClassificationGroups},
      {"overall_accuracy_difference", MetricInputKind::ClassificationGroups},
      {"treatment_equality_difference", MetricInputKind::ClassificationGroups},
      {"ece", MetricInputKind::ClassificationScores},
      {"brier", MetricInputKind::ClassificationScores},
      {"nll", MetricInputKind::ClassificationScores},
  };
  return registry;
}

const MetricSpec* find_metric(const std::string& name) {
  for (const auto& spec : metric_registry())
    if (spec.name == name) return &spec;
  return nullptr;
}

void require_supported(const std::string& name) {
  if (find_metric(name)) return;
  // Names the catalog mentions for other task types; deliberately not
  // evaluated by this engine.
  static const std::vector<std::string> recognized = {
      "mrr", "mean_reciprocal_rank", "dcg", "discounted_cumulative_gain",
      "silhouette", "adjusted_mutual_information", "completeness",
      "psnr", "peak_signal_to_noise_ratio", "ssim", "structural_similarity",
      "miou", "mean_intersection_over_union", "perplexity", "bleu",
  };
  for (const auto& r : recognized) {
    if (r == name)
      throw MetricError(MetricError::Code::NotSupported,
                        "metric '" + name +
                            "' is recognized but not evaluated by this engine "
                            "(ranking/clustering/vision/NLP metrics are evidence-only)");
  }
  throw MetricError(MetricError::Code::NotSupported, "unknown metric '" + name + "'");
}

}  // namespace trustcat
