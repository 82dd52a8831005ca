#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trustcat/assessment.hpp"
#include "trustcat/verdict.hpp"

namespace trustcat {

struct ReportError : std::runtime_error {
  enum class Code { DatasetUnresolved, BadLevels };
  ReportError(Code c, std::string msg) : std::runtime_error(std::move(msg)), code(c) {}
  Code code;
};

// Document skeleton for the given protection levels: protection entries, one
// empty response stub per required item (profile stubs live in the profile
// map), and empty overall-assessment/summary records for every gated-in
// dimension. Levels must cover all six dimensions and reliability may not be
// low.
AssessmentDocument scaffold(const Catalog& c,
                            const std::map<Dimension, ProtectionLevel>& levels);

// Fills each binding's measured value from the named CSV datasets
// (dataset_ref -> file path). Evaluation failures become findings; an
// unresolvable dataset reference is an error.
struct EvaluationOutcome {
  AssessmentDocument doc;
  std::vector<Finding> findings;
};
EvaluationOutcome evaluate_bindings(const Catalog& c, const AssessmentDocument& doc,
                                    const std::map<std::string, std::string>& datasets);

enum class ReportFormat { Markdown, Json };

struct ReportOptions {
  ReportFormat format = ReportFormat::Markdown;
  std::optional<std::string> date;  // echoed verbatim; reports carry no clock
};

std::string engine_version();

// Deterministic report mirroring the catalog's chapter structure.
std::string render_report(const Catalog& c, const AssessmentDocument& doc,
                          const std::vector<Finding>& findings, const Verdict& verdict,
                          const ReportOptions& options = {});

}  // namespace trustcat
