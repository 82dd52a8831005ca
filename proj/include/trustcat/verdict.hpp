#pragma once

#include <string>
#include <vector>

#include "trustcat/assessment.hpp"

namespace trustcat {

enum class RiskAreaStatus { Clean, WithDeviations };

// Clean iff every criterion is met and no deviation is recorded. Deviations
// never fail a risk area by themselves; they feed the dimension summary.
RiskAreaStatus risk_area_status(const OverallAssessmentRecord& oa);

struct VerdictError : std::runtime_error {
  enum class Code { SummaryMissing, Consistency, PreconditionViolated };
  VerdictError(Code c, std::string msg) : std::runtime_error(std::move(msg)), code(c) {}
  Code code;
};

// Returns the declared residual class for a medium/high dimension.
// Rejects a Negligible declaration when a risk area of the dimension carries
// deviations that the summary rationale does not mention.
ResidualClass dimension_summary_check(const AssessmentDocument& doc, Dimension dimension);

enum class VerdictOutcome { Trustworthy, TrustworthyWithResiduals, NotTrustworthy, NotAssessable };

struct Verdict {
  VerdictOutcome outcome = VerdictOutcome::NotAssessable;
  std::vector<std::pair<std::string, std::string>> blocking;            // (dimension, reason)
  std::vector<std::pair<std::string, std::string>> accepted_residuals;  // (dimension, tradeoff ref)
  std::vector<std::string> notes;  // warning-grade observations (prioritization checks)
  std::string narrative;
};

// Decision procedure over dimensions with a medium or high protection
// requirement; low dimensions are ignored entirely. The document must be
// free of error-grade lint findings.
Verdict cross_dimensional_verdict(const Catalog& c, const AssessmentDocument& doc);

const char* to_string(VerdictOutcome o);

}  // namespace trustcat
