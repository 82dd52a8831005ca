#include "trustcat/verdict.hpp"

#include <algorithm>
#include <sstream>

namespace trustcat {

RiskAreaStatus risk_area_status(const OverallAssessmentRecord& oa) {
  for (const auto& [id, st] : oa.criteria_status)
    if (st != CriterionStatus::Met) return RiskAreaStatus::WithDeviations;
  if (!oa.deviations.empty()) return RiskAreaStatus::WithDeviations;
  return RiskAreaStatus::Clean;
}

ResidualClass dimension_summary_check(const AssessmentDocument& doc, Dimension dimension) {
  auto level = doc.level_of(dimension);
  if (!level || *level == ProtectionLevel::Low) {
    throw VerdictError(VerdictError::Code::PreconditionViolated,
                       std::string("dimension ") + dimension_code(dimension) +
                           " is not gated in (low or missing protection level)");
  }
  const DimensionSummaryRecord* summary = doc.find_summary(dimension);
  if (!summary) {
    throw VerdictError(VerdictError::Code::SummaryMissing,
                       std::string("no summary record for dimension ") + dimension_code(dimension));
  }
  if (summary->residual_class == ResidualClass::Negligible) {
    // A negligible classification must account for every recorded deviation.
    for (const auto& oa : doc.overall) {
      if (oa.dimension != dimension) continue;
      if (risk_area_status(oa) != RiskAreaStatus::WithDeviations) continue;
      for (const auto& dev : oa.deviations) {
        if (summary->rationale.find(dev) == std::string::npos) {
          throw VerdictError(VerdictError::Code::Consistency,
                             std::string("dimension ") + dimension_code(dimension) +
                                 " declares negligible residual risk but risk area " + oa.area +
                                 " has an unmentioned deviation: " + dev);
        }
      }
    }
  }
  return summary->residual_class;
}

const char* to_string(VerdictOutcome o) {
  switch (o) {
    case VerdictOutcome::Trustworthy: return "trustworthy";
    case VerdictOutcome::TrustworthyWithResiduals: return "trustworthy_with_residuals";
    case VerdictOutcome::NotTrustworthy: return "not_trustworthy";
    case VerdictOutcome::NotAssessable: return "not_assessable";
  }
  return "?";
}

Verdict cross_dimensional_verdict(const Catalog& c, const AssessmentDocument& doc) {
  if (has_errors(lint(c, doc))) {
    throw VerdictError(VerdictError::Code::PreconditionViolated,
                       "document has error-grade findings; resolve them before the verdict");
  }

  Verdict v;
  struct Entry {
    Dimension dim;
    ProtectionLevel level;
    ResidualClass cls;
  };
  std::vector<Entry> gated;
  for (const auto& dim : c.dimensions) {
    ProtectionLevel level = doc.protection.at(dim.code).level;
    if (level == ProtectionLevel::Low) continue;
    const DimensionSummaryRecord* summary = doc.find_summary(dim.code);
    if (!summary) {
      throw VerdictError(VerdictError::Code::SummaryMissing,
                         std::string("no summary record for dimension ") + dimension_code(dim.code));
    }
    gated.push_back({dim.code, level, summary->residual_class});
  }

  // 1. any unacceptable residual risk blocks trustworthiness outright
  for (const auto& e : gated) {
    if (e.cls == ResidualClass::Unacceptable) {
      v.blocking.emplace_back(dimension_code(e.dim),
                              "unacceptable residual risk declared in the dimension summary");
    }
  }
  if (!v.blocking.empty()) {
    v.outcome = VerdictOutcome::NotTrustworthy;
    v.narrative = "The application must not be deemed trustworthy: at least one dimension with a "
                  "medium or high protection requirement concluded that unacceptable residual "
                  "risks exist.";
    return v;
  }

  // 2. all negligible
  bool all_negligible = std::all_of(gated.begin(), gated.end(), [](const Entry& e) {
    return e.cls == ResidualClass::Negligible;
  });
  if (all_negligible) {
    v.outcome = VerdictOutcome::Trustworthy;
    v.narrative = "Every dimension with a medium or high protection requirement concluded that "
                  "the residual risks are negligible.";
    return v;
  }

  // 3. non-negligible residuals need a covering trade-off and a sign-off
  for (const auto& e : gated) {
    if (e.cls != ResidualClass::NonNegligibleAcceptable) continue;
    const TradeoffRecord* cover = nullptr;
    for (const auto& t : doc.tradeoffs) {
      if (t.dimension_a == e.dim || t.dimension_b == e.dim) {
        cover = &t;
        break;
      }
    }
    if (!cover) {
      v.blocking.emplace_back(dimension_code(e.dim),
                              "non-negligible residual risk is not covered by any trade-off record");
      continue;
    }
    std::string ref = std::string(dimension_code(cover->dimension_a)) + "/" +
                      dimension_code(cover->dimension_b) + " prioritizing " +
                      dimension_code(cover->prioritized);
    v.accepted_residuals.emplace_back(dimension_code(e.dim), ref);

    // The justification has to weigh the protection requirements; flag
    // deprioritizing a high-requirement dimension in favor of a medium one.
    Dimension other = cover->prioritized == cover->dimension_a ? cover->dimension_b
                                                               : cover->dimension_a;
    auto level_of = [&](Dimension d) -> std::optional<ProtectionLevel> {
      auto it = doc.protection.find(d);
      if (it == doc.protection.end()) return std::nullopt;
      return it->second.level;
    };
    auto lp = level_of(cover->prioritized);
    auto lo = level_of(other);
    if (lo && lp && *lo == ProtectionLevel::High && *lp == ProtectionLevel::Medium) {
      std::ostringstream note;
      note << "trade-off " << ref << " deprioritizes " << dimension_code(other)
           << " (high protection requirement) in favor of a medium-requirement dimension; "
              "the justification must take the protection requirements into account";
      v.notes.push_back(note.str());
    }
  }
  if (!doc.signoff) {
    v.blocking.emplace_back("AT", "non-negligible residual risks require a recorded sign-off");
  }
  if (!v.blocking.empty()) {
    v.outcome = VerdictOutcome::NotTrustworthy;
    v.narrative = "Non-negligible residual risks remain that are not plausibly justified as "
                  "unavoidable trade-offs; the application should not be classified as trustworthy.";
    return v;
  }
  v.outcome = VerdictOutcome::TrustworthyWithResiduals;
  v.narrative = "All remaining residual risks are accepted as barely avoidable conflicting "
                "objectives between dimensions, with the chosen prioritization explained; the "
                "application is judged trustworthy despite non-negligible residual risks.";
  return v;
}

}  // namespace trustcat
