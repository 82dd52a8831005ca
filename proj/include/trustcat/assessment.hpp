#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trustcat/catalog.hpp"
#include "trustcat/ids.hpp"
#include "trustcat/metrics.hpp"

namespace trustcat {

struct Evidence {
  RequirementType kind;
  std::string locator;      // path, URI or section; never empty
  std::string description;
};

struct MetricBinding {
  std::string metric_name;
  std::string dataset_ref;
  std::map<std::string, std::string> params;
  Interval target;
  std::optional<double> measured;
};

enum class ResponseStatus { Addressed, ByReference, NotApplicable };

struct ItemResponse {
  CatalogId item;
  ResponseStatus status = ResponseStatus::Addressed;
  std::optional<CatalogId> reference_target;  // ByReference only
  std::string justification;                  // NotApplicable only
  std::vector<Evidence> evidence;
  std::vector<MetricBinding> bindings;        // criterion items only
  std::string narrative;

  // A scaffolded placeholder: addressed but with no content yet.
  bool is_empty_stub() const;
};

enum class CriterionStatus { Met, PartiallyMet, NotMet };

struct OverallAssessmentRecord {
  Dimension dimension;
  std::string area;
  std::map<CatalogId, CriterionStatus, IdLess> criteria_status;
  std::vector<std::string> deviations;
  std::string conclusion;
};

enum class ResidualClass { Negligible, NonNegligibleAcceptable, Unacceptable };

struct DimensionSummaryRecord {
  Dimension dimension;
  ResidualClass residual_class = ResidualClass::Negligible;
  std::string rationale;  // never empty
  std::vector<Dimension> cross_dimension_effects;
};

struct TradeoffRecord {
  Dimension dimension_a;
  Dimension dimension_b;
  Dimension prioritized;  // one of the two
  std::string justification;
};

struct Signoff {
  std::string signer;
  std::string date;
  std::string statement;
};

struct ProtectionEntry {
  ProtectionLevel level = ProtectionLevel::Medium;
  std::string justification;
};

struct DocumentMeta {
  std::string name;
  std::string version;
  std::string assessor;
  std::string date;
};

struct AssessmentDocument {
  DocumentMeta meta;
  std::map<std::string, std::string> profile_answers;  // PF id -> answer text
  std::map<Dimension, ProtectionEntry> protection;
  std::vector<ItemResponse> responses;
  std::vector<OverallAssessmentRecord> overall;
  std::vector<DimensionSummaryRecord> summaries;
  std::vector<TradeoffRecord> tradeoffs;
  std::optional<Signoff> signoff;

  const ItemResponse* find_response(const CatalogId& id) const;
  const OverallAssessmentRecord* find_overall(Dimension d, const std::string& area) const;
  const DimensionSummaryRecord* find_summary(Dimension d) const;
  std::optional<ProtectionLevel> level_of(Dimension d) const;
};

struct DocumentError : std::runtime_error {
  enum class Code { Syntax, Schema, Invariant, MissingProtection };
  DocumentError(Code c, std::string msg) : std::runtime_error(std::move(msg)), code(c) {}
  Code code;
};

AssessmentDocument parse_document(std::istream& source);
AssessmentDocument parse_document_file(const std::string& path);
AssessmentDocument parse_document_string(const std::string& text);
std::string serialize_document(const AssessmentDocument& doc);

// Items the document must address given its protection levels: the AI
// profile, every protection-analysis item, all risk-area and summary items
// of medium/high dimensions, the cross-dimensional item, and, when safety
// is low but any error-interception measure of the reliability dimension is
// addressed, the whole functional-safety risk area.
// Throws DocumentError::MissingProtection when a dimension has no entry.
std::vector<CatalogId> required_items(const Catalog& c, const AssessmentDocument& doc);

enum class Severity { Warning, Error };

enum class LintRule {
  RequiredItemMissing,
  ResponseEmpty,
  EvidenceTypeMissing,
  ConditionalEvidenceAbsent,
  DanglingReference,
  UnknownItem,
  CriterionUnbound,
  MetricNotSupported,
  MetricOutsideTarget,
  DeviationUnrecorded,
  SummaryMissing,
  NotApplicableUnjustified,
  MetricEvaluationFailed,  // produced by binding evaluation, not static lint
};

struct Finding {
  LintRule rule;
  Severity severity;
  std::string item;  // canonical id, or a section label
  std::string message;
};

const char* to_string(LintRule r);
const char* to_string(Severity s);
const char* to_string(ResponseStatus s);
const char* to_string(CriterionStatus s);
const char* to_string(ResidualClass c);

// Deterministic, ordered completeness/conformance findings.
std::vector<Finding> lint(const Catalog& c, const AssessmentDocument& doc);

bool has_errors(const std::vector<Finding>& findings);

struct CoverageCounts {
  int required = 0, addressed = 0, by_reference = 0, not_applicable = 0, missing = 0;
  CoverageCounts& operator+=(const CoverageCounts& o);
};

struct CoverageRow {
  std::string label;  // "PF", dimension code, "<DIM>-R-<AREA>", "AT"
  CoverageCounts counts;
};

struct CoverageReport {
  std::vector<CoverageRow> sections;    // PF, six dimensions, AT
  std::vector<CoverageRow> risk_areas;  // per-area rows for gated-in areas
  CoverageCounts total;
};

CoverageReport coverage(const Catalog& c, const AssessmentDocument& doc);

}  // namespace trustcat
