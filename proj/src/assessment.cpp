#include "trustcat/assessment.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace trustcat {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw DocumentError(DocumentError::Code::Schema, "document: " + what);
}

[[noreturn]] void invariant_error(const std::string& what) {
  throw DocumentError(DocumentError::Code::Invariant, "document: " + what);
}

std::string opt_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return "";
  if (!j[key].is_string()) schema_error(std::string("field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

CatalogId id_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) schema_error(where + ": missing id field '" + key + "'");
  try {
    return parse_id(j[key].get<std::string>());
  } catch (const IdError& e) {
    schema_error(where + ": " + e.what());
  }
}

Dimension dimension_field(const json& j, const char* key, const std::string& where) {
  std::string code = opt_string(j, key);
  auto d = dimension_from_code(code);
  if (!d || *d == Dimension::PF || *d == Dimension::AT)
    schema_error(where + ": bad dimension code '" + code + "'");
  return *d;
}

RequirementType evidence_kind(const std::string& s, const std::string& where) {
  if (s == "Do") return RequirementType::Do;
  if (s == "Te") return RequirementType::Te;
  if (s == "Pr") return RequirementType::Pr;
  schema_error(where + ": unknown evidence kind '" + s + "'");
}

Interval interval_from(const json& j, const std::string& where) {
  if (!j.is_object()) schema_error(where + ": target must be an object");
  Interval iv;
  if (j.contains("min") && !j["min"].is_null()) iv.lower = j["min"].get<double>();
  if (j.contains("max") && !j["max"].is_null()) iv.upper = j["max"].get<double>();
  if (j.contains("min_closed")) iv.lower_closed = j["min_closed"].get<bool>();
  if (j.contains("max_closed")) iv.upper_closed = j["max_closed"].get<bool>();
  if (!iv.well_formed()) invariant_error(where + ": malformed target interval");
  return iv;
}

json interval_to(const Interval& iv) {
  json j;
  j["min"] = iv.lower ? json(*iv.lower) : json(nullptr);
  j["max"] = iv.upper ? json(*iv.upper) : json(nullptr);
  j["min_closed"] = iv.lower_closed;
  j["max_closed"] = iv.upper_closed;
  return j;
}

ResponseStatus status_from(const std::string& s, const std::string& where) {
  if (s == "addressed") return ResponseStatus::Addressed;
  if (s == "by_reference") return ResponseStatus::ByReference;
  if (s == "not_applicable") return ResponseStatus::NotApplicable;
  schema_error(where + ": unknown status '" + s + "'");
}

CriterionStatus criterion_status_from(const std::string& s, const std::string& where) {
  if (s == "met") return CriterionStatus::Met;
  if (s == "partially_met") return CriterionStatus::PartiallyMet;
  if (s == "not_met") return CriterionStatus::NotMet;
  schema_error(where + ": unknown criterion status '" + s + "'");
}

ResidualClass residual_class_from(const std::string& s, const std::string& where) {
  if (s == "negligible") return ResidualClass::Negligible;
  if (s == "non_negligible_acceptable") return ResidualClass::NonNegligibleAcceptable;
  if (s == "unacceptable") return ResidualClass::Unacceptable;
  schema_error(where + ": unknown residual class '" + s + "'");
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

bool ItemResponse::is_empty_stub() const {
  return status == ResponseStatus::Addressed && is_blank(narrative) && evidence.empty() &&
         bindings.empty();
}

const ItemResponse* AssessmentDocument::find_response(const CatalogId& id) const {
  for (const auto& r : responses)
    if (r.item == id) return &r;
  return nullptr;
}

const OverallAssessmentRecord* AssessmentDocument::find_overall(Dimension d,
                                                                const std::string& area) const {
  for (const auto& oa : overall)
    if (oa.dimension == d && oa.area == area) return &oa;
  return nullptr;
}

const DimensionSummaryRecord* AssessmentDocument::find_summary(Dimension d) const {
  for (const auto& s : summaries)
    if (s.dimension == d) return &s;
  return nullptr;
}

std::optional<ProtectionLevel> AssessmentDocument::level_of(Dimension d) const {
  auto it = protection.find(d);
  if (it == protection.end()) return std::nullopt;
  return it->second.level;
}

AssessmentDocument parse_document(std::istream& source) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    throw DocumentError(DocumentError::Code::Syntax, std::string("document: ") + e.what());
  }
  if (!j.is_object()) schema_error("top level is not an object");

  AssessmentDocument doc;
  if (j.contains("meta")) {
    const auto& m = j["meta"];
    doc.meta = {opt_string(m, "name"), opt_string(m, "version"), opt_string(m, "assessor"),
                opt_string(m, "date")};
  }
  if (j.contains("profile")) {
    if (!j["profile"].is_object()) schema_error("'profile' must be an object");
    for (const auto& [key, val] : j["profile"].items()) {
      CatalogId id;
      try {
        id = parse_id(key);
      } catch (const IdError& e) {
        schema_error(std::string("profile: ") + e.what());
      }
      if (id.category != Category::Topic) schema_error("profile keys must be PF topic ids, got " + key);
      doc.profile_answers[format_id(id)] = val.is_null() ? "" : val.get<std::string>();
    }
  }
  if (j.contains("protection")) {
    if (!j["protection"].is_object()) schema_error("'protection' must be an object");
    for (const auto& [key, val] : j["protection"].items()) {
      auto d = dimension_from_code(key);
      if (!d || *d == Dimension::PF || *d == Dimension::AT)
        schema_error("protection: bad dimension code '" + key + "'");
      ProtectionEntry entry;
      if (val.is_string()) {
        auto lv = protection_level_from(val.get<std::string>());
        if (!lv) schema_error("protection " + key + ": unknown level");
        entry.level = *lv;
      } else if (val.is_object()) {
        auto lv = protection_level_from(opt_string(val, "level"));
        if (!lv) schema_error("protection " + key + ": unknown level");
        entry.level = *lv;
        entry.justification = opt_string(val, "justification");
      } else {
        schema_error("protection " + key + ": expected string or object");
      }
      if (*d == Dimension::RE && entry.level == ProtectionLevel::Low)
        invariant_error("the reliability dimension cannot have a low protection requirement");
      doc.protection[*d] = entry;
    }
  }
  if (j.contains("responses")) {
    if (!j["responses"].is_array()) schema_error("'responses' must be an array");
    std::set<std::string> seen;
    for (const auto& rj : j["responses"]) {
      ItemResponse r;
      r.item = id_field(rj, "id", "response");
      std::string id_text = format_id(r.item);
      if (!seen.insert(id_text).second)
        invariant_error("more than one response for " + id_text);
      r.status = status_from(opt_string(rj, "status").empty() ? "addressed" : opt_string(rj, "status"),
                             id_text);
      if (r.status == ResponseStatus::ByReference) {
        r.reference_target = id_field(rj, "target", id_text);
        if (*r.reference_target == r.item)
          invariant_error(id_text + ": reference target must differ from the item");
      }
      r.justification = opt_string(rj, "justification");
      r.narrative = opt_string(rj, "narrative");
      if (rj.contains("evidence")) {
        for (const auto& ej : rj["evidence"]) {
          Evidence ev;
          ev.kind = evidence_kind(opt_string(ej, "kind"), id_text);
          ev.locator = opt_string(ej, "locator");
          ev.description = opt_string(ej, "description");
          if (is_blank(ev.locator)) invariant_error(id_text + ": evidence locator must not be empty");
          r.evidence.push_back(std::move(ev));
        }
      }
      if (rj.contains("bindings")) {
        for (const auto& bj : rj["bindings"]) {
          MetricBinding b;
          b.metric_name = opt_string(bj, "metric");
          if (b.metric_name.empty()) schema_error(id_text + ": binding without metric name");
          b.dataset_ref = opt_string(bj, "dataset");
          if (bj.contains("params")) {
            for (const auto& [pk, pv] : bj["params"].items())
              b.params[pk] = pv.is_string() ? pv.get<std::string>() : pv.dump();
          }
          if (!bj.contains("target")) schema_error(id_text + ": binding without target interval");
          b.target = interval_from(bj["target"], id_text);
          if (bj.contains("measured") && !bj["measured"].is_null())
            b.measured = bj["measured"].get<double>();
          r.bindings.push_back(std::move(b));
        }
      }
      doc.responses.push_back(std::move(r));
    }
  }
  if (j.contains("overall")) {
    if (!j["overall"].is_array()) schema_error("'overall' must be an array");
    for (const auto& oj : j["overall"]) {
      OverallAssessmentRecord oa;
      oa.dimension = dimension_field(oj, "dimension", "overall");
      oa.area = opt_string(oj, "area");
      const auto& codes = area_codes(oa.dimension);
      if (std::find(codes.begin(), codes.end(), oa.area) == codes.end())
        schema_error("overall: area '" + oa.area + "' is not a risk area of " +
                     dimension_code(oa.dimension));
      if (doc.find_overall(oa.dimension, oa.area))
        invariant_error("more than one overall assessment for " +
                        std::string(dimension_code(oa.dimension)) + "/" + oa.area);
      if (oj.contains("criteria")) {
        for (const auto& [ck, cv] : oj["criteria"].items()) {
          CatalogId cid;
          try {
            cid = parse_id(ck);
          } catch (const IdError& e) {
            schema_error(std::string("overall criteria: ") + e.what());
          }
          oa.criteria_status[cid] = criterion_status_from(cv.get<std::string>(), ck);
        }
      }
      if (oj.contains("deviations")) {
        for (const auto& dv : oj["deviations"]) oa.deviations.push_back(dv.get<std::string>());
      }
      oa.conclusion = opt_string(oj, "conclusion");
      doc.overall.push_back(std::move(oa));
    }
  }
  if (j.contains("summaries")) {
    if (!j["summaries"].is_array()) schema_error("'summaries' must be an array");
    for (const auto& sj : j["summaries"]) {
      DimensionSummaryRecord s;
      s.dimension = dimension_field(sj, "dimension", "summary");
      if (doc.find_summary(s.dimension))
        invariant_error(std::string("more than one summary for ") + dimension_code(s.dimension));
      s.residual_class = residual_class_from(opt_string(sj, "residual_class"), "summary");
      s.rationale = opt_string(sj, "rationale");
      if (is_blank(s.rationale))
        invariant_error(std::string("summary for ") + dimension_code(s.dimension) +
                        " must carry a rationale");
      if (sj.contains("cross_dimension_effects")) {
        for (const auto& c : sj["cross_dimension_effects"]) {
          auto d = dimension_from_code(c.get<std::string>());
          if (!d) schema_error("summary: bad cross-dimension code");
          s.cross_dimension_effects.push_back(*d);
        }
      }
      doc.summaries.push_back(std::move(s));
    }
  }
  if (j.contains("tradeoffs")) {
    if (!j["tradeoffs"].is_array()) schema_error("'tradeoffs' must be an array");
    for (const auto& tj : j["tradeoffs"]) {
      TradeoffRecord t;
      t.dimension_a = dimension_field(tj, "dimension_a", "tradeoff");
      t.dimension_b = dimension_field(tj, "dimension_b", "tradeoff");
      t.prioritized = dimension_field(tj, "prioritized", "tradeoff");
      t.justification = opt_string(tj, "justification");
      if (t.dimension_a == t.dimension_b)
        invariant_error("tradeoff endpoints must be two different dimensions");
      if (t.prioritized != t.dimension_a && t.prioritized != t.dimension_b)
        invariant_error("tradeoff must prioritize one of its endpoints");
      if (is_blank(t.justification)) invariant_error("tradeoff without justification");
      doc.tradeoffs.push_back(std::move(t));
    }
  }
  if (j.contains("signoff") && !j["signoff"].is_null()) {
    const auto& sj = j["signoff"];
    doc.signoff = Signoff{opt_string(sj, "signer"), opt_string(sj, "date"),
                          opt_string(sj, "statement")};
  }
  return doc;
}

AssessmentDocument parse_document_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError(DocumentError::Code::Syntax, "cannot open document: " + path);
  return parse_document(in);
}

AssessmentDocument parse_document_string(const std::string& text) {
  std::istringstream in(text);
  return parse_document(in);
}

std::string serialize_document(const AssessmentDocument& doc) {
  json j;
  j["meta"] = {{"name", doc.meta.name},
               {"version", doc.meta.version},
               {"assessor", doc.meta.assessor},
               {"date", doc.meta.date}};
  json prof = json::object();
  for (const auto& [id, text] : doc.profile_answers) prof[id] = text;
  j["profile"] = prof;
  json prot = json::object();
  for (const auto& [d, entry] : doc.protection)
    prot[dimension_code(d)] = {{"level", to_string(entry.level)},
                               {"justification", entry.justification}};
  j["protection"] = prot;
  json responses = json::array();
  for (const auto& r : doc.responses) {
    json rj;
    rj["id"] = format_id(r.item);
    rj["status"] = to_string(r.status);
    if (r.reference_target) rj["target"] = format_id(*r.reference_target);
    if (!r.justification.empty()) rj["justification"] = r.justification;
    rj["narrative"] = r.narrative;
    if (!r.evidence.empty()) {
      json evs = json::array();
      for (const auto& ev : r.evidence)
        evs.push_back({{"kind", to_string(ev.kind)},
                       {"locator", ev.locator},
                       {"description", ev.description}});
      rj["evidence"] = evs;
    }
    if (!r.bindings.empty()) {
      json bs = json::array();
      for (const auto& b : r.bindings) {
        json bj;
        bj["metric"] = b.metric_name;
        bj["dataset"] = b.dataset_ref;
        if (!b.params.empty()) bj["params"] = b.params;
        bj["target"] = interval_to(b.target);
        if (b.measured) bj["measured"] = *b.measured;
        bs.push_back(bj);
      }
      rj["bindings"] = bs;
    }
    responses.push_back(rj);
  }
  j["responses"] = responses;
  json overall = json::array();
  for (const auto& oa : doc.overall) {
    json oj;
    oj["dimension"] = dimension_code(oa.dimension);
    oj["area"] = oa.area;
    json crit = json::object();
    for (const auto& [id, st] : oa.criteria_status) crit[format_id(id)] = to_string(st);
    oj["criteria"] = crit;
    oj["deviations"] = oa.deviations;
    oj["conclusion"] = oa.conclusion;
    overall.push_back(oj);
  }
  j["overall"] = overall;
  json summaries = json::array();
  for (const auto& s : doc.summaries) {
    json sj;
    sj["dimension"] = dimension_code(s.dimension);
    sj["residual_class"] = to_string(s.residual_class);
    sj["rationale"] = s.rationale;
    json effects = json::array();
    for (auto d : s.cross_dimension_effects) effects.push_back(dimension_code(d));
    sj["cross_dimension_effects"] = effects;
    summaries.push_back(sj);
  }
  j["summaries"] = summaries;
  json tradeoffs = json::array();
  for (const auto& t : doc.tradeoffs)
    tradeoffs.push_back({{"dimension_a", dimension_code(t.dimension_a)},
                         {"dimension_b", dimension_code(t.dimension_b)},
                         {"prioritized", dimension_code(t.prioritized)},
                         {"justification", t.justification}});
  j["tradeoffs"] = tradeoffs;
  if (doc.signoff) {
    j["signoff"] = {{"signer", doc.signoff->signer},
                    {"date", doc.signoff->date},
                    {"statement", doc.signoff->statement}};
  } else {
    j["signoff"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::vector<CatalogId> required_items(const Catalog& c, const AssessmentDocument& doc) {
  for (const auto& dim : c.dimensions) {
    if (!doc.protection.count(dim.code))
      throw DocumentError(DocumentError::Code::MissingProtection,
                          std::string("no protection entry for dimension ") +
                              dimension_code(dim.code));
  }

  std::vector<CatalogId> out;
  for (const auto& item : c.profile) out.push_back(item.id);
  for (const auto& dim : c.dimensions) {
    out.push_back(dim.protection_item.id);
    ProtectionLevel level = doc.protection.at(dim.code).level;
    if (level != ProtectionLevel::Low) {
      for (const auto& ra : dim.risk_areas)
        for (const auto& item : ra.items) out.push_back(item.id);
      out.push_back(dim.summary_item.id);
    }
  }

  // Safety exception: a low safety level still requires the functional-safety
  // risk area once error-interception measures at model level are addressed.
  // An empty scaffold stub is a placeholder, not a taken measure, and does
  // not trigger the exception.
  if (doc.protection.at(Dimension::S).level == ProtectionLevel::Low) {
    bool im_measure_addressed = false;
    for (const auto& r : doc.responses) {
      const auto& id = r.item;
      if (id.dimension == Dimension::RE && id.category == Category::RiskArea && id.area &&
          *id.area == "IM" && id.aspect == Aspect::ME &&
          r.status == ResponseStatus::Addressed && !r.is_empty_stub()) {
        im_measure_addressed = true;
        break;
      }
    }
    if (im_measure_addressed) {
      const DimensionSpec* s_dim = c.find_dimension(Dimension::S);
      for (const auto& ra : s_dim->risk_areas) {
        if (ra.code != "FS") continue;
        for (const auto& item : ra.items) out.push_back(item.id);
      }
    }
  }

  out.push_back(c.at_item.id);
  std::sort(out.begin(), out.end(), IdLess{});
  return out;
}

namespace {

struct LintContext {
  const Catalog& catalog;
  const AssessmentDocument& doc;
  std::set<std::string> required;  // canonical ids
  std::vector<Finding> findings;

  bool is_required(const CatalogId& id) const { return required.count(format_id(id)) > 0; }

  void add(LintRule rule, Severity sev, const CatalogId& id, std::string message) {
    findings.push_back({rule, sev, format_id(id), std::move(message)});
  }
  void add(LintRule rule, Severity sev, std::string label, std::string message) {
    findings.push_back({rule, sev, std::move(label), std::move(message)});
  }

  // Findings on voluntary responses (items outside the required set) are
  // advisory only.
  Severity graded(const CatalogId& id, Severity sev) const {
    return is_required(id) ? sev : Severity::Warning;
  }
};

// Follows by-reference chains; valid only if the chain ends in an addressed
// response. Cycles and missing targets are reference defects.
void check_reference(LintContext& ctx, const ItemResponse& r) {
  std::set<std::string> visited = {format_id(r.item)};
  const ItemResponse* cur = &r;
  while (cur->status == ResponseStatus::ByReference) {
    const CatalogId& target = *cur->reference_target;
    std::string target_text = format_id(target);
    if (!ctx.catalog.find(target)) {
      ctx.add(LintRule::DanglingReference, ctx.graded(r.item, Severity::Error), r.item,
              "reference target " + target_text + " is not in the catalog");
      return;
    }
    if (!visited.insert(target_text).second) {
      ctx.add(LintRule::DanglingReference, ctx.graded(r.item, Severity::Error), r.item,
              "reference cycle through " + target_text);
      return;
    }
    const ItemResponse* next = ctx.doc.find_response(target);
    if (!next || next->status == ResponseStatus::NotApplicable) {
      ctx.add(LintRule::DanglingReference, ctx.graded(r.item, Severity::Error), r.item,
              "reference target " + target_text + " is not itself addressed");
      return;
    }
    cur = next;
  }
}

void check_evidence(LintContext& ctx, const ItemResponse& r, const CatalogItem& item) {
  for (const auto& req : item.requirements) {
    bool have = std::any_of(r.evidence.begin(), r.evidence.end(),
                            [&](const Evidence& ev) { return ev.kind == req.type; });
    if (have) continue;
    if (req.conditional) {
      ctx.add(LintRule::ConditionalEvidenceAbsent, Severity::Warning, r.item,
              std::string("no ") + to_string(req.type) +
                  " evidence for a conditional requirement of this measure");
    } else {
      ctx.add(LintRule::EvidenceTypeMissing, ctx.graded(r.item, Severity::Error), r.item,
              std::string("measure requires ") + to_string(req.type) +
                  " evidence but the response carries none");
    }
  }
}

void check_bindings(LintContext& ctx, const ItemResponse& r) {
  for (const auto& b : r.bindings) {
    if (!find_metric(b.metric_name)) {
      ctx.add(LintRule::MetricNotSupported, Severity::Error, r.item,
              "binding names metric '" + b.metric_name + "' which the engine does not evaluate");
      continue;
    }
    if (!b.measured) continue;
    if (check_interval(*b.measured, b.target)) continue;
    // Outside target: only a defect when the overall assessment still claims Met.
    if (r.item.category != Category::RiskArea || !r.item.area) continue;
    const OverallAssessmentRecord* oa = ctx.doc.find_overall(r.item.dimension, *r.item.area);
    if (!oa) continue;
    auto it = oa->criteria_status.find(r.item);
    if (it != oa->criteria_status.end() && it->second == CriterionStatus::Met) {
      std::ostringstream msg;
      msg << "measured " << *b.measured << " for '" << b.metric_name
          << "' is outside the target interval, yet the overall assessment claims the criterion is met";
      ctx.add(LintRule::MetricOutsideTarget, ctx.graded(r.item, Severity::Error), r.item, msg.str());
    }
  }
}

int rule_order(LintRule r) { return static_cast<int>(r); }

}  // namespace

const char* to_string(LintRule r) {
  switch (r) {
    case LintRule::RequiredItemMissing: return "RequiredItemMissing";
    case LintRule::ResponseEmpty: return "ResponseEmpty";
    case LintRule::EvidenceTypeMissing: return "EvidenceTypeMissing";
    case LintRule::ConditionalEvidenceAbsent: return "ConditionalEvidenceAbsent";
    case LintRule::DanglingReference: return "DanglingReference";
    case LintRule::UnknownItem: return "UnknownItem";
    case LintRule::CriterionUnbound: return "CriterionUnbound";
    case LintRule::MetricNotSupported: return "MetricNotSupported";
    case LintRule::MetricOutsideTarget: return "MetricOutsideTarget";
    case LintRule::DeviationUnrecorded: return "DeviationUnrecorded";
    case LintRule::SummaryMissing: return "SummaryMissing";
    case LintRule::NotApplicableUnjustified: return "NotApplicableUnjustified";
    case LintRule::MetricEvaluationFailed: return "MetricEvaluationFailed";
  }
  return "?";
}

const char* to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

const char* to_string(ResponseStatus s) {
  switch (s) {
    case ResponseStatus::Addressed: return "addressed";
    case ResponseStatus::ByReference: return "by_reference";
    case ResponseStatus::NotApplicable: return "not_applicable";
  }
  return "?";
}

const char* to_string(CriterionStatus s) {
  switch (s) {
    case CriterionStatus::Met: return "met";
    case CriterionStatus::PartiallyMet: return "partially_met";
    case CriterionStatus::NotMet: return "not_met";
  }
  return "?";
}

const char* to_string(ResidualClass c) {
  switch (c) {
    case ResidualClass::Negligible: return "negligible";
    case ResidualClass::NonNegligibleAcceptable: return "non_negligible_acceptable";
    case ResidualClass::Unacceptable: return "unacceptable";
  }
  return "?";
}

bool has_errors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::Error; });
}

std::vector<Finding> lint(const Catalog& c, const AssessmentDocument& doc) {
  LintContext ctx{c, doc, {}, {}};
  for (const auto& id : required_items(c, doc)) ctx.required.insert(format_id(id));

  // required-item coverage: profile questions answer via the profile map or a
  // response; everything else needs a response
  for (const auto& id_text : ctx.required) {
    CatalogId id = parse_id(id_text);
    const ItemResponse* r = doc.find_response(id);
    if (id.category == Category::Topic) {
      auto it = doc.profile_answers.find(id_text);
      bool answered = it != doc.profile_answers.end();
      if (!answered && !r) {
        ctx.add(LintRule::RequiredItemMissing, Severity::Error, id,
                "required profile question has no answer");
      } else if (!r && answered && is_blank(it->second)) {
        ctx.add(LintRule::ResponseEmpty, Severity::Warning, id, "stub present, content empty");
      }
      continue;
    }
    if (!r) {
      ctx.add(LintRule::RequiredItemMissing, Severity::Error, id,
              "required item has no response");
    }
  }

  for (const auto& r : doc.responses) {
    const CatalogItem* item = c.find(r.item);
    if (!item) {
      ctx.add(LintRule::UnknownItem, Severity::Error, r.item,
              "response references an id that is not in the catalog");
      continue;
    }
    check_bindings(ctx, r);
    switch (r.status) {
      case ResponseStatus::Addressed:
        if (r.is_empty_stub()) {
          ctx.add(LintRule::ResponseEmpty, Severity::Warning, r.item,
                  "stub present, content empty");
          break;
        }
        if (item->kind == ItemKind::Measure) check_evidence(ctx, r, *item);
        if (item->kind == ItemKind::Criterion && r.bindings.empty() && is_blank(r.narrative)) {
          ctx.add(LintRule::CriterionUnbound, Severity::Warning, r.item,
                  "criterion has neither a metric binding nor a qualitative justification");
        }
        break;
      case ResponseStatus::ByReference:
        check_reference(ctx, r);
        break;
      case ResponseStatus::NotApplicable:
        if (is_blank(r.justification)) {
          ctx.add(LintRule::NotApplicableUnjustified, Severity::Error, r.item,
                  "not-applicable response without justification");
        }
        break;
    }
  }

  // structured records
  for (const auto& oa : doc.overall) {
    bool any_unmet = false;
    for (const auto& [id, st] : oa.criteria_status)
      if (st != CriterionStatus::Met) any_unmet = true;
    if (any_unmet && oa.deviations.empty()) {
      ctx.add(LintRule::DeviationUnrecorded, Severity::Error,
              std::string(dimension_code(oa.dimension)) + "-R-" + oa.area,
              "criteria not fully met but no deviation is recorded");
    }
  }
  for (const auto& dim : c.dimensions) {
    auto level = doc.level_of(dim.code);
    if (!level || *level == ProtectionLevel::Low) continue;
    if (!doc.find_summary(dim.code)) {
      ctx.add(LintRule::SummaryMissing, Severity::Error, format_id(dim.summary_item.id),
              "dimension with medium/high protection requirement lacks a summary record");
    }
  }

  std::sort(ctx.findings.begin(), ctx.findings.end(), [](const Finding& a, const Finding& b) {
    auto key = [](const Finding& f) {
      CatalogId id;
      bool parses = true;
      try {
        id = parse_id(f.item);
      } catch (const IdError&) {
        parses = false;
      }
      return std::make_tuple(parses ? 0 : 1, id, rule_order(f.rule), f.item, f.message);
    };
    auto ka = key(a), kb = key(b);
    if (std::get<0>(ka) != std::get<0>(kb)) return std::get<0>(ka) < std::get<0>(kb);
    if (!(std::get<1>(ka) == std::get<1>(kb)))
      return order_ids(std::get<1>(ka), std::get<1>(kb)) == std::strong_ordering::less;
    return std::tie(std::get<2>(ka), std::get<3>(ka), std::get<4>(ka)) <
           std::tie(std::get<2>(kb), std::get<3>(kb), std::get<4>(kb));
  });
  return ctx.findings;
}

CoverageCounts& CoverageCounts::operator+=(const CoverageCounts& o) {
  required += o.required;
  addressed += o.addressed;
  by_reference += o.by_reference;
  not_applicable += o.not_applicable;
  missing += o.missing;
  return *this;
}

CoverageReport coverage(const Catalog& c, const AssessmentDocument& doc) {
  auto required = required_items(c, doc);

  auto classify = [&](const CatalogId& id, CoverageCounts& counts) {
    counts.required++;
    if (id.category == Category::Topic) {
      auto it = doc.profile_answers.find(format_id(id));
      const ItemResponse* r = doc.find_response(id);
      if (r ? r->status == ResponseStatus::Addressed : (it != doc.profile_answers.end()))
        counts.addressed++;
      else if (r && r->status == ResponseStatus::ByReference)
        counts.by_reference++;
      else if (r && r->status == ResponseStatus::NotApplicable)
        counts.not_applicable++;
      else
        counts.missing++;
      return;
    }
    const ItemResponse* r = doc.find_response(id);
    if (!r) {
      counts.missing++;
    } else if (r->status == ResponseStatus::Addressed) {
      counts.addressed++;
    } else if (r->status == ResponseStatus::ByReference) {
      counts.by_reference++;
    } else {
      counts.not_applicable++;
    }
  };

  CoverageReport report;
  std::map<std::string, CoverageCounts> sections;  // insertion handled below
  std::map<std::string, CoverageCounts> areas;
  std::vector<std::string> section_order = {"PF"};
  for (const auto& dim : c.dimensions) section_order.push_back(dimension_code(dim.code));
  section_order.push_back("AT");
  std::vector<std::string> area_order;

  for (const auto& id : required) {
    std::string section;
    if (id.dimension == Dimension::PF) section = "PF";
    else if (id.dimension == Dimension::AT) section = "AT";
    else section = dimension_code(id.dimension);
    classify(id, sections[section]);
    if (id.category == Category::RiskArea && id.area) {
      std::string label = section + "-R-" + *id.area;
      if (!areas.count(label)) area_order.push_back(label);
      classify(id, areas[label]);
    }
  }
  for (auto& [label, counts] : sections) report.total += counts;

  for (const auto& label : section_order) {
    if (sections.count(label)) report.sections.push_back({label, sections[label]});
  }
  for (const auto& label : area_order) report.risk_areas.push_back({label, areas[label]});
  return report;
}

}  // namespace trustcat
