#include "trustcat/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

namespace trustcat {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_interval(const Interval& iv) {
  std::string out = iv.lower_closed && iv.lower ? "[" : "(";
  out += iv.lower ? fmt_double(*iv.lower) : "-inf";
  out += ", ";
  out += iv.upper ? fmt_double(*iv.upper) : "inf";
  out += iv.upper_closed && iv.upper ? "]" : ")";
  return out;
}

struct ItemRow {
  std::string id;
  std::string title;
  std::string status;
  std::string evidence;                 // kinds, e.g. "Do, Te"
  std::vector<std::string> metric_cells;  // "name = v in [a, b]: ok"
  json metrics_json = json::array();
};

std::string response_status_text(const AssessmentDocument& doc, const CatalogId& id) {
  if (id.category == Category::Topic) {
    const ItemResponse* r = doc.find_response(id);
    if (r) return r->is_empty_stub() ? "stub" : "answered";
    auto it = doc.profile_answers.find(format_id(id));
    if (it == doc.profile_answers.end()) return "missing";
    return it->second.empty() ? "stub" : "answered";
  }
  const ItemResponse* r = doc.find_response(id);
  if (!r) return "missing";
  switch (r->status) {
    case ResponseStatus::Addressed:
      return r->is_empty_stub() ? "stub" : "addressed";
    case ResponseStatus::ByReference:
      return "by reference -> " + format_id(*r->reference_target);
    case ResponseStatus::NotApplicable:
      return "not applicable";
  }
  return "?";
}

ItemRow make_row(const AssessmentDocument& doc, const CatalogItem& item) {
  ItemRow row;
  row.id = format_id(item.id);
  row.title = item.title;
  row.status = response_status_text(doc, item.id);
  const ItemResponse* r = doc.find_response(item.id);
  if (r) {
    std::set<std::string> kinds;
    for (const auto& ev : r->evidence) kinds.insert(to_string(ev.kind));
    std::string ev_text;
    for (const auto& k : kinds) {
      if (!ev_text.empty()) ev_text += ", ";
      ev_text += k;
    }
    row.evidence = ev_text;
    for (const auto& b : r->bindings) {
      std::string cell = b.metric_name;
      json mj;
      mj["metric"] = b.metric_name;
      mj["target"] = fmt_interval(b.target);
      if (b.measured) {
        bool ok = check_interval(*b.measured, b.target);
        cell += " = " + fmt_double(*b.measured) + " in " + fmt_interval(b.target) +
                (ok ? ": ok" : ": FAIL");
        mj["measured"] = *b.measured;
        mj["pass"] = ok;
      } else {
        cell += " (not evaluated) target " + fmt_interval(b.target);
        mj["measured"] = nullptr;
        mj["pass"] = nullptr;
      }
      row.metric_cells.push_back(cell);
      row.metrics_json.push_back(mj);
    }
  }
  return row;
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out.push_back(c);
  }
  return out;
}

void md_item_table(std::ostringstream& md, const std::vector<ItemRow>& rows) {
  md << "| Id | Title | Status | Evidence | Metrics |\n";
  md << "|---|---|---|---|---|\n";
  for (const auto& row : rows) {
    std::string metrics;
    for (const auto& cell : row.metric_cells) {
      if (!metrics.empty()) metrics += "; ";
      metrics += cell;
    }
    md << "| " << row.id << " | " << md_escape(row.title) << " | " << md_escape(row.status)
       << " | " << row.evidence << " | " << md_escape(metrics) << " |\n";
  }
}

json row_to_json(const ItemRow& row) {
  json j;
  j["id"] = row.id;
  j["title"] = row.title;
  j["status"] = row.status;
  j["evidence"] = row.evidence;
  j["metrics"] = row.metrics_json;
  return j;
}

}  // namespace

std::string engine_version() { return TRUSTCAT_VERSION; }

AssessmentDocument scaffold(const Catalog& c,
                            const std::map<Dimension, ProtectionLevel>& levels) {
  for (const auto& dim : c.dimensions) {
    if (!levels.count(dim.code))
      throw ReportError(ReportError::Code::BadLevels,
                        std::string("no protection level for dimension ") +
                            dimension_code(dim.code));
  }
  auto re = levels.find(Dimension::RE);
  if (re != levels.end() && re->second == ProtectionLevel::Low) {
    throw DocumentError(DocumentError::Code::Invariant,
                        "the reliability dimension cannot have a low protection requirement");
  }

  AssessmentDocument doc;
  doc.meta.version = "0.1";
  for (const auto& [d, level] : levels) doc.protection[d] = {level, "(to be completed)"};

  for (const auto& id : required_items(c, doc)) {
    if (id.category == Category::Topic) {
      doc.profile_answers[format_id(id)] = "";
      continue;
    }
    ItemResponse r;
    r.item = id;
    r.status = ResponseStatus::Addressed;
    doc.responses.push_back(std::move(r));
  }
  for (const auto& dim : c.dimensions) {
    if (levels.at(dim.code) == ProtectionLevel::Low) continue;
    for (const auto& ra : dim.risk_areas)
      doc.overall.push_back({dim.code, ra.code, {}, {}, ""});
    doc.summaries.push_back({dim.code, ResidualClass::Negligible, "(to be completed)", {}});
  }
  return doc;
}

EvaluationOutcome evaluate_bindings(const Catalog&, const AssessmentDocument& doc,
                                    const std::map<std::string, std::string>& datasets) {
  EvaluationOutcome out{doc, {}};

  std::map<std::string, ClassificationData> class_cache;
  std::map<std::string, RegressionData> regr_cache;

  auto dataset_path = [&](const std::string& ref) -> const std::string& {
    auto it = datasets.find(ref);
    if (it == datasets.end())
      throw ReportError(ReportError::Code::DatasetUnresolved,
                        "no dataset supplied for reference '" + ref + "'");
    return it->second;
  };

  for (auto& r : out.doc.responses) {
    for (auto& b : r.bindings) {
      std::string id_text = format_id(r.item);
      const MetricSpec* spec = find_metric(b.metric_name);
      if (!spec) {
        std::string message;
        try {
          require_supported(b.metric_name);
          message = "metric '" + b.metric_name + "' is not registered";
        } catch (const MetricError& e) {
          message = e.what();
        }
        out.findings.push_back({LintRule::MetricNotSupported, Severity::Error, id_text, message});
        continue;
      }
      try {
        const std::string& path = dataset_path(b.dataset_ref);
        MetricResult result;
        if (spec->input == MetricInputKind::Regression) {
          if (!regr_cache.count(path)) regr_cache[path] = load_regression_file(path);
          result = performance_metric(b.metric_name, regr_cache[path]);
        } else {
          if (!class_cache.count(path)) class_cache[path] = load_classification_file(path);
          const ClassificationData& data = class_cache[path];
          if (spec->input == MetricInputKind::ClassificationGroups) {
            auto ga = b.params.find("group_a");
            auto gb = b.params.find("group_b");
            if (ga == b.params.end() || gb == b.params.end())
              throw MetricError(MetricError::Code::BadParams,
                                b.metric_name + " needs group_a and group_b parameters");
            result = fairness_metric(b.metric_name, data, ga->second, gb->second);
          } else if (b.metric_name == "ece" || b.metric_name == "brier" || b.metric_name == "nll") {
            CalibrationParams params;
            auto bins = b.params.find("bins");
            if (bins != b.params.end()) {
              try {
                params.bins = std::stoi(bins->second);
              } catch (const std::exception&) {
                throw MetricError(MetricError::Code::BadParams,
                                  "bad bins parameter '" + bins->second + "'");
              }
            }
            result = calibration_metric(b.metric_name, data, params);
          } else {
            result = performance_metric(b.metric_name, data);
          }
        }
        b.measured = result.value;
      } catch (const MetricError& e) {
        out.findings.push_back({LintRule::MetricEvaluationFailed, Severity::Error, id_text,
                                "evaluating '" + b.metric_name + "': " + e.what()});
      }
    }
  }
  return out;
}

std::string render_report(const Catalog& c, const AssessmentDocument& doc,
                          const std::vector<Finding>& findings, const Verdict& verdict,
                          const ReportOptions& options) {
  std::set<std::string> required;
  for (const auto& id : required_items(c, doc)) required.insert(format_id(id));
  CoverageReport cov = coverage(c, doc);

  // gather the chapter-ordered content once; both renderers walk it
  struct AreaBlock {
    const RiskAreaSpec* spec;
    std::vector<ItemRow> rows;
    const OverallAssessmentRecord* oa;
    bool required_by_exception = false;  // gated-out dimension, items still required
  };
  struct DimBlock {
    const DimensionSpec* spec;
    ProtectionLevel level;
    ItemRow protection_row;
    bool gated_out;
    std::vector<AreaBlock> areas;
    ItemRow summary_row;
    const DimensionSummaryRecord* summary;
  };

  std::vector<ItemRow> profile_rows;
  for (const auto& item : c.profile) profile_rows.push_back(make_row(doc, item));

  std::vector<DimBlock> dims;
  for (const auto& dim : c.dimensions) {
    DimBlock block{&dim,
                   doc.protection.at(dim.code).level,
                   make_row(doc, dim.protection_item),
                   false,
                   {},
                   {},
                   doc.find_summary(dim.code)};
    block.gated_out = block.level == ProtectionLevel::Low;
    for (const auto& ra : dim.risk_areas) {
      AreaBlock ab{&ra, {}, doc.find_overall(dim.code, ra.code)};
      for (const auto& item : ra.items) {
        bool is_required = required.count(format_id(item.id)) > 0;
        bool has_response = doc.find_response(item.id) != nullptr;
        if (is_required || has_response) ab.rows.push_back(make_row(doc, item));
        if (block.gated_out && is_required) ab.required_by_exception = true;
      }
      if (!ab.rows.empty() || !block.gated_out) block.areas.push_back(std::move(ab));
    }
    if (!block.gated_out) block.summary_row = make_row(doc, dim.summary_item);
    dims.push_back(std::move(block));
  }
  ItemRow at_row = make_row(doc, c.at_item);

  if (options.format == ReportFormat::Json) {
    json j;
    j["meta"] = {{"name", doc.meta.name},
                 {"version", doc.meta.version},
                 {"assessor", doc.meta.assessor},
                 {"date", doc.meta.date}};
    j["engine_version"] = engine_version();
    j["catalog_version"] = c.version;
    if (options.date) j["report_date"] = *options.date;
    json prot = json::array();
    for (const auto& dim : c.dimensions) {
      const auto& entry = doc.protection.at(dim.code);
      prot.push_back({{"dimension", dimension_code(dim.code)},
                      {"level", to_string(entry.level)},
                      {"justification", entry.justification}});
    }
    j["protection"] = prot;
    json profile = json::array();
    for (const auto& row : profile_rows) profile.push_back(row_to_json(row));
    j["profile"] = profile;
    json jdims = json::array();
    for (const auto& block : dims) {
      json dj;
      dj["code"] = dimension_code(block.spec->code);
      dj["name"] = block.spec->name;
      dj["level"] = to_string(block.level);
      dj["protection_item"] = row_to_json(block.protection_row);
      dj["examined"] = !block.gated_out;
      if (block.gated_out) {
        dj["note"] = "protection requirement low - risk areas not examined";
      }
      if (block.gated_out && doc.find_summary(block.spec->code)) {
        dj["voluntary_summary_note"] =
            "a summary is recorded for this low dimension; it does not participate in the verdict";
      }
      json jareas = json::array();
      for (const auto& ab : block.areas) {
        json aj;
        aj["code"] = ab.spec->code;
        aj["name"] = ab.spec->name;
        if (ab.required_by_exception) {
          aj["note"] = "required despite the low protection requirement: error-interception "
                       "measures at model level are addressed";
        }
        json items = json::array();
        for (const auto& row : ab.rows) items.push_back(row_to_json(row));
        aj["items"] = items;
        if (ab.oa) {
          json oj;
          json crit = json::object();
          for (const auto& [id, st] : ab.oa->criteria_status) crit[format_id(id)] = to_string(st);
          oj["criteria"] = crit;
          oj["deviations"] = ab.oa->deviations;
          oj["conclusion"] = ab.oa->conclusion;
          oj["status"] =
              risk_area_status(*ab.oa) == RiskAreaStatus::Clean ? "clean" : "with_deviations";
          aj["overall"] = oj;
        }
        jareas.push_back(aj);
      }
      dj["risk_areas"] = jareas;
      if (!block.gated_out) {
        dj["summary_item"] = row_to_json(block.summary_row);
        if (block.summary) {
          dj["summary"] = {{"residual_class", to_string(block.summary->residual_class)},
                           {"rationale", block.summary->rationale}};
        }
      }
      jdims.push_back(dj);
    }
    j["dimensions"] = jdims;
    j["at"] = row_to_json(at_row);
    json jfindings = json::array();
    for (const auto& f : findings)
      jfindings.push_back({{"rule", to_string(f.rule)},
                           {"severity", to_string(f.severity)},
                           {"item", f.item},
                           {"message", f.message}});
    j["findings"] = jfindings;
    json jcov;
    auto counts_json = [](const CoverageCounts& cc) {
      return json{{"required", cc.required},
                  {"addressed", cc.addressed},
                  {"by_reference", cc.by_reference},
                  {"not_applicable", cc.not_applicable},
                  {"missing", cc.missing}};
    };
    json sections = json::array();
    for (const auto& row : cov.sections)
      sections.push_back({{"section", row.label}, {"counts", counts_json(row.counts)}});
    jcov["sections"] = sections;
    json jareas_cov = json::array();
    for (const auto& row : cov.risk_areas)
      jareas_cov.push_back({{"area", row.label}, {"counts", counts_json(row.counts)}});
    jcov["risk_areas"] = jareas_cov;
    jcov["total"] = counts_json(cov.total);
    j["coverage"] = jcov;
    json jv;
    jv["outcome"] = to_string(verdict.outcome);
    json blocking = json::array();
    for (const auto& [d, reason] : verdict.blocking)
      blocking.push_back({{"dimension", d}, {"reason", reason}});
    jv["blocking"] = blocking;
    json residuals = json::array();
    for (const auto& [d, ref] : verdict.accepted_residuals)
      residuals.push_back({{"dimension", d}, {"tradeoff", ref}});
    jv["accepted_residuals"] = residuals;
    jv["notes"] = verdict.notes;
    jv["narrative"] = verdict.narrative;
    j["verdict"] = jv;
    return j.dump(2) + "\n";
  }

  std::ostringstream md;
  md << "# Trustworthiness Assessment Report\n\n";
  md << "- Application: " << (doc.meta.name.empty() ? "(unnamed)" : doc.meta.name);
  if (!doc.meta.version.empty()) md << " (version " << doc.meta.version << ")";
  md << "\n";
  if (!doc.meta.assessor.empty()) md << "- Assessor: " << doc.meta.assessor << "\n";
  if (!doc.meta.date.empty()) md << "- Document date: " << doc.meta.date << "\n";
  md << "- Engine version: " << engine_version() << "\n";
  md << "- Catalog version: " << c.version << "\n";
  if (options.date) md << "- Report date: " << *options.date << "\n";
  md << "\n## Protection Requirements\n\n";
  md << "| Dimension | Level | Justification |\n|---|---|---|\n";
  for (const auto& dim : c.dimensions) {
    const auto& entry = doc.protection.at(dim.code);
    md << "| " << dimension_code(dim.code) << " - " << dim.name << " | " << to_string(entry.level)
       << " | " << md_escape(entry.justification) << " |\n";
  }

  md << "\n## AI Profile (PF)\n\n";
  md_item_table(md, profile_rows);

  for (const auto& block : dims) {
    md << "\n## " << dimension_code(block.spec->code) << " - " << block.spec->name << "\n\n";
    md << "Protection requirement: " << to_string(block.level) << "\n\n";
    md_item_table(md, {block.protection_row});
    if (block.gated_out) {
      md << "\nprotection requirement low - risk areas not examined\n";
      if (doc.find_summary(block.spec->code)) {
        md << "\na summary is recorded for this low dimension; it does not participate in the "
              "verdict\n";
      }
      for (const auto& ab : block.areas) {
        if (ab.rows.empty()) continue;
        md << "\n### " << dimension_code(block.spec->code) << "-R-" << ab.spec->code << " - "
           << ab.spec->name << (ab.required_by_exception ? "" : " (voluntary)") << "\n\n";
        if (ab.required_by_exception) {
          md << "required despite the low protection requirement: error-interception measures at "
                "model level are addressed\n\n";
        }
        md_item_table(md, ab.rows);
      }
      continue;
    }
    for (const auto& ab : block.areas) {
      md << "\n### " << dimension_code(block.spec->code) << "-R-" << ab.spec->code << " - "
         << ab.spec->name << "\n\n";
      md_item_table(md, ab.rows);
      if (ab.oa) {
        md << "\nOverall assessment: "
           << (risk_area_status(*ab.oa) == RiskAreaStatus::Clean ? "clean" : "with deviations");
        if (!ab.oa->criteria_status.empty()) {
          md << " (";
          bool first = true;
          for (const auto& [id, st] : ab.oa->criteria_status) {
            if (!first) md << ", ";
            md << format_id(id) << " " << to_string(st);
            first = false;
          }
          md << ")";
        }
        md << "\n";
        for (const auto& dev : ab.oa->deviations) md << "- deviation: " << dev << "\n";
      }
    }
    md << "\n### Summary\n\n";
    md_item_table(md, {block.summary_row});
    if (block.summary) {
      md << "\nResidual risk class: " << to_string(block.summary->residual_class) << "\n\n"
         << block.summary->rationale << "\n";
    }
  }

  md << "\n## AT - Cross-dimensional Assessment\n\n";
  md_item_table(md, {at_row});
  md << "\nVerdict: **" << to_string(verdict.outcome) << "**\n\n" << verdict.narrative << "\n";
  for (const auto& [d, reason] : verdict.blocking) md << "- blocking: " << d << ": " << reason << "\n";
  for (const auto& [d, ref] : verdict.accepted_residuals)
    md << "- accepted residual: " << d << " via trade-off " << ref << "\n";
  for (const auto& note : verdict.notes) md << "- note: " << note << "\n";

  md << "\n## Findings\n\n";
  if (findings.empty()) {
    md << "none\n";
  } else {
    md << "| Severity | Rule | Item | Message |\n|---|---|---|---|\n";
    for (const auto& f : findings)
      md << "| " << to_string(f.severity) << " | " << to_string(f.rule) << " | " << f.item << " | "
         << md_escape(f.message) << " |\n";
  }

  md << "\n## Coverage\n\n";
  md << "| Section | Required | Addressed | By reference | Not applicable | Missing |\n";
  md << "|---|---|---|---|---|---|\n";
  auto cov_row = [&](const CoverageRow& row) {
    md << "| " << row.label << " | " << row.counts.required << " | " << row.counts.addressed
       << " | " << row.counts.by_reference << " | " << row.counts.not_applicable << " | "
       << row.counts.missing << " |\n";
  };
  for (const auto& row : cov.sections) cov_row(row);
  for (const auto& row : cov.risk_areas) cov_row(row);
  cov_row({"total", cov.total});
  return md.str();
}

}  // namespace trustcat
