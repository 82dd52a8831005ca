// trustcat: catalog-driven trustworthiness assessment engine.
//
// Exit codes: 0 success/clean, 1 error-grade findings present,
// 2 verdict not trustworthy, 3 input/IO/schema error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "trustcat/assessment.hpp"
#include "trustcat/catalog.hpp"
#include "trustcat/report.hpp"
#include "trustcat/verdict.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitNotTrustworthy = 2;
constexpr int kExitInputError = 3;

trustcat::Catalog load_active_catalog() {
  const char* path = std::getenv("TRUSTCAT_CATALOG");
  if (path && *path) return trustcat::load_catalog_file(path);
  return trustcat::load_embedded_catalog();
}

void write_payload(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << payload;
}

void print_findings(const std::vector<trustcat::Finding>& findings) {
  for (const auto& f : findings) {
    std::cerr << to_string(f.severity) << " [" << to_string(f.rule) << "] " << f.item << ": "
              << f.message << "\n";
  }
}

std::map<trustcat::Dimension, trustcat::ProtectionLevel> parse_levels(const std::string& spec) {
  std::map<trustcat::Dimension, trustcat::ProtectionLevel> levels;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad --levels entry '" + part + "', expected DIM=level");
    auto dim = trustcat::dimension_from_code(part.substr(0, eq));
    auto level = trustcat::protection_level_from(part.substr(eq + 1));
    if (!dim || *dim == trustcat::Dimension::PF || *dim == trustcat::Dimension::AT)
      throw std::runtime_error("bad dimension in --levels entry '" + part + "'");
    if (!level) throw std::runtime_error("bad level in --levels entry '" + part + "'");
    levels[*dim] = *level;
  }
  return levels;
}

std::map<std::string, std::string> parse_data_args(const std::vector<std::string>& args) {
  std::map<std::string, std::string> datasets;
  for (const auto& arg : args) {
    auto eq = arg.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad --data entry '" + arg + "', expected NAME=FILE");
    datasets[arg.substr(0, eq)] = arg.substr(eq + 1);
  }
  return datasets;
}

trustcat::Verdict verdict_or_not_assessable(const trustcat::Catalog& catalog,
                                            const trustcat::AssessmentDocument& doc,
                                            const std::vector<trustcat::Finding>& findings) {
  if (!trustcat::has_errors(findings)) {
    try {
      return trustcat::cross_dimensional_verdict(catalog, doc);
    } catch (const trustcat::VerdictError&) {
      // fall through to not assessable
    }
  }
  trustcat::Verdict v;
  v.outcome = trustcat::VerdictOutcome::NotAssessable;
  v.narrative = "The document carries error-grade findings; the cross-dimensional assessment "
                "cannot be performed until they are resolved.";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Catalog-driven trustworthiness assessment engine"};
  app.set_version_flag("--version", std::string("trustcat ") + trustcat::engine_version());
  app.require_subcommand(1);

  // catalog validate / show
  auto* cat = app.add_subcommand("catalog", "Inspect and validate the item catalog");
  cat->require_subcommand(1);

  std::string catalog_file;
  auto* cat_validate = cat->add_subcommand("validate", "Check catalog structural integrity");
  cat_validate->add_option("file", catalog_file, "Catalog JSON file (defaults to the active catalog)");

  std::string show_id;
  auto* cat_show = cat->add_subcommand("show", "Print one catalog item");
  cat_show->add_option("id", show_id, "Item identifier, e.g. FN-R-CD-CR-01")->required();

  // assess ...
  auto* assess = app.add_subcommand("assess", "Work with assessment documents");
  assess->require_subcommand(1);

  std::string levels_spec, init_out;
  auto* init = assess->add_subcommand("init", "Scaffold a document for given protection levels");
  init->add_option("--levels", levels_spec, "Comma list DIM=level, e.g. FN=high,AC=medium,...")
      ->required();
  init->add_option("-o,--output", init_out, "Write the skeleton here (default: stdout)");

  std::string lint_doc;
  auto* lint_cmd = assess->add_subcommand("lint", "Check a document for completeness and conformance");
  lint_cmd->add_option("document", lint_doc, "Assessment document JSON")->required();

  std::string metrics_doc, metrics_out;
  std::vector<std::string> data_args;
  auto* metrics_cmd = assess->add_subcommand("metrics", "Evaluate the document's metric bindings");
  metrics_cmd->add_option("document", metrics_doc, "Assessment document JSON")->required();
  metrics_cmd->add_option("--data", data_args, "Dataset mapping NAME=FILE (repeatable)");
  metrics_cmd->add_option("-o,--output", metrics_out, "Write the updated document here");

  std::string verdict_doc;
  auto* verdict_cmd = assess->add_subcommand("verdict", "Compute the cross-dimensional verdict");
  verdict_cmd->add_option("document", verdict_doc, "Assessment document JSON")->required();

  std::string report_doc, report_fmt = "md", report_out, report_date;
  std::vector<std::string> report_data_args;
  auto* report_cmd = assess->add_subcommand("report", "Render the technical documentation report");
  report_cmd->add_option("document", report_doc, "Assessment document JSON")->required();
  report_cmd->add_option("--format", report_fmt, "md or json")->check(CLI::IsMember({"md", "json"}));
  report_cmd->add_option("-o,--output", report_out, "Write the report here (default: stdout)");
  report_cmd->add_option("--date", report_date, "Report date (ISO 8601), echoed verbatim");
  report_cmd->add_option("--data", report_data_args,
                         "Dataset mapping NAME=FILE; evaluates bindings before rendering");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cat_validate) {
      trustcat::Catalog c =
          catalog_file.empty() ? load_active_catalog() : trustcat::load_catalog_file(catalog_file);
      auto defects = trustcat::validate_catalog(c);
      for (const auto& d : defects)
        std::cerr << "defect " << d.id << ": " << d.message << "\n";
      std::cout << "catalog version " << c.version << ": " << c.all_items().size() << " items, "
                << defects.size() << " defect(s)\n";
      return defects.empty() ? kExitOk : kExitFindings;
    }
    if (*cat_show) {
      trustcat::Catalog c = load_active_catalog();
      const trustcat::CatalogItem& item = c.lookup(trustcat::parse_id(show_id));
      std::cout << format_id(item.id) << " " << item.title << "\n";
      std::cout << "kind: " << to_string(item.kind) << "\n";
      if (!item.requirements.empty()) {
        std::cout << "requirements:";
        for (const auto& r : item.requirements) {
          std::cout << " " << (r.conditional ? std::string("(") + to_string(r.type) + ")"
                                             : std::string(to_string(r.type)));
        }
        std::cout << "\n";
      }
      if (item.lifecycle) std::cout << "lifecycle: " << to_string(*item.lifecycle) << "\n";
      if (!item.cross_refs.empty()) {
        std::cout << "references:";
        for (const auto& ref : item.cross_refs) std::cout << " " << format_id(ref);
        std::cout << "\n";
      }
      std::cout << "\n" << item.body << "\n";
      return kExitOk;
    }
    if (*init) {
      trustcat::Catalog c = load_active_catalog();
      auto doc = trustcat::scaffold(c, parse_levels(levels_spec));
      write_payload(trustcat::serialize_document(doc), init_out);
      return kExitOk;
    }
    if (*lint_cmd) {
      trustcat::Catalog c = load_active_catalog();
      auto doc = trustcat::parse_document_file(lint_doc);
      auto findings = trustcat::lint(c, doc);
      print_findings(findings);
      std::cout << findings.size() << " finding(s)\n";
      return trustcat::has_errors(findings) ? kExitFindings : kExitOk;
    }
    if (*metrics_cmd) {
      trustcat::Catalog c = load_active_catalog();
      auto doc = trustcat::parse_document_file(metrics_doc);
      auto outcome = trustcat::evaluate_bindings(c, doc, parse_data_args(data_args));
      print_findings(outcome.findings);
      write_payload(trustcat::serialize_document(outcome.doc), metrics_out);
      return trustcat::has_errors(outcome.findings) ? kExitFindings : kExitOk;
    }
    if (*verdict_cmd) {
      trustcat::Catalog c = load_active_catalog();
      auto doc = trustcat::parse_document_file(verdict_doc);
      auto findings = trustcat::lint(c, doc);
      print_findings(findings);
      auto verdict = verdict_or_not_assessable(c, doc, findings);
      std::cout << to_string(verdict.outcome) << "\n";
      for (const auto& [d, reason] : verdict.blocking)
        std::cout << "blocking " << d << ": " << reason << "\n";
      for (const auto& [d, ref] : verdict.accepted_residuals)
        std::cout << "accepted residual " << d << " via " << ref << "\n";
      for (const auto& note : verdict.notes) std::cout << "note: " << note << "\n";
      if (trustcat::has_errors(findings)) return kExitFindings;
      return verdict.outcome == trustcat::VerdictOutcome::NotTrustworthy ? kExitNotTrustworthy
                                                                         : kExitOk;
    }
    if (*report_cmd) {
      trustcat::Catalog c = load_active_catalog();
      auto doc = trustcat::parse_document_file(report_doc);
      std::vector<trustcat::Finding> findings;
      if (!report_data_args.empty()) {
        auto outcome = trustcat::evaluate_bindings(c, doc, parse_data_args(report_data_args));
        doc = std::move(outcome.doc);
        findings = std::move(outcome.findings);
      }
      auto lint_findings = trustcat::lint(c, doc);
      findings.insert(findings.end(), lint_findings.begin(), lint_findings.end());
      print_findings(findings);
      auto verdict = verdict_or_not_assessable(c, doc, findings);
      trustcat::ReportOptions options;
      options.format =
          report_fmt == "json" ? trustcat::ReportFormat::Json : trustcat::ReportFormat::Markdown;
      if (!report_date.empty()) options.date = report_date;
      write_payload(trustcat::render_report(c, doc, findings, verdict, options), report_out);
      if (trustcat::has_errors(findings)) return kExitFindings;
      return verdict.outcome == trustcat::VerdictOutcome::NotTrustworthy ? kExitNotTrustworthy
                                                                         : kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
