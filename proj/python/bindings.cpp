// Python extension exposing the engine's main operations. Structured results
// cross the boundary as JSON strings; the trustcat package wrapper turns
// them into plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "trustcat/assessment.hpp"
#include "trustcat/catalog.hpp"
#include "trustcat/report.hpp"
#include "trustcat/verdict.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace trustcat;

namespace {

json item_json(const CatalogItem& item) {
  json j;
  j["id"] = format_id(item.id);
  j["kind"] = to_string(item.kind);
  j["title"] = item.title;
  j["body"] = item.body;
  json reqs = json::array();
  for (const auto& r : item.requirements) {
    std::string text = to_string(r.type);
    if (r.conditional) text += "?";
    reqs.push_back(text);
  }
  j["requirements"] = reqs;
  if (item.lifecycle) j["lifecycle"] = to_string(*item.lifecycle);
  json refs = json::array();
  for (const auto& ref : item.cross_refs) refs.push_back(format_id(ref));
  j["refs"] = refs;
  if (item.source_label) j["source_label"] = *item.source_label;
  return j;
}

json findings_json(const std::vector<Finding>& findings) {
  json out = json::array();
  for (const auto& f : findings)
    out.push_back({{"rule", to_string(f.rule)},
                   {"severity", to_string(f.severity)},
                   {"item", f.item},
                   {"message", f.message}});
  return out;
}

std::map<Dimension, ProtectionLevel> levels_from(const std::map<std::string, std::string>& levels) {
  std::map<Dimension, ProtectionLevel> out;
  for (const auto& [code, level_text] : levels) {
    auto d = dimension_from_code(code);
    auto l = protection_level_from(level_text);
    if (!d || *d == Dimension::PF || *d == Dimension::AT)
      throw std::invalid_argument("bad dimension code '" + code + "'");
    if (!l) throw std::invalid_argument("bad protection level '" + level_text + "'");
    out[*d] = *l;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Catalog-driven trustworthiness assessment engine";
  m.attr("__version__") = engine_version();

  m.def("canonical_id", [](const std::string& text) { return format_id(parse_id(text)); },
        py::arg("text"), "Parse an item identifier and return its canonical rendering.");
  m.def("compare_ids", [](const std::string& a, const std::string& b) {
          auto c = order_ids(parse_id(a), parse_id(b));
          return c == std::strong_ordering::less ? -1 : c == std::strong_ordering::greater ? 1 : 0;
        },
        py::arg("a"), py::arg("b"), "Catalog ordering of two identifiers (-1, 0 or 1).");

  py::class_<Catalog>(m, "Catalog")
      .def_static("embedded", [] { return load_embedded_catalog(); },
                  "The catalog shipped with the engine.")
      .def_static("from_file", [](const std::string& path) { return load_catalog_file(path); },
                  py::arg("path"))
      .def_property_readonly("version", [](const Catalog& c) { return c.version; })
      .def("item_count", [](const Catalog& c) { return c.all_items().size(); })
      .def("item_ids",
           [](const Catalog& c) {
             std::vector<std::string> out;
             for (const auto* item : c.all_items()) out.push_back(format_id(item->id));
             return out;
           })
      .def("lookup_json",
           [](const Catalog& c, const std::string& id) {
             return item_json(c.lookup(parse_id(id))).dump();
           },
           py::arg("id"))
      .def("validate_json", [](const Catalog& c) {
        json out = json::array();
        for (const auto& d : validate_catalog(c))
          out.push_back({{"id", d.id}, {"message", d.message}});
        return out.dump();
      });

  py::class_<AssessmentDocument>(m, "Document")
      .def_static("from_file", [](const std::string& path) { return parse_document_file(path); },
                  py::arg("path"))
      .def_static("from_string", [](const std::string& text) { return parse_document_string(text); },
                  py::arg("text"))
      .def("to_json", [](const AssessmentDocument& doc) { return serialize_document(doc); })
      .def("required_items",
           [](const AssessmentDocument& doc, const Catalog& c) {
             std::vector<std::string> out;
             for (const auto& id : required_items(c, doc)) out.push_back(format_id(id));
             return out;
           },
           py::arg("catalog"))
      .def("lint_json",
           [](const AssessmentDocument& doc, const Catalog& c) {
             return findings_json(lint(c, doc)).dump();
           },
           py::arg("catalog"))
      .def("coverage_json",
           [](const AssessmentDocument& doc, const Catalog& c) {
             auto cov = coverage(c, doc);
             auto counts = [](const CoverageCounts& cc) {
               return json{{"required", cc.required},
                           {"addressed", cc.addressed},
                           {"by_reference", cc.by_reference},
                           {"not_applicable", cc.not_applicable},
                           {"missing", cc.missing}};
             };
             json j;
             j["sections"] = json::array();
             for (const auto& row : cov.sections)
               j["sections"].push_back({{"section", row.label}, {"counts", counts(row.counts)}});
             j["risk_areas"] = json::array();
             for (const auto& row : cov.risk_areas)
               j["risk_areas"].push_back({{"area", row.label}, {"counts", counts(row.counts)}});
             j["total"] = counts(cov.total);
             return j.dump();
           },
           py::arg("catalog"))
      .def("evaluate_bindings_json",
           [](AssessmentDocument& doc, const Catalog& c,
              const std::map<std::string, std::string>& datasets) {
             auto outcome = evaluate_bindings(c, doc, datasets);
             doc = std::move(outcome.doc);
             return findings_json(outcome.findings).dump();
           },
           py::arg("catalog"), py::arg("datasets"))
      .def("verdict_json",
           [](const AssessmentDocument& doc, const Catalog& c) {
             Verdict v = cross_dimensional_verdict(c, doc);
             json j;
             j["outcome"] = to_string(v.outcome);
             j["blocking"] = json::array();
             for (const auto& [d, reason] : v.blocking)
               j["blocking"].push_back({{"dimension", d}, {"reason", reason}});
             j["accepted_residuals"] = json::array();
             for (const auto& [d, ref] : v.accepted_residuals)
               j["accepted_residuals"].push_back({{"dimension", d}, {"tradeoff", ref}});
             j["notes"] = v.notes;
             j["narrative"] = v.narrative;
             return j.dump();
           },
           py::arg("catalog"))
      .def("render_report",
           [](const AssessmentDocument& doc, const Catalog& c, const std::string& format,
              const std::optional<std::string>& date) {
             ReportOptions options;
             options.format = format == "json" ? ReportFormat::Json : ReportFormat::Markdown;
             options.date = date;
             auto findings = lint(c, doc);
             Verdict v;
             if (!has_errors(findings)) {
               try {
                 v = cross_dimensional_verdict(c, doc);
               } catch (const VerdictError&) {
                 v.outcome = VerdictOutcome::NotAssessable;
               }
             } else {
               v.outcome = VerdictOutcome::NotAssessable;
               v.narrative = "error-grade findings present";
             }
             return render_report(c, doc, findings, v, options);
           },
           py::arg("catalog"), py::arg("format") = "md", py::arg("date") = std::nullopt);

  m.def("scaffold",
        [](const Catalog& c, const std::map<std::string, std::string>& levels) {
          return scaffold(c, levels_from(levels));
        },
        py::arg("catalog"), py::arg("levels"),
        "Build a document skeleton for the given protection levels.");

  m.def("evaluate_metric",
        [](const std::string& name, const std::string& csv_path,
           const std::map<std::string, std::string>& params) {
          const MetricSpec* spec = find_metric(name);
          if (!spec) require_supported(name);
          if (spec->input == MetricInputKind::Regression)
            return performance_metric(name, load_regression_file(csv_path)).value;
          ClassificationData data = load_classification_file(csv_path);
          if (spec->input == MetricInputKind::ClassificationGroups) {
            return fairness_metric(name, data, params.at("group_a"), params.at("group_b")).value;
          }
          if (name == "ece" || name == "brier" || name == "nll") {
            CalibrationParams cp;
            auto bins = params.find("bins");
            if (bins != params.end()) {
              try {
                cp.bins = std::stoi(bins->second);
              } catch (const std::exception&) {
                throw MetricError(MetricError::Code::BadParams,
                                  "bad bins parameter '" + bins->second + "'");
              }
            }
            return calibration_metric(name, data, cp).value;
          }
          return performance_metric(name, data).value;
        },
        py::arg("name"), py::arg("csv_path"),
        py::arg("params") = std::map<std::string, std::string>{},
        "Evaluate one registered metric over a CSV dataset.");

  // map engine error types onto ValueError for ergonomic handling
  py::register_exception<IdError>(m, "IdError", PyExc_ValueError);
  py::register_exception<CatalogError>(m, "CatalogError", PyExc_ValueError);
  py::register_exception<DocumentError>(m, "DocumentError", PyExc_ValueError);
  py::register_exception<MetricError>(m, "MetricError", PyExc_ValueError);
  py::register_exception<VerdictError>(m, "VerdictError", PyExc_ValueError);
  py::register_exception<ReportError>(m, "ReportError", PyExc_ValueError);
}
