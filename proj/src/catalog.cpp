#include "trustcat/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace trustcat {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw CatalogError(CatalogError::Code::Schema, "catalog: " + where + ": " + what);
}

std::string require_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) schema_error(where, std::string("missing string field '") + key + "'");
  return j[key].get<std::string>();
}

ItemKind kind_from(const std::string& s, const std::string& where) {
  if (s == "profile_question") return ItemKind::ProfileQuestion;
  if (s == "protection_analysis") return ItemKind::ProtectionAnalysis;
  if (s == "risk_analysis") return ItemKind::RiskAnalysis;
  if (s == "criterion") return ItemKind::Criterion;
  if (s == "measure") return ItemKind::Measure;
  if (s == "overall_assessment") return ItemKind::OverallAssessment;
  if (s == "summary") return ItemKind::Summary;
  if (s == "cross_dimensional") return ItemKind::CrossDimensional;
  schema_error(where, "unknown kind '" + s + "'");
}

LifecycleCategory lifecycle_from(const std::string& s, const std::string& where) {
  if (s == "data") return LifecycleCategory::Data;
  if (s == "ai_component") return LifecycleCategory::AiComponent;
  if (s == "embedding") return LifecycleCategory::Embedding;
  if (s == "operation") return LifecycleCategory::Operation;
  if (s == "unassigned") return LifecycleCategory::Unassigned;
  schema_error(where, "unknown lifecycle '" + s + "'");
}

Requirement requirement_from(const std::string& s, const std::string& where) {
  Requirement r{RequirementType::Do, false};
  std::string base = s;
  if (!base.empty() && base.back() == '?') {
    r.conditional = true;
    base.pop_back();
  }
  if (base == "Do") r.type = RequirementType::Do;
  else if (base == "Te") r.type = RequirementType::Te;
  else if (base == "Pr") r.type = RequirementType::Pr;
  else schema_error(where, "unknown requirement '" + s + "'");
  return r;
}

CatalogItem item_from(const json& j, const std::string& where) {
  if (!j.is_object()) schema_error(where, "item is not an object");
  CatalogItem item;
  std::string id_text = require_string(j, "id", where);
  try {
    item.id = parse_id(id_text);
  } catch (const IdError& e) {
    schema_error(where, std::string("bad id: ") + e.what());
  }
  item.kind = kind_from(require_string(j, "kind", where + "/" + id_text), where + "/" + id_text);
  item.title = require_string(j, "title", where + "/" + id_text);
  item.body = require_string(j, "body", where + "/" + id_text);
  if (j.contains("requirements")) {
    for (const auto& r : j["requirements"])
      item.requirements.push_back(requirement_from(r.get<std::string>(), where + "/" + id_text));
  }
  if (j.contains("lifecycle"))
    item.lifecycle = lifecycle_from(j["lifecycle"].get<std::string>(), where + "/" + id_text);
  if (j.contains("refs")) {
    for (const auto& r : j["refs"]) {
      try {
        item.cross_refs.push_back(parse_id(r.get<std::string>()));
      } catch (const IdError& e) {
        schema_error(where + "/" + id_text, std::string("bad ref: ") + e.what());
      }
    }
  }
  if (j.contains("source_label")) item.source_label = j["source_label"].get<std::string>();
  return item;
}

ProtectionLevel level_key(const std::string& s, const std::string& where) {
  auto l = protection_level_from(s);
  if (!l) schema_error(where, "unknown protection level '" + s + "'");
  return *l;
}

}  // namespace

const char* to_string(RequirementType t) {
  switch (t) {
    case RequirementType::Do: return "Do";
    case RequirementType::Te: return "Te";
    case RequirementType::Pr: return "Pr";
  }
  return "?";
}

const char* to_string(LifecycleCategory c) {
  switch (c) {
    case LifecycleCategory::Data: return "data";
    case LifecycleCategory::AiComponent: return "ai_component";
    case LifecycleCategory::Embedding: return "embedding";
    case LifecycleCategory::Operation: return "operation";
    case LifecycleCategory::Unassigned: return "unassigned";
  }
  return "?";
}

const char* to_string(ItemKind k) {
  switch (k) {
    case ItemKind::ProfileQuestion: return "profile_question";
    case ItemKind::ProtectionAnalysis: return "protection_analysis";
    case ItemKind::RiskAnalysis: return "risk_analysis";
    case ItemKind::Criterion: return "criterion";
    case ItemKind::Measure: return "measure";
    case ItemKind::OverallAssessment: return "overall_assessment";
    case ItemKind::Summary: return "summary";
    case ItemKind::CrossDimensional: return "cross_dimensional";
  }
  return "?";
}

const char* to_string(ProtectionLevel l) {
  switch (l) {
    case ProtectionLevel::Low: return "low";
    case ProtectionLevel::Medium: return "medium";
    case ProtectionLevel::High: return "high";
  }
  return "?";
}

std::optional<ProtectionLevel> protection_level_from(std::string_view s) {
  if (s == "low") return ProtectionLevel::Low;
  if (s == "medium") return ProtectionLevel::Medium;
  if (s == "high") return ProtectionLevel::High;
  return std::nullopt;
}

bool CatalogItem::requires_type(RequirementType t, bool include_conditional) const {
  for (const auto& r : requirements)
    if (r.type == t && (include_conditional || !r.conditional)) return true;
  return false;
}

std::set<ProtectionLevel> ProtectionTable::allowed_levels() const {
  std::set<ProtectionLevel> out;
  for (const auto& [level, _] : descriptions) out.insert(level);
  return out;
}

const CatalogItem* Catalog::find(const CatalogId& id) const {
  for (const auto* item : all_items())
    if (item->id == id) return item;
  return nullptr;
}

const CatalogItem& Catalog::lookup(const CatalogId& id) const {
  const CatalogItem* item = find(id);
  if (!item)
    throw CatalogError(CatalogError::Code::NotFound, "no catalog item " + format_id(id));
  return *item;
}

const DimensionSpec* Catalog::find_dimension(Dimension d) const {
  for (const auto& dim : dimensions)
    if (dim.code == d) return &dim;
  return nullptr;
}

std::vector<const CatalogItem*> Catalog::all_items() const {
  std::vector<const CatalogItem*> out;
  for (const auto& item : profile) out.push_back(&item);
  for (const auto& dim : dimensions) {
    // protection item first, risk areas in order, summary last
    out.push_back(&dim.protection_item);
    for (const auto& ra : dim.risk_areas)
      for (const auto& item : ra.items) out.push_back(&item);
    out.push_back(&dim.summary_item);
  }
  out.push_back(&at_item);
  return out;
}

Catalog load_catalog(std::istream& source) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    throw CatalogError(CatalogError::Code::Syntax, std::string("catalog: ") + e.what());
  }
  if (!j.is_object()) schema_error("top level", "not an object");

  Catalog c;
  c.version = require_string(j, "version", "top level");
  if (!j.contains("profile") || !j["profile"].is_array()) schema_error("top level", "missing 'profile' array");
  for (const auto& it : j["profile"]) c.profile.push_back(item_from(it, "profile"));

  if (!j.contains("dimensions") || !j["dimensions"].is_array()) schema_error("top level", "missing 'dimensions' array");
  for (const auto& dj : j["dimensions"]) {
    DimensionSpec dim;
    std::string code = require_string(dj, "code", "dimension");
    auto d = dimension_from_code(code);
    if (!d || *d == Dimension::PF || *d == Dimension::AT)
      schema_error("dimension", "bad dimension code '" + code + "'");
    dim.code = *d;
    dim.name = require_string(dj, "name", code);
    dim.description = require_string(dj, "description", code);
    if (!dj.contains("protection") || !dj["protection"].is_object())
      schema_error(code, "missing 'protection' table");
    for (const auto& [k, v] : dj["protection"].items())
      dim.protection.descriptions[level_key(k, code)] = v.get<std::string>();
    if (!dj.contains("protection_item")) schema_error(code, "missing 'protection_item'");
    dim.protection_item = item_from(dj["protection_item"], code);
    if (!dj.contains("risk_areas") || !dj["risk_areas"].is_array())
      schema_error(code, "missing 'risk_areas' array");
    for (const auto& rj : dj["risk_areas"]) {
      RiskAreaSpec ra;
      ra.code = require_string(rj, "code", code + " risk area");
      ra.name = require_string(rj, "name", code + "/" + ra.code);
      if (!rj.contains("items") || !rj["items"].is_array())
        schema_error(code + "/" + ra.code, "missing 'items' array");
      for (const auto& it : rj["items"]) ra.items.push_back(item_from(it, code + "/" + ra.code));
      dim.risk_areas.push_back(std::move(ra));
    }
    if (!dj.contains("summary")) schema_error(code, "missing 'summary' item");
    dim.summary_item = item_from(dj["summary"], code);
    c.dimensions.push_back(std::move(dim));
  }

  if (!j.contains("at")) schema_error("top level", "missing 'at' item");
  c.at_item = item_from(j["at"], "at");
  return c;
}

Catalog load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw CatalogError(CatalogError::Code::Syntax, "cannot open catalog file: " + path);
  return load_catalog(in);
}

Catalog load_catalog_string(const std::string& text) {
  std::istringstream in(text);
  return load_catalog(in);
}

Catalog load_embedded_catalog() {
  return load_catalog_string(embedded_catalog_text());
}

namespace {

void check_item(const Catalog& c, const CatalogItem& item, std::vector<CatalogDefect>& defects) {
  std::string id = format_id(item.id);

  // kind must agree with the identifier shape
  ItemKind expected;
  switch (item.id.category) {
    case Category::Topic: expected = ItemKind::ProfileQuestion; break;
    case Category::Protection: expected = ItemKind::ProtectionAnalysis; break;
    case Category::Summary: expected = ItemKind::Summary; break;
    case Category::CrossDimensional: expected = ItemKind::CrossDimensional; break;
    case Category::RiskArea:
      switch (*item.id.aspect) {
        case Aspect::RI: expected = ItemKind::RiskAnalysis; break;
        case Aspect::CR: expected = ItemKind::Criterion; break;
        case Aspect::ME: expected = ItemKind::Measure; break;
        case Aspect::OA: expected = ItemKind::OverallAssessment; break;
        default: expected = item.kind; break;
      }
      break;
    default: expected = item.kind; break;
  }
  if (item.kind != expected) {
    defects.push_back({CatalogDefect::Rule::KindMismatch, id,
                       "kind '" + std::string(to_string(item.kind)) + "' does not match identifier shape"});
  }
  if (item.kind == ItemKind::Measure && item.requirements.empty()) {
    defects.push_back({CatalogDefect::Rule::MissingRequirements, id, "measure without requirement types"});
  }
  for (const auto& ref : item.cross_refs) {
    if (ref == item.id) {
      defects.push_back({CatalogDefect::Rule::SelfReference, id, "item references itself"});
    } else if (!c.find(ref)) {
      defects.push_back({CatalogDefect::Rule::DanglingCrossRef, id,
                         "reference to missing item " + format_id(ref)});
    }
  }
}

}  // namespace

std::vector<CatalogDefect> validate_catalog(const Catalog& c) {
  std::vector<CatalogDefect> defects;
  auto items = c.all_items();

  std::set<std::string> seen;
  for (const auto* item : items) {
    std::string id = format_id(item->id);
    if (!seen.insert(id).second)
      defects.push_back({CatalogDefect::Rule::DuplicateId, id, "duplicate identifier"});
  }
  for (const auto* item : items) check_item(c, *item, defects);

  // dimension structure: area code sets and per-area completeness
  for (const auto& dim : c.dimensions) {
    const auto& expected = area_codes(dim.code);
    std::vector<std::string> actual;
    for (const auto& ra : dim.risk_areas) actual.push_back(ra.code);
    if (actual != expected) {
      defects.push_back({CatalogDefect::Rule::WrongAreaSet, dimension_code(dim.code),
                         "risk-area codes do not match the catalog structure"});
    }
    auto allowed = dim.protection.allowed_levels();
    std::set<ProtectionLevel> want = {ProtectionLevel::Low, ProtectionLevel::Medium, ProtectionLevel::High};
    if (dim.code == Dimension::RE) want.erase(ProtectionLevel::Low);
    if (allowed != want) {
      defects.push_back({CatalogDefect::Rule::BadProtectionTable, dimension_code(dim.code),
                         "protection table levels do not match the allowed set"});
    }
    for (const auto& ra : dim.risk_areas) {
      int n_ri = 0, n_cr = 0, n_oa = 0;
      std::map<Aspect, std::vector<int>> numbers;
      for (const auto& item : ra.items) {
        if (item.id.category != Category::RiskArea || !item.id.area || *item.id.area != ra.code ||
            item.id.dimension != dim.code) {
          defects.push_back({CatalogDefect::Rule::WrongAreaSet, format_id(item.id),
                             "item filed under the wrong risk area"});
          continue;
        }
        switch (*item.id.aspect) {
          case Aspect::RI: ++n_ri; break;
          case Aspect::CR: ++n_cr; break;
          case Aspect::OA: ++n_oa; break;
          default: break;
        }
        if (item.id.number) numbers[*item.id.aspect].push_back(*item.id.number);
      }
      std::string where = std::string(dimension_code(dim.code)) + "-R-" + ra.code;
      if (n_ri < 1 || n_cr < 1 || n_oa < 1) {
        defects.push_back({CatalogDefect::Rule::IncompleteRiskArea, where,
                           "risk area needs at least one risk analysis, criterion and overall assessment"});
      }
      for (auto& [aspect, nums] : numbers) {
        std::sort(nums.begin(), nums.end());
        for (size_t i = 0; i < nums.size(); ++i) {
          if (nums[i] != static_cast<int>(i) + 1) {
            defects.push_back({CatalogDefect::Rule::NonContiguousNumbering, where,
                               std::string("numbering of ") + aspect_code(aspect) +
                                   " items is not contiguous from 01"});
            break;
          }
        }
      }
    }
  }
  return defects;
}

}  // namespace trustcat
