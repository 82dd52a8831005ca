#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "trustcat/catalog.hpp"

using namespace trustcat;
using nlohmann::json;

TEST_CASE("shipped catalog loads with the documented structure") {
  Catalog c = load_embedded_catalog();
  REQUIRE(c.dimensions.size() == 6);

  auto area_list = [&](Dimension d) {
    std::vector<std::string> out;
    for (const auto& ra : c.find_dimension(d)->risk_areas) out.push_back(ra.code);
    return out;
  };
  CHECK(area_list(Dimension::FN) == std::vector<std::string>{"FN", "CD"});
  CHECK(area_list(Dimension::AC) == std::vector<std::string>{"TD", "IE"});
  CHECK(area_list(Dimension::TR) == std::vector<std::string>{"UA", "EX", "AU", "CD"});
  CHECK(area_list(Dimension::RE) == std::vector<std::string>{"SC", "RO", "IM", "UE", "CD"});
  CHECK(area_list(Dimension::S) == std::vector<std::string>{"FS", "IA", "CD"});
  CHECK(area_list(Dimension::DP) == std::vector<std::string>{"PD", "BI", "CD"});

  CHECK(c.profile.size() == 8);
  CHECK(c.at_item.kind == ItemKind::CrossDimensional);
  // regression anchor for the transcription size
  CHECK(c.all_items().size() == 242);
}

TEST_CASE("shipped catalog validates with zero defects") {
  Catalog c = load_embedded_catalog();
  auto defects = validate_catalog(c);
  for (const auto& d : defects) {
    CAPTURE(d.id);
    CAPTURE(d.message);
    CHECK(false);
  }
  CHECK(defects.empty());
}

TEST_CASE("empty stream is a syntax error") {
  std::istringstream in("");
  CHECK_THROWS_AS(load_catalog(in), CatalogError);
}

TEST_CASE("lookup returns transcribed structured fields") {
  Catalog c = load_embedded_catalog();

  const CatalogItem& me5 = c.lookup(parse_id("FN-R-FN-ME-05"));
  CHECK(me5.kind == ItemKind::Measure);
  REQUIRE(me5.requirements.size() == 2);
  CHECK(me5.requires_type(RequirementType::Do));
  CHECK(me5.requires_type(RequirementType::Te));
  CHECK_FALSE(me5.requires_type(RequirementType::Pr));

  const CatalogItem& intervention = c.lookup(parse_id("S-R-FS-ME-12"));
  CHECK(intervention.kind == ItemKind::Measure);
  CHECK(intervention.title == "Option for human intervention");

  CHECK_THROWS_AS(c.lookup(parse_id("FN-R-FN-ME-99")), CatalogError);
}

TEST_CASE("conditional requirement types are transcribed") {
  Catalog c = load_embedded_catalog();
  const CatalogItem& item = c.lookup(parse_id("TR-R-EX-ME-07"));
  REQUIRE(item.requirements.size() == 2);
  CHECK(item.requirements[0].type == RequirementType::Do);
  CHECK_FALSE(item.requirements[0].conditional);
  CHECK(item.requirements[1].type == RequirementType::Te);
  CHECK(item.requirements[1].conditional);
  CHECK(item.requires_type(RequirementType::Te, true));
  CHECK_FALSE(item.requires_type(RequirementType::Te, false));
}

TEST_CASE("known cross-reference edges exist") {
  Catalog c = load_embedded_catalog();
  auto has_ref = [&](const char* from, const char* to) {
    const CatalogItem& item = c.lookup(parse_id(from));
    CatalogId target = parse_id(to);
    for (const auto& ref : item.cross_refs)
      if (ref == target) return true;
    return false;
  };
  CHECK(has_ref("AC-R-TD-ME-02", "S-R-FS-ME-12"));
  CHECK(has_ref("RE-R-IM-ME-06", "RE-R-UE-OA"));
  CHECK(has_ref("FN-R-CD-CR-01", "FN-R-FN-CR-01"));
  CHECK(has_ref("S-R-CD-ME-03", "S-R-FS-ME-14"));
}

TEST_CASE("measure lifecycle categories are transcribed") {
  Catalog c = load_embedded_catalog();
  CHECK(*c.lookup(parse_id("FN-R-FN-ME-01")).lifecycle == LifecycleCategory::Data);
  CHECK(*c.lookup(parse_id("FN-R-FN-ME-03")).lifecycle == LifecycleCategory::AiComponent);
  CHECK(*c.lookup(parse_id("FN-R-FN-ME-06")).lifecycle == LifecycleCategory::Embedding);
  CHECK(*c.lookup(parse_id("FN-R-FN-ME-08")).lifecycle == LifecycleCategory::Operation);
  // measures the text declines to place in one stage
  CHECK(*c.lookup(parse_id("AC-R-TD-ME-01")).lifecycle == LifecycleCategory::Unassigned);
  // non-measures carry no lifecycle
  CHECK_FALSE(c.lookup(parse_id("FN-R-FN-RI-01")).lifecycle.has_value());
}

TEST_CASE("renumbered measure keeps its source label") {
  Catalog c = load_embedded_catalog();
  const CatalogItem& item = c.lookup(parse_id("DP-R-BI-ME-12"));
  REQUIRE(item.source_label.has_value());
  CHECK(*item.source_label == "DP-R-BI-ME-08");
}

TEST_CASE("reliability protection table has no low level") {
  Catalog c = load_embedded_catalog();
  const DimensionSpec* re = c.find_dimension(Dimension::RE);
  auto allowed = re->protection.allowed_levels();
  CHECK(allowed == std::set<ProtectionLevel>{ProtectionLevel::Medium, ProtectionLevel::High});
  for (const auto& dim : c.dimensions) {
    if (dim.code == Dimension::RE) continue;
    CHECK(dim.protection.allowed_levels().size() == 3);
  }
}

namespace {

json shipped_catalog_json() { return json::parse(embedded_catalog_text()); }

Catalog load_json(const json& j) { return load_catalog_string(j.dump()); }

}  // namespace

TEST_CASE("validator flags a duplicated id") {
  json j = shipped_catalog_json();
  // duplicate FN-R-FN-CR-01 inside its own risk area
  auto& items = j["dimensions"][0]["risk_areas"][0]["items"];
  json dup = items[2];
  REQUIRE(dup["id"] == "FN-R-FN-CR-01");
  items.push_back(dup);
  Catalog c = load_json(j);
  auto defects = validate_catalog(c);
  bool found = false;
  for (const auto& d : defects)
    if (d.rule == CatalogDefect::Rule::DuplicateId && d.id == "FN-R-FN-CR-01") found = true;
  CHECK(found);
}

TEST_CASE("validator flags a dangling cross reference") {
  json j = shipped_catalog_json();
  // delete FN-R-FN-ME-01; FN-R-FN-ME-02 cites it
  auto& items = j["dimensions"][0]["risk_areas"][0]["items"];
  json pruned = json::array();
  for (auto& it : items)
    if (it["id"] != "FN-R-FN-ME-01") pruned.push_back(it);
  items = pruned;
  Catalog c = load_json(j);
  auto defects = validate_catalog(c);
  bool dangling = false;
  for (const auto& d : defects)
    if (d.rule == CatalogDefect::Rule::DanglingCrossRef && d.id == "FN-R-FN-ME-02") dangling = true;
  CHECK(dangling);
  // deleting ME-01 also breaks numbering contiguity
  bool contiguity = false;
  for (const auto& d : defects)
    if (d.rule == CatalogDefect::Rule::NonContiguousNumbering) contiguity = true;
  CHECK(contiguity);
}

TEST_CASE("validator flags a kind mismatch") {
  json j = shipped_catalog_json();
  j["dimensions"][0]["risk_areas"][0]["items"][0]["kind"] = "measure";
  Catalog c = load_json(j);
  auto defects = validate_catalog(c);
  bool found = false;
  for (const auto& d : defects)
    if (d.rule == CatalogDefect::Rule::KindMismatch && d.id == "FN-R-FN-RI-01") found = true;
  CHECK(found);
}

TEST_CASE("loading from a file path matches the embedded catalog") {
  Catalog embedded = load_embedded_catalog();
  Catalog from_file = load_catalog_file(std::string(TRUSTCAT_SOURCE_DIR) + "/data/catalog.json");
  CHECK(from_file.version == embedded.version);
  CHECK(from_file.all_items().size() == embedded.all_items().size());
}
