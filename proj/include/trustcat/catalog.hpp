#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trustcat/ids.hpp"

namespace trustcat {

// Kind of evidence a requirement demands: documentation, test report,
// or process description.
enum class RequirementType { Do, Te, Pr };

// Life-cycle stage a measure applies to. Unassigned is used where the
// catalog itself declines to place a measure in one stage.
enum class LifecycleCategory { Data, AiComponent, Embedding, Operation, Unassigned };

enum class ItemKind {
  ProfileQuestion,
  ProtectionAnalysis,
  RiskAnalysis,
  Criterion,
  Measure,
  OverallAssessment,
  Summary,
  CrossDimensional,
};

// One requirement-type slot of an item; conditional slots are rendered
// with parentheses, e.g. "(Te)".
struct Requirement {
  RequirementType type;
  bool conditional = false;
  friend bool operator==(const Requirement&, const Requirement&) = default;
};

struct CatalogItem {
  CatalogId id;
  ItemKind kind;
  std::string title;
  std::string body;
  std::vector<Requirement> requirements;
  std::optional<LifecycleCategory> lifecycle;  // measures only
  std::vector<CatalogId> cross_refs;
  std::optional<std::string> source_label;  // original label where the transcription renumbered

  bool requires_type(RequirementType t, bool include_conditional = true) const;
};

enum class ProtectionLevel { Low, Medium, High };

// Per-dimension damage-scenario descriptions; a level is allowed iff its
// description is present (reliability has no Low row).
struct ProtectionTable {
  std::map<ProtectionLevel, std::string> descriptions;
  std::set<ProtectionLevel> allowed_levels() const;
};

struct RiskAreaSpec {
  std::string code;
  std::string name;
  std::vector<CatalogItem> items;
};

struct DimensionSpec {
  Dimension code;
  std::string name;
  std::string description;
  ProtectionTable protection;
  CatalogItem protection_item;
  std::vector<RiskAreaSpec> risk_areas;
  CatalogItem summary_item;
};

struct Catalog {
  std::string version;
  std::vector<CatalogItem> profile;
  std::vector<DimensionSpec> dimensions;
  CatalogItem at_item;

  const CatalogItem* find(const CatalogId& id) const;
  // Throws NotFoundError if the id is not in the catalog.
  const CatalogItem& lookup(const CatalogId& id) const;
  const DimensionSpec* find_dimension(Dimension d) const;
  // All items in document (= identifier) order.
  std::vector<const CatalogItem*> all_items() const;
};

struct CatalogError : std::runtime_error {
  enum class Code { Syntax, Schema, NotFound };
  CatalogError(Code c, std::string msg) : std::runtime_error(std::move(msg)), code(c) {}
  Code code;
};

struct CatalogDefect {
  enum class Rule {
    DuplicateId,
    DanglingCrossRef,
    SelfReference,
    KindMismatch,
    MissingRequirements,
    NonContiguousNumbering,
    IncompleteRiskArea,
    BadProtectionTable,
    WrongAreaSet,
  };
  Rule rule;
  std::string id;       // offending id (canonical string), or area/dimension code
  std::string message;
};

Catalog load_catalog(std::istream& source);
Catalog load_catalog_file(const std::string& path);
Catalog load_catalog_string(const std::string& text);

// The catalog data compiled into the library; overridable at run time via
// the TRUSTCAT_CATALOG environment variable (handled by callers).
const std::string& embedded_catalog_text();
Catalog load_embedded_catalog();

// Structural integrity checks; empty result means the catalog is sound.
std::vector<CatalogDefect> validate_catalog(const Catalog& c);

const char* to_string(RequirementType t);
const char* to_string(LifecycleCategory c);
const char* to_string(ItemKind k);
const char* to_string(ProtectionLevel l);
std::optional<ProtectionLevel> protection_level_from(std::string_view s);

}  // namespace trustcat
