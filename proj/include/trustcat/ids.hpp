#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trustcat {

// Chapter codes, in catalog chapter order.
enum class Dimension { PF, FN, AC, TR, RE, S, DP, AT };

// Second identifier slot. Topic is PF-only; CrossDimensional is the bare AT id.
enum class Category { Topic, Protection, RiskArea, Summary, CrossDimensional };

// Third slot of risk-area identifiers.
enum class Aspect { RI, CR, ME, OA };

struct IdError : std::runtime_error {
  enum class Code { UnknownDimension, UnknownAreaCode, MalformedNumber, StructureViolation };
  IdError(Code c, std::string msg) : std::runtime_error(std::move(msg)), code(c) {}
  Code code;
};

// Parsed form of a catalog item identifier such as "FN-R-CD-CR-01".
//
// Shapes accepted:
//   AT                          cross-dimensional assessment
//   <DIM>-P / <DIM>-S           protection analysis / dimension summary
//   PF-T-<topic>-<nn>           AI-profile question
//   <DIM>-R-<area>-<aspect>[-nn] risk-area item (nn required for RI/CR/ME,
//                               optional for OA)
struct CatalogId {
  Dimension dimension = Dimension::AT;
  Category category = Category::CrossDimensional;
  std::optional<std::string> area;    // two-letter risk-area or topic code
  std::optional<Aspect> aspect;
  std::optional<int> number;          // positive; rendered zero-padded to two digits

  friend bool operator==(const CatalogId&, const CatalogId&) = default;
};

// Parses an identifier. Surrounding whitespace and one pair of square
// brackets are stripped; case is normalized. Throws IdError on anything
// outside the grammar.
CatalogId parse_id(std::string_view text);

// Canonical uppercase, hyphen-joined rendering; inverse of parse_id.
std::string format_id(const CatalogId& id);

// Total order: chapter order, then category (T < P < R < S), then area in
// per-dimension declaration order, then aspect (RI < CR < ME < OA), then
// number (absent sorts first).
std::strong_ordering order_ids(const CatalogId& a, const CatalogId& b);

struct IdLess {
  bool operator()(const CatalogId& a, const CatalogId& b) const {
    return order_ids(a, b) == std::strong_ordering::less;
  }
};

const char* dimension_code(Dimension d);
const char* aspect_code(Aspect a);
std::optional<Dimension> dimension_from_code(std::string_view code);

// Risk-area (or PF topic) codes valid for a dimension, in declaration order.
const std::vector<std::string>& area_codes(Dimension d);

}  // namespace trustcat
