#include "trustcat/ids.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace trustcat {

namespace {

const std::array<std::pair<const char*, Dimension>, 8> kDimensions = {{
    {"PF", Dimension::PF}, {"FN", Dimension::FN}, {"AC", Dimension::AC},
    {"TR", Dimension::TR}, {"RE", Dimension::RE}, {"S", Dimension::S},
    {"DP", Dimension::DP}, {"AT", Dimension::AT},
}};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : s) {
    if (c == '-') {
      tokens.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  tokens.push_back(current);
  return tokens;
}

[[noreturn]] void structure_error(const std::string& text, const std::string& why) {
  throw IdError(IdError::Code::StructureViolation, "malformed identifier '" + text + "': " + why);
}

int parse_number(const std::string& tok, const std::string& text) {
  if (tok.empty() || tok.size() > 2 ||
      !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw IdError(IdError::Code::MalformedNumber,
                  "bad number '" + tok + "' in identifier '" + text + "'");
  }
  int n = std::stoi(tok);
  if (n == 0) {
    throw IdError(IdError::Code::MalformedNumber,
                  "number must be positive in identifier '" + text + "'");
  }
  return n;
}

std::optional<Aspect> aspect_from_code(const std::string& code) {
  if (code == "RI") return Aspect::RI;
  if (code == "CR") return Aspect::CR;
  if (code == "ME") return Aspect::ME;
  if (code == "OA") return Aspect::OA;
  return std::nullopt;
}

void check_area(Dimension dim, const std::string& code, const std::string& text) {
  const auto& valid = area_codes(dim);
  if (std::find(valid.begin(), valid.end(), code) == valid.end()) {
    throw IdError(IdError::Code::UnknownAreaCode,
                  "area code '" + code + "' is not valid for dimension " +
                      dimension_code(dim) + " in identifier '" + text + "'");
  }
}

}  // namespace

const char* dimension_code(Dimension d) {
  for (const auto& [code, dim] : kDimensions)
    if (dim == d) return code;
  return "?";
}

const char* aspect_code(Aspect a) {
  switch (a) {
    case Aspect::RI: return "RI";
    case Aspect::CR: return "CR";
    case Aspect::ME: return "ME";
    case Aspect::OA: return "OA";
  }
  return "?";
}

std::optional<Dimension> dimension_from_code(std::string_view code) {
  for (const auto& [c, dim] : kDimensions)
    if (code == c) return dim;
  return std::nullopt;
}

const std::vector<std::string>& area_codes(Dimension d) {
  static const std::vector<std::string> pf = {"FA", "ST"};
  static const std::vector<std::string> fn = {"FN", "CD"};
  static const std::vector<std::string> ac = {"TD", "IE"};
  static const std::vector<std::string> tr = {"UA", "EX", "AU", "CD"};
  static const std::vector<std::string> re = {"SC", "RO", "IM", "UE", "CD"};
  static const std::vector<std::string> s = {"FS", "IA", "CD"};
  static const std::vector<std::string> dp = {"PD", "BI", "CD"};
  static const std::vector<std::string> none = {};
  switch (d) {
    case Dimension::PF: return pf;
    case Dimension::FN: return fn;
    case Dimension::AC: return ac;
    case Dimension::TR: return tr;
    case Dimension::RE: return re;
    case Dimension::S: return s;
    case Dimension::DP: return dp;
    case Dimension::AT: return none;
  }
  return none;
}

CatalogId parse_id(std::string_view text) {
  // Normalize: trim whitespace, strip one bracket pair, uppercase.
  size_t begin = text.find_first_not_of(" \t\r\n");
  size_t end = text.find_last_not_of(" \t\r\n");
  if (begin == std::string_view::npos) {
    throw IdError(IdError::Code::StructureViolation, "empty identifier");
  }
  std::string_view body = text.substr(begin, end - begin + 1);
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']') {
    body = body.substr(1, body.size() - 2);
  }
  std::string norm = upper(body);
  if (norm.empty()) structure_error(std::string(text), "empty identifier");

  std::vector<std::string> tok = split_tokens(norm);

  auto dim = dimension_from_code(tok[0]);
  if (!dim) {
    throw IdError(IdError::Code::UnknownDimension,
                  "unknown dimension '" + tok[0] + "' in identifier '" + norm + "'");
  }

  CatalogId id;
  id.dimension = *dim;

  if (*dim == Dimension::AT) {
    if (tok.size() != 1) structure_error(norm, "AT carries no further fields");
    id.category = Category::CrossDimensional;
    return id;
  }
  if (tok.size() < 2) structure_error(norm, "missing category");

  const std::string& cat = tok[1];
  if (cat == "T") {
    if (*dim != Dimension::PF) structure_error(norm, "topic category is valid only for PF");
    if (tok.size() != 4) structure_error(norm, "topic identifiers are PF-T-<topic>-<nn>");
    check_area(*dim, tok[2], norm);
    id.category = Category::Topic;
    id.area = tok[2];
    id.number = parse_number(tok[3], norm);
    return id;
  }
  if (*dim == Dimension::PF) structure_error(norm, "PF carries only topic identifiers");

  if (cat == "P" || cat == "S") {
    if (tok.size() != 2) structure_error(norm, "protection/summary identifiers carry no further fields");
    id.category = (cat == "P") ? Category::Protection : Category::Summary;
    return id;
  }
  if (cat != "R") structure_error(norm, "unknown category '" + cat + "'");

  if (tok.size() < 4) structure_error(norm, "risk-area identifiers need an area and an aspect");
  check_area(*dim, tok[2], norm);
  auto asp = aspect_from_code(tok[3]);
  if (!asp) structure_error(norm, "unknown aspect '" + tok[3] + "'");

  id.category = Category::RiskArea;
  id.area = tok[2];
  id.aspect = asp;
  if (tok.size() == 5) {
    id.number = parse_number(tok[4], norm);
  } else if (tok.size() == 4) {
    if (*asp != Aspect::OA) structure_error(norm, "number is required for RI/CR/ME items");
  } else {
    structure_error(norm, "too many fields");
  }
  return id;
}

std::string format_id(const CatalogId& id) {
  std::string out = dimension_code(id.dimension);
  switch (id.category) {
    case Category::CrossDimensional:
      return out;
    case Category::Protection:
      return out + "-P";
    case Category::Summary:
      return out + "-S";
    case Category::Topic:
      out += "-T";
      break;
    case Category::RiskArea:
      out += "-R";
      break;
  }
  if (id.area) out += "-" + *id.area;
  if (id.aspect) out += std::string("-") + aspect_code(*id.aspect);
  if (id.number) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "-%02d", *id.number);
    out += buf;
  }
  return out;
}

std::strong_ordering order_ids(const CatalogId& a, const CatalogId& b) {
  auto rank = [](Dimension d) {
    for (size_t i = 0; i < kDimensions.size(); ++i)
      if (kDimensions[i].second == d) return i;
    return kDimensions.size();
  };
  if (auto c = rank(a.dimension) <=> rank(b.dimension); c != 0) return c;

  auto cat_rank = [](Category c) {
    switch (c) {
      case Category::Topic: return 0;
      case Category::Protection: return 1;
      case Category::RiskArea: return 2;
      case Category::Summary: return 3;
      case Category::CrossDimensional: return 4;
    }
    return 5;
  };
  if (auto c = cat_rank(a.category) <=> cat_rank(b.category); c != 0) return c;

  auto area_rank = [](const CatalogId& id) -> size_t {
    if (!id.area) return 0;
    const auto& codes = area_codes(id.dimension);
    for (size_t i = 0; i < codes.size(); ++i)
      if (codes[i] == *id.area) return i;
    return codes.size();
  };
  if (auto c = area_rank(a) <=> area_rank(b); c != 0) return c;

  auto asp_rank = [](const std::optional<Aspect>& a) {
    return a ? static_cast<int>(*a) + 1 : 0;
  };
  if (auto c = asp_rank(a.aspect) <=> asp_rank(b.aspect); c != 0) return c;

  return a.number.value_or(0) <=> b.number.value_or(0);
}

}  // namespace trustcat
