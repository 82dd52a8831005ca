#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "doc_builder.hpp"
#include "trustcat/verdict.hpp"

using namespace trustcat;
using testdoc::complete_document;
using testdoc::levels_all;

namespace {

const Catalog& catalog() {
  static Catalog c = load_embedded_catalog();
  return c;
}

const std::array<Dimension, 6> kDims = {Dimension::FN, Dimension::AC, Dimension::TR,
                                        Dimension::RE, Dimension::S,  Dimension::DP};

// Independently coded decision rule, kept deliberately tiny: any
// unacceptable residual blocks; all negligible passes; otherwise residuals
// are acceptable only with full trade-off coverage and a sign-off.
VerdictOutcome truth_table(const std::array<ResidualClass, 6>& classes, bool full_coverage,
                           bool signoff) {
  bool any_unacceptable = false, all_negligible = true;
  for (auto c : classes) {
    if (c == ResidualClass::Unacceptable) any_unacceptable = true;
    if (c != ResidualClass::Negligible) all_negligible = false;
  }
  if (any_unacceptable) return VerdictOutcome::NotTrustworthy;
  if (all_negligible) return VerdictOutcome::Trustworthy;
  return full_coverage && signoff ? VerdictOutcome::TrustworthyWithResiduals
                                  : VerdictOutcome::NotTrustworthy;
}

int outcome_rank(VerdictOutcome o) {
  switch (o) {
    case VerdictOutcome::NotTrustworthy: return 0;
    case VerdictOutcome::TrustworthyWithResiduals: return 1;
    case VerdictOutcome::Trustworthy: return 2;
    case VerdictOutcome::NotAssessable: return -1;
  }
  return -1;
}

void apply_case(AssessmentDocument& doc, const std::array<ResidualClass, 6>& classes,
                bool full_coverage, bool signoff) {
  for (auto& s : doc.summaries) {
    for (size_t i = 0; i < kDims.size(); ++i)
      if (s.dimension == kDims[i]) s.residual_class = classes[i];
  }
  doc.tradeoffs.clear();
  if (full_coverage) {
    // three trade-offs covering every dimension as an endpoint
    doc.tradeoffs.push_back({Dimension::FN, Dimension::AC, Dimension::FN, "balanced by test"});
    doc.tradeoffs.push_back({Dimension::TR, Dimension::RE, Dimension::RE, "balanced by test"});
    doc.tradeoffs.push_back({Dimension::S, Dimension::DP, Dimension::DP, "balanced by test"});
  }
  if (signoff) {
    doc.signoff = Signoff{"approver", "2024-02-02", "residuals accepted"};
  } else {
    doc.signoff.reset();
  }
}

}  // namespace

TEST_CASE("risk area status") {
  OverallAssessmentRecord oa;
  oa.dimension = Dimension::FN;
  oa.area = "FN";
  oa.criteria_status[parse_id("FN-R-FN-CR-01")] = CriterionStatus::Met;
  CHECK(risk_area_status(oa) == RiskAreaStatus::Clean);

  oa.criteria_status[parse_id("FN-R-FN-CR-02")] = CriterionStatus::PartiallyMet;
  oa.deviations.push_back("bias metric above target on one cohort");
  CHECK(risk_area_status(oa) == RiskAreaStatus::WithDeviations);

  // deviations alone already mean the area is not clean
  OverallAssessmentRecord noted;
  noted.dimension = Dimension::FN;
  noted.area = "CD";
  noted.criteria_status[parse_id("FN-R-CD-CR-01")] = CriterionStatus::Met;
  noted.deviations.push_back("monitoring interval longer than planned");
  CHECK(risk_area_status(noted) == RiskAreaStatus::WithDeviations);
}

TEST_CASE("dimension summary consistency") {
  auto doc = complete_document(catalog(), ProtectionLevel::High);

  SUBCASE("clean areas allow a negligible class") {
    CHECK(dimension_summary_check(doc, Dimension::FN) == ResidualClass::Negligible);
  }
  SUBCASE("declared classes are returned") {
    for (auto& s : doc.summaries)
      if (s.dimension == Dimension::DP) s.residual_class = ResidualClass::Unacceptable;
    CHECK(dimension_summary_check(doc, Dimension::DP) == ResidualClass::Unacceptable);
  }
  SUBCASE("negligible with an unmentioned deviation is inconsistent") {
    for (auto& oa : doc.overall) {
      if (oa.dimension == Dimension::TR && oa.area == "EX") {
        oa.criteria_status[parse_id("TR-R-EX-CR-02")] = CriterionStatus::PartiallyMet;
        oa.deviations.push_back("explanation stability below target");
      }
    }
    try {
      dimension_summary_check(doc, Dimension::TR);
      FAIL("expected consistency error");
    } catch (const VerdictError& e) {
      CHECK(e.code == VerdictError::Code::Consistency);
    }
    // mentioning the deviation in the rationale resolves it
    for (auto& s : doc.summaries) {
      if (s.dimension == Dimension::TR)
        s.rationale = "residuals acceptable; explanation stability below target is tracked";
    }
    CHECK(dimension_summary_check(doc, Dimension::TR) == ResidualClass::Negligible);
  }
  SUBCASE("missing summary") {
    std::erase_if(doc.summaries,
                  [](const DimensionSummaryRecord& s) { return s.dimension == Dimension::AC; });
    try {
      dimension_summary_check(doc, Dimension::AC);
      FAIL("expected summary missing");
    } catch (const VerdictError& e) {
      CHECK(e.code == VerdictError::Code::SummaryMissing);
    }
  }
  SUBCASE("low dimensions are not checkable") {
    auto levels = levels_all(ProtectionLevel::High);
    levels[Dimension::FN] = ProtectionLevel::Low;
    auto low_doc = complete_document(catalog(), levels);
    CHECK_THROWS_AS(dimension_summary_check(low_doc, Dimension::FN), VerdictError);
  }
}

TEST_CASE("verdict requires a lint-clean document") {
  auto doc = complete_document(catalog(), ProtectionLevel::High);
  testdoc::drop_response(doc, "FN-R-FN-ME-01");
  try {
    cross_dimensional_verdict(catalog(), doc);
    FAIL("expected precondition violation");
  } catch (const VerdictError& e) {
    CHECK(e.code == VerdictError::Code::PreconditionViolated);
  }
}

TEST_CASE("verdict worked examples") {
  auto doc = complete_document(catalog(), ProtectionLevel::High);

  SUBCASE("all negligible is trustworthy") {
    auto v = cross_dimensional_verdict(catalog(), doc);
    CHECK(v.outcome == VerdictOutcome::Trustworthy);
    CHECK(v.blocking.empty());
  }
  SUBCASE("an unacceptable dimension blocks") {
    for (auto& s : doc.summaries)
      if (s.dimension == Dimension::S) s.residual_class = ResidualClass::Unacceptable;
    auto v = cross_dimensional_verdict(catalog(), doc);
    CHECK(v.outcome == VerdictOutcome::NotTrustworthy);
    REQUIRE(v.blocking.size() == 1);
    CHECK(v.blocking[0].first == "S");
  }
  SUBCASE("a covered residual with sign-off is accepted") {
    for (auto& s : doc.summaries)
      if (s.dimension == Dimension::TR) s.residual_class = ResidualClass::NonNegligibleAcceptable;
    doc.tradeoffs.push_back({Dimension::TR, Dimension::S, Dimension::S,
                             "explanations limited to protect against model extraction"});
    auto v = cross_dimensional_verdict(catalog(), doc);
    CHECK(v.outcome == VerdictOutcome::TrustworthyWithResiduals);
    REQUIRE(v.accepted_residuals.size() == 1);
    CHECK(v.accepted_residuals[0].first == "TR");
  }
  SUBCASE("an uncovered residual blocks") {
    for (auto& s : doc.summaries)
      if (s.dimension == Dimension::TR) s.residual_class = ResidualClass::NonNegligibleAcceptable;
    auto v = cross_dimensional_verdict(catalog(), doc);
    CHECK(v.outcome == VerdictOutcome::NotTrustworthy);
    bool tr_blocked = false;
    for (const auto& [d, reason] : v.blocking)
      if (d == "TR") tr_blocked = true;
    CHECK(tr_blocked);
  }
  SUBCASE("a covered residual without sign-off blocks") {
    for (auto& s : doc.summaries)
      if (s.dimension == Dimension::TR) s.residual_class = ResidualClass::NonNegligibleAcceptable;
    doc.tradeoffs.push_back({Dimension::TR, Dimension::S, Dimension::S, "justified"});
    doc.signoff.reset();
    auto v = cross_dimensional_verdict(catalog(), doc);
    CHECK(v.outcome == VerdictOutcome::NotTrustworthy);
  }
}

TEST_CASE("prioritization note when a high dimension yields to a medium one") {
  auto levels = levels_all(ProtectionLevel::Medium);
  levels[Dimension::S] = ProtectionLevel::High;
  auto doc = complete_document(catalog(), levels);
  for (auto& s : doc.summaries)
    if (s.dimension == Dimension::S) s.residual_class = ResidualClass::NonNegligibleAcceptable;

  SUBCASE("deprioritizing the high dimension draws a note") {
    doc.tradeoffs.push_back({Dimension::S, Dimension::TR, Dimension::TR,
                             "transparency prioritized for user trust"});
    auto v = cross_dimensional_verdict(catalog(), doc);
    CHECK(v.outcome == VerdictOutcome::TrustworthyWithResiduals);
    REQUIRE(v.notes.size() == 1);
    CHECK(v.notes[0].find("high protection requirement") != std::string::npos);
  }
  SUBCASE("prioritizing the high dimension does not") {
    doc.tradeoffs.push_back({Dimension::S, Dimension::TR, Dimension::S, "safety first"});
    auto v = cross_dimensional_verdict(catalog(), doc);
    CHECK(v.outcome == VerdictOutcome::TrustworthyWithResiduals);
    CHECK(v.notes.empty());
  }
}

TEST_CASE("exhaustive truth table of 2916 cases") {
  auto base = complete_document(catalog(), ProtectionLevel::High);
  int cases = 0;
  for (int mask = 0; mask < 729; ++mask) {
    std::array<ResidualClass, 6> classes;
    int m = mask;
    for (int i = 0; i < 6; ++i) {
      classes[i] = static_cast<ResidualClass>(m % 3);
      m /= 3;
    }
    for (bool full_coverage : {false, true}) {
      for (bool signoff : {false, true}) {
        apply_case(base, classes, full_coverage, signoff);
        auto v = cross_dimensional_verdict(catalog(), base);
        VerdictOutcome expected = truth_table(classes, full_coverage, signoff);
        CAPTURE(mask);
        CAPTURE(full_coverage);
        CAPTURE(signoff);
        REQUIRE(v.outcome == expected);
        // structural postconditions from the outcome contract
        if (v.outcome == VerdictOutcome::NotTrustworthy) REQUIRE_FALSE(v.blocking.empty());
        ++cases;
      }
    }
  }
  CHECK(cases == 2916);
}

TEST_CASE("monotonicity: degrading one dimension never improves the outcome") {
  auto base = complete_document(catalog(), ProtectionLevel::High);
  for (int mask = 0; mask < 729; ++mask) {
    std::array<ResidualClass, 6> classes;
    int m = mask;
    for (int i = 0; i < 6; ++i) {
      classes[i] = static_cast<ResidualClass>(m % 3);
      m /= 3;
    }
    for (bool full_coverage : {false, true}) {
      for (bool signoff : {false, true}) {
        VerdictOutcome before = truth_table(classes, full_coverage, signoff);
        for (int i = 0; i < 6; ++i) {
          if (classes[i] != ResidualClass::Negligible) continue;
          auto worse = classes;
          worse[i] = ResidualClass::Unacceptable;
          VerdictOutcome after = truth_table(worse, full_coverage, signoff);
          REQUIRE(outcome_rank(after) <= outcome_rank(before));
        }
      }
    }
  }
  // and the engine agrees with the oracle on a degraded spot check
  std::array<ResidualClass, 6> classes;
  classes.fill(ResidualClass::Negligible);
  apply_case(base, classes, true, true);
  CHECK(cross_dimensional_verdict(catalog(), base).outcome == VerdictOutcome::Trustworthy);
  classes[3] = ResidualClass::Unacceptable;
  apply_case(base, classes, true, true);
  CHECK(cross_dimensional_verdict(catalog(), base).outcome == VerdictOutcome::NotTrustworthy);
}

TEST_CASE("low dimensions are ignored entirely") {
  auto levels = levels_all(ProtectionLevel::High);
  levels[Dimension::FN] = ProtectionLevel::Low;
  auto doc = complete_document(catalog(), levels);

  // add a voluntary summary for the low dimension and toggle its class;
  // the verdict must not move
  doc.summaries.push_back({Dimension::FN, ResidualClass::Negligible, "voluntary fairness note", {}});
  auto v1 = cross_dimensional_verdict(catalog(), doc);
  CHECK(v1.outcome == VerdictOutcome::Trustworthy);

  for (auto& s : doc.summaries)
    if (s.dimension == Dimension::FN) s.residual_class = ResidualClass::Unacceptable;
  auto v2 = cross_dimensional_verdict(catalog(), doc);
  CHECK(v2.outcome == VerdictOutcome::Trustworthy);

  for (auto& s : doc.summaries)
    if (s.dimension == Dimension::FN) s.residual_class = ResidualClass::NonNegligibleAcceptable;
  auto v3 = cross_dimensional_verdict(catalog(), doc);
  CHECK(v3.outcome == VerdictOutcome::Trustworthy);
  CHECK(v3.accepted_residuals.empty());
}
