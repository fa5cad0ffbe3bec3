#include <gtest/gtest.h>

#include "ruleowl/mutation.hpp"
#include "ruleowl/oracle.hpp"
#include "ruleowl/rule_parser.hpp"
#include "ruleowl/transformer.hpp"
#include "support/generators.hpp"

namespace ruleowl {
namespace {

using CE = ClassExpression;
using RE = RoleExpression;

Rule rule(std::string_view text) { return parse_rule(text).front(); }

Interpretation two_elements() {
  Interpretation I;
  I.domain_size = 2;
  return I;
}

// pair (d, e) in a domain of size n
Mask pair(std::size_t n, std::size_t d, std::size_t e) { return Mask{1} << (d * n + e); }

TEST(RuleHolds, ClassHead) {
  auto r = rule("A(?x) ^ R(?x, ?y) -> B(?x)");
  auto I = two_elements();
  I.class_ext["A"] = 0b01;
  I.role_ext["R"] = pair(2, 0, 1);
  EXPECT_FALSE(rule_holds(I, r));
  I.class_ext["B"] = 0b01;
  EXPECT_TRUE(rule_holds(I, r));
  I.role_ext["R"] = pair(2, 1, 0);
  I.class_ext["B"] = 0;
  EXPECT_TRUE(rule_holds(I, r));
}

TEST(RuleHolds, PropertyHeadWithUnrelatedVariables) {
  auto r = rule("Mouse(?x) ^ Elephant(?y) -> smallerThan(?x, ?y)");
  auto I = two_elements();
  I.class_ext["Mouse"] = 0b01;
  I.class_ext["Elephant"] = 0b10;
  EXPECT_FALSE(rule_holds(I, r));
  I.role_ext["smallerThan"] = pair(2, 0, 1);
  EXPECT_TRUE(rule_holds(I, r));
}

TEST(AxiomHolds, SubClassAndChains) {
  auto I = two_elements();
  I.class_ext["A"] = 0b11;
  I.role_ext["R"] = pair(2, 0, 1);
  I.role_ext["S"] = pair(2, 1, 1);
  EXPECT_FALSE(axiom_holds(I, SubClassOf{CE::named("A"), CE::some(RE::named("R"), CE::top())}));
  EXPECT_TRUE(axiom_holds(I, SubClassOf{CE::some(RE::named("R"), CE::top()), CE::named("A")}));
  EXPECT_TRUE(axiom_holds(I, SubClassOf{CE::named("A"), CE::some(RE::universal(), CE::has_self(RE::named("S")))}));
  EXPECT_FALSE(axiom_holds(I, SubObjectPropertyOf{{RE::named("R"), RE::named("S")}, "T"}));
  I.role_ext["T"] = pair(2, 0, 1);
  EXPECT_TRUE(axiom_holds(I, SubObjectPropertyOf{{RE::named("R"), RE::named("S")}, "T"}));
  EXPECT_FALSE(axiom_holds(I, SubObjectPropertyOf{{RE::inverse(RE::named("R"))}, "T"}));
  EXPECT_TRUE(axiom_holds(I, Declaration{EntityKind::Class, "Q"}));
}

TEST(AxiomHolds, NominalsAreRejected) {
  auto I = two_elements();
  EXPECT_THROW(axiom_holds(I, SubClassOf{CE::nominal("z"), CE::named("A")}), std::invalid_argument);
}

TEST(CanonicalExtension, InterpretsFreshRoleAsDiagonal) {
  auto I = two_elements();
  I.class_ext["Mouse"] = 0b10;
  auto J = canonical_extension(I, {{"R_Mouse", CE::named("Mouse")}});
  EXPECT_EQ(J.role("R_Mouse"), pair(2, 1, 1));
  EXPECT_THROW(canonical_extension(J, {{"R_Mouse", CE::named("Mouse")}}), std::invalid_argument);
}

TEST(CheckEquivalence, PassesForCorrectTranslations) {
  for (const char* text : {"attends(?x, ?y) ^ Course(?y) ^ worksFor(?x, ?z) ^ Dept(?z) -> StudentWorker(?x)",
                           "Mouse(?x) ^ Elephant(?y) -> smallerThan(?x, ?y)",
                           "hasParent(?x, ?y) ^ hasBrother(?y, ?z) -> hasUncle(?x, ?z)",
                           "R(?x, ?x) ^ A(?x) -> B(?x)", "A(?x) -> R(?x, ?x)"}) {
    auto r = rule(text);
    auto s = std::get<Success>(convert(r, {}));
    auto v = check_equivalence(r, s, 2);
    EXPECT_TRUE(v.pass) << text << "\n" << (v.counterexample ? v.counterexample->dump() : "");
    EXPECT_TRUE(v.exhaustive);
    EXPECT_GT(v.interpretations_checked, 0u);
  }
}

TEST(CheckEquivalence, DetectsWrongAxioms) {
  auto r = rule("attends(?x, ?y) ^ Course(?y) ^ worksFor(?x, ?z) ^ Dept(?z) -> StudentWorker(?x)");
  auto s = std::get<Success>(convert(r, {}));
  auto bad = replace_class_name(s.axioms, "Dept", "Course");
  auto v = check_equivalence(r, bad, {});
  EXPECT_FALSE(v.pass);
  ASSERT_TRUE(v.counterexample);
  EXPECT_NE(rule_holds(*v.counterexample, r), axioms_hold(*v.counterexample, bad));
}

TEST(CheckEquivalence, DetectsMissingSelfAxiom) {
  auto r = rule("Mouse(?x) ^ Elephant(?y) -> smallerThan(?x, ?y)");
  auto s = std::get<Success>(convert(r, {}));
  auto axioms = s.axioms;
  // without the chain only the always-true Self axioms remain
  axioms.pop_back();
  EXPECT_FALSE(check_equivalence(r, axioms, s.fresh_roles).pass);
}

TEST(CheckEquivalence, SamplesLargeSignatures) {
  auto r = rule("R(?x, ?y) ^ S(?y, ?z) ^ T(?z, ?w) ^ A(?w) -> B(?x)");
  auto s = std::get<Success>(convert(r, {}));
  OracleConfig cfg;
  cfg.max_domain = 3;
  cfg.samples = 5000;
  auto v = check_equivalence(r, s.axioms, s.fresh_roles, cfg);
  EXPECT_TRUE(v.pass);
  EXPECT_FALSE(v.exhaustive);
}

TEST(CheckEquivalence, SeedMakesSamplingReproducible) {
  auto r = rule("R(?x, ?y) ^ S(?y, ?z) -> B(?x)");
  auto wrong = std::vector<Axiom>{SubClassOf{CE::some(RE::named("R"), CE::top()), CE::named("B")}};
  OracleConfig cfg;
  cfg.max_domain = 3;
  cfg.bit_budget = 0;
  cfg.samples = 2000;
  auto a = check_equivalence(r, wrong, {}, cfg);
  auto b = check_equivalence(r, wrong, {}, cfg);
  ASSERT_FALSE(a.pass);
  EXPECT_EQ(a.interpretations_checked, b.interpretations_checked);
}

TEST(CheckEquivalence, RejectsBadDomain) {
  auto r = rule("A(?x) -> B(?x)");
  OracleConfig cfg;
  cfg.max_domain = 0;
  EXPECT_THROW(check_equivalence(r, {}, {}, cfg), std::invalid_argument);
  cfg.max_domain = kMaxOracleDomain + 1;
  EXPECT_THROW(check_equivalence(r, {}, {}, cfg), std::invalid_argument);
}

TEST(CheckEquivalence, RandomTranslationsAtDomainThree) {
  testing::Gen gen(23);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 40; ++i) {
    auto r = gen.rule();
    auto res = convert(r, {});
    if (!is_success(res)) continue;
    ++checked;
    OracleConfig cfg;
    cfg.max_domain = 3;
    cfg.samples = 2000;
    auto v = check_equivalence(r, std::get<Success>(res).axioms, std::get<Success>(res).fresh_roles, cfg);
    EXPECT_TRUE(v.pass) << render_rule(r) << "\n" << (v.counterexample ? v.counterexample->dump() : "");
  }
  EXPECT_GE(checked, 40);
}

}  // namespace
}  // namespace ruleowl
