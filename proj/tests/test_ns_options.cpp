#include <gtest/gtest.h>

#include "ruleowl/ns_options.hpp"
#include "ruleowl/rule_parser.hpp"
#include "ruleowl/transformer.hpp"
#include "support/generators.hpp"

namespace ruleowl {
namespace {

Rule rule(std::string_view text) { return parse_rule(text).front(); }

const char* kTaughtByUncle = "hasFather(?x, ?y) ^ hasBrother(?y, ?z) ^ taughtBy(?x, ?z) -> TaughtByUncle(?x)";
const char* kStudentWorker = "attends(?x, ?y) ^ Course(?y) ^ worksFor(?x, ?z) ^ Dept(?z) -> StudentWorker(?x)";

GroundingOption opt(std::set<std::string> v) { return GroundingOption{std::move(v)}; }

TEST(EnumerateOptions, TaughtByUncle) {
  auto r = rule(kTaughtByUncle);
  EXPECT_EQ(enumerate_options(r), (std::vector<GroundingOption>{opt({"y"}), opt({"z"})}));
}

TEST(EnumerateOptions, TranslatableRuleHasNone) {
  EXPECT_TRUE(enumerate_options(rule(kStudentWorker)).empty());
}

TEST(EnumerateOptions, ParallelEdgesGroundTheSharedVariable) {
  auto r = rule("R(?x, ?v) ^ S(?x, ?v) ^ T(?x, ?v) -> C(?x)");
  EXPECT_EQ(enumerate_options(r), std::vector<GroundingOption>{opt({"v"})});
}

TEST(EnumerateOptions, MultiVariableOptionsAreMinimal) {
  // two independent triangles through x: one variable from each must be grounded
  auto r = rule("R(?x, ?a) ^ S(?a, ?b) ^ T(?b, ?x) ^ R(?x, ?c) ^ S(?c, ?d) ^ T(?d, ?x) -> C(?x)");
  auto opts = enumerate_options(r);
  EXPECT_EQ(opts, (std::vector<GroundingOption>{opt({"a", "c"}), opt({"a", "d"}), opt({"b", "c"}), opt({"b", "d"})}));
}

TEST(CheckOption, TaughtByUncle) {
  auto r = rule(kTaughtByUncle);
  EXPECT_TRUE(check_option(r, opt({"z"})));
  EXPECT_TRUE(check_option(r, opt({"y"})));
  EXPECT_TRUE(check_option(r, opt({"y", "z"})));
  EXPECT_THROW(check_option(r, opt({})), std::invalid_argument);
  EXPECT_THROW(check_option(r, opt({"x"})), std::invalid_argument);
  EXPECT_THROW(check_option(r, opt({"q"})), std::invalid_argument);
}

TEST(CheckOption, SplitGraphReplacesGroundedEdges) {
  auto g = split_graph(rule(kTaughtByUncle), opt({"z"}));
  EXPECT_EQ(g.nodes, (std::set<std::string>{"x", "y"}));
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0].property, "hasFather");
  EXPECT_EQ(g.labels.at("y"),
            std::vector<ClassExpression>{ClassExpression::some(RoleExpression::named("hasBrother"), ClassExpression::nominal("z"))});
}

TEST(AnnotateRule, RecordsSortedVariables) {
  auto r = rule(kTaughtByUncle);
  auto ax = annotate_rule(r, opt({"z"}));
  const auto& a = std::get<AnnotatedSwrlRule>(ax);
  EXPECT_EQ(a.rule, r);
  EXPECT_EQ(a.annotations, (std::vector<Annotation>{{"rowl:nominalSchemaVariables", "z"}}));
  EXPECT_EQ(std::get<AnnotatedSwrlRule>(annotate_rule(r, opt({"y"}))).annotations[0].value, "y");
  auto r2 = rule("R(?x, ?b) ^ S(?x, ?a) -> C(?x)");
  EXPECT_EQ(std::get<AnnotatedSwrlRule>(annotate_rule(r2, opt({"b", "a"}))).annotations[0].value, "a,b");
}

TEST(RenderNsPreview, Examples) {
  EXPECT_EQ(render_ns_preview(rule(kTaughtByUncle), opt({"z"})),
            "(hasFather some (hasBrother some {?z})) and (taughtBy some {?z}) SubClassOf TaughtByUncle");
  EXPECT_EQ(render_ns_preview(rule("A(?x) ^ R(?x, ?v) ^ S(?x, ?v) -> C(?x)"), opt({"v"})),
            "A and (R some {?v}) and (S some {?v}) SubClassOf C");
}

TEST(RenderNsPreview, RejectsUselessOption) {
  auto r = rule("R(?x, ?a) ^ S(?a, ?b) ^ T(?b, ?x) ^ R(?x, ?c) ^ S(?c, ?d) ^ T(?d, ?x) -> C(?x)");
  EXPECT_THROW(render_ns_preview(r, opt({"a"})), std::invalid_argument);
}

TEST(Options, InvariantsOnRandomRules) {
  testing::Gen gen(17);
  int untranslatable = 0;
  for (int i = 0; i < 2000; ++i) {
    auto r = gen.rule();
    auto opts = enumerate_options(r);
    if (is_success(convert(r, {}, {RollOrder::Lexicographic, false}))) {
      EXPECT_TRUE(opts.empty()) << render_rule(r);
      continue;
    }
    ++untranslatable;
    for (std::size_t a = 0; a < opts.size(); ++a) {
      EXPECT_TRUE(check_option(r, opts[a]));
      for (std::size_t b = 0; b < opts.size(); ++b) {
        if (a == b) continue;
        const auto& A = opts[a].variables;
        const auto& B = opts[b].variables;
        EXPECT_FALSE(std::includes(A.begin(), A.end(), B.begin(), B.end())) << render_rule(r);
      }
      // minimality: dropping any one variable breaks the option
      for (const auto& v : opts[a].variables) {
        auto smaller = opts[a].variables;
        smaller.erase(v);
        if (!smaller.empty()) EXPECT_FALSE(check_option(r, {smaller})) << render_rule(r);
      }
    }
    for (std::size_t a = 1; a < opts.size(); ++a) {
      const auto& p = opts[a - 1].variables;
      const auto& q = opts[a].variables;
      EXPECT_TRUE(p.size() < q.size() || (p.size() == q.size() && p < q));
    }

    // Grounding every candidate always works for class heads. For property
    // heads it works unless the head variables alone are joined by a
    // non-path residue (parallel atoms between x and y), which no grounding
    // can remove.
    auto cands = grounding_candidates(r);
    if (cands.empty()) continue;
    GroundingOption all{{cands.begin(), cands.end()}};
    if (r.head().is_class() || r.head().arg(0) == r.head().arg(1)) {
      EXPECT_TRUE(check_option(r, all)) << render_rule(r);
      EXPECT_FALSE(opts.empty()) << render_rule(r);
    }
  }
  EXPECT_GT(untranslatable, 50);
}

}  // namespace
}  // namespace ruleowl
