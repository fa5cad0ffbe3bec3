#pragma once

// Rule to OWL axiom compilation.
//
// Variables that occur in a single property atom are rolled up into
// existential restrictions; class atoms on one variable are conjoined.
// Class-atom heads then yield one SubClassOf axiom. Property-atom heads
// R(x, y) yield a property chain along the x..y path (Universal links join
// disconnected parts) with each class guard encoded as C SubClassOf R_C Self.

#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ruleowl/model.hpp"
#include "ruleowl/ns_options.hpp"
#include "ruleowl/rule_graph.hpp"

namespace ruleowl {

struct Success {
  std::vector<Axiom> axioms;
  std::vector<FreshRole> fresh_roles;
  std::vector<std::string> warnings;
};

struct UntranslatableRule {
  std::string reason;
  std::vector<GroundingOption> options;
  bool options_truncated = false;
};

using ConversionResult = std::variant<Success, UntranslatableRule>;

inline bool is_success(const ConversionResult& r) { return std::holds_alternative<Success>(r); }

struct ConvertOptions {
  RollOrder order = RollOrder::Lexicographic;
  bool enumerate_grounding = true;
};

inline ConversionResult convert(const Rule& rule, const Signature& sig, const ConvertOptions& opts = {}) {
  // Names of the rule itself are never reused for fresh roles, even when
  // they are not yet part of the ontology signature.
  std::set<std::string> reserved;
  {
    auto own = signature_of(rule);
    reserved.insert(own.classes.begin(), own.classes.end());
    reserved.insert(own.object_properties.begin(), own.object_properties.end());
  }
  FreshRoleNamer namer(sig, std::move(reserved));
  auto res = translate_graph(RuleGraph::from_body(rule.body()), rule.head(), namer, opts.order);
  if (auto* tr = std::get_if<HeadTranslation>(&res)) {
    Success s;
    s.axioms.reserve(tr->axioms.size());
    for (auto& ax : tr->axioms) s.axioms.push_back(canonicalize(ax));
    s.fresh_roles = std::move(tr->fresh_roles);
    s.warnings = std::move(tr->warnings);
    return s;
  }
  UntranslatableRule u;
  u.reason = std::get<Untranslatable>(res).reason;
  if (opts.enumerate_grounding) u.options = enumerate_options(rule, &u.options_truncated);
  return u;
}

}  // namespace ruleowl
