#pragma once

// Nominal-schema grounding options for rules that do not roll up.
//
// Grounding a variable v treats it as a nominal schema {?v}: every property
// atom linking v to another variable w becomes an existential restriction
// into {?v} on w, which removes v from the rule graph.

#include <algorithm>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ruleowl/model.hpp"
#include "ruleowl/rule_graph.hpp"

namespace ruleowl {

struct GroundingOption {
  std::set<std::string> variables;
  friend bool operator==(const GroundingOption&, const GroundingOption&) = default;
};

// Above this many candidate variables only options of cardinality <= 3 are tried.
inline constexpr std::size_t kMaxExhaustiveCandidates = 16;
inline constexpr std::size_t kTruncatedCardinality = 3;

inline std::string join_variables(const std::set<std::string>& vars, const char* sep = ",") {
  std::string out;
  for (const auto& v : vars) {
    if (!out.empty()) out += sep;
    out += v;
  }
  return out;
}

inline std::vector<std::string> grounding_candidates(const Rule& rule) {
  std::vector<std::string> out;
  auto head = rule.head_variables();
  for (const auto& v : rule.body_variables())
    if (!head.count(v)) out.push_back(v);
  return out;
}

namespace detail {

inline void check_option_pre(const Rule& rule, const GroundingOption& option) {
  if (option.variables.empty()) throw std::invalid_argument("grounding option must name at least one variable");
  auto body = rule.body_variables();
  auto head = rule.head_variables();
  for (const auto& v : option.variables) {
    if (!body.count(v)) throw std::invalid_argument("?" + v + " is not a body variable");
    if (head.count(v)) throw std::invalid_argument("head variable ?" + v + " cannot be grounded");
  }
}

}  // namespace detail

// Residual rule graph after treating the option's variables as nominal
// schemas. Class atoms on grounded variables are dropped; an atom between
// two grounded variables becomes a Universal-guarded condition on the
// first head variable.
inline RuleGraph split_graph(const Rule& rule, const GroundingOption& option) {
  detail::check_option_pre(rule, option);
  const auto& grounded = option.variables;
  auto is_g = [&](const std::string& v) { return grounded.count(v) > 0; };
  RuleGraph g;
  const std::string& anchor = rule.head().arg(0);
  for (const auto& a : rule.body()) {
    for (const auto& t : a.args)
      if (!is_g(t.name)) g.nodes.insert(t.name);
    if (a.is_class()) {
      if (!is_g(a.arg(0))) g.labels[a.arg(0)].push_back(ClassExpression::named(a.predicate));
      continue;
    }
    const auto& from = a.arg(0);
    const auto& to = a.arg(1);
    const auto role = RoleExpression::named(a.predicate);
    if (!is_g(from) && !is_g(to)) {
      g.edges.push_back({a.predicate, from, to});
    } else if (!is_g(from)) {
      g.labels[from].push_back(ClassExpression::some(role, ClassExpression::nominal(to)));
    } else if (!is_g(to)) {
      g.labels[to].push_back(ClassExpression::some(RoleExpression::inverse(role), ClassExpression::nominal(from)));
    } else if (from != to) {
      g.labels[anchor].push_back(ClassExpression::some(
          RoleExpression::universal(),
          conjunction({ClassExpression::nominal(from), ClassExpression::some(role, ClassExpression::nominal(to))})));
    }
  }
  g.absorb_self_loops();
  return g;
}

inline FinishResult translate_split(const Rule& rule, const GroundingOption& option) {
  Signature sig = signature_of(rule);
  FreshRoleNamer namer(sig);
  return translate_graph(split_graph(rule, option), rule.head(), namer);
}

inline bool check_option(const Rule& rule, const GroundingOption& option) {
  return std::holds_alternative<HeadTranslation>(translate_split(rule, option));
}

// All minimal valid options ordered by cardinality, then lexicographically.
inline std::vector<GroundingOption> enumerate_options(const Rule& rule, bool* truncated = nullptr) {
  const auto cands = grounding_candidates(rule);
  const std::size_t n = cands.size();
  const std::size_t max_card = n > kMaxExhaustiveCandidates ? kTruncatedCardinality : n;
  if (truncated) *truncated = n > kMaxExhaustiveCandidates;

  {
    Signature sig = signature_of(rule);
    FreshRoleNamer namer(sig);
    if (std::holds_alternative<HeadTranslation>(translate_graph(RuleGraph::from_body(rule.body()), rule.head(), namer)))
      return {};
  }

  std::vector<GroundingOption> found;
  // Lexicographic combinations of each cardinality via an index vector.
  for (std::size_t k = 1; k <= max_card; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      GroundingOption opt;
      for (auto i : idx) opt.variables.insert(cands[i]);
      bool has_valid_subset = std::any_of(found.begin(), found.end(), [&](const GroundingOption& f) {
        return std::includes(opt.variables.begin(), opt.variables.end(), f.variables.begin(), f.variables.end());
      });
      if (!has_valid_subset && check_option(rule, opt)) found.push_back(std::move(opt));

      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return found;
}

inline Axiom annotate_rule(const Rule& rule, const GroundingOption& option) {
  detail::check_option_pre(rule, option);
  return AnnotatedSwrlRule{rule, {{names::kNominalSchemaVariables, join_variables(option.variables)}}};
}

// Manchester-style pseudo-axioms for the grounded rule, one per line, with
// nominal schemas shown as {?v}. Display only.
inline std::string render_ns_preview(const Rule& rule, const GroundingOption& option) {
  auto res = translate_split(rule, option);
  const auto* tr = std::get_if<HeadTranslation>(&res);
  if (!tr) throw std::invalid_argument("grounding {" + join_variables(option.variables) + "} does not make the rule translatable");
  std::string out;
  for (const auto& ax : tr->axioms) {
    if (!out.empty()) out += "\n";
    if (const auto* s = std::get_if<SubClassOf>(&ax)) {
      out += manchester(s->sub) + " SubClassOf " + manchester(s->sup);
    } else if (const auto* p = std::get_if<SubObjectPropertyOf>(&ax)) {
      for (std::size_t i = 0; i < p->chain.size(); ++i) {
        if (i) out += " o ";
        out += manchester(p->chain[i]);
      }
      out += " SubPropertyOf " + p->sup;
    }
  }
  return out;
}

}  // namespace ruleowl
