#pragma once

// Name substitutions over axiom sets, used to check that the oracle tells
// corrupted translations apart from correct ones.

#include <set>
#include <string>
#include <vector>

#include "ruleowl/model.hpp"

namespace ruleowl {

// Applies `f` to every class name in `e`.
template <typename F>
ClassExpression map_class_names(const ClassExpression& e, F&& f) {
  ClassExpression out = e;
  if (out.kind == ClassExpression::Kind::Named) out.name = f(out.name);
  for (auto& op : out.operands) op = map_class_names(op, f);
  return out;
}

template <typename F>
Axiom map_class_names(const Axiom& ax, F&& f) {
  if (const auto* s = std::get_if<SubClassOf>(&ax))
    return SubClassOf{map_class_names(s->sub, f), map_class_names(s->sup, f)};
  return ax;
}

inline std::vector<Axiom> swap_class_names(const std::vector<Axiom>& axioms, const std::string& a,
                                           const std::string& b) {
  std::vector<Axiom> out;
  auto swap = [&](const std::string& n) { return n == a ? b : n == b ? a : n; };
  for (const auto& ax : axioms) out.push_back(canonicalize(map_class_names(ax, swap)));
  return out;
}

inline std::vector<Axiom> replace_class_name(const std::vector<Axiom>& axioms, const std::string& from,
                                             const std::string& to) {
  std::vector<Axiom> out;
  auto repl = [&](const std::string& n) { return n == from ? to : n; };
  for (const auto& ax : axioms) out.push_back(canonicalize(map_class_names(ax, repl)));
  return out;
}

inline std::set<std::string> class_names(const std::vector<Axiom>& axioms) {
  return signature_of(axioms).classes;
}

}  // namespace ruleowl
