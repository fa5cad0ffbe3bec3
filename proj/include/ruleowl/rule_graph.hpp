#pragma once

// Graph view of a rule body and the roll-up machinery that folds it into
// class expressions and property chains.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ruleowl/model.hpp"

namespace ruleowl {

struct Edge {
  std::string property;
  std::string from;
  std::string to;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct RuleGraph {
  std::set<std::string> nodes;
  std::vector<Edge> edges;
  std::map<std::string, std::vector<ClassExpression>> labels;

  // Edges R(v, v) count twice.
  std::size_t degree(const std::string& v) const {
    std::size_t d = 0;
    for (const auto& e : edges) d += (e.from == v) + (e.to == v);
    return d;
  }

  // Rewrites every self-loop R(v, v) into a HasSelf(R) label on v.
  void absorb_self_loops() {
    auto it = std::remove_if(edges.begin(), edges.end(), [&](const Edge& e) {
      if (e.from != e.to) return false;
      labels[e.from].push_back(ClassExpression::has_self(RoleExpression::named(e.property)));
      return true;
    });
    edges.erase(it, edges.end());
  }

  static RuleGraph from_body(const std::vector<Atom>& body) {
    RuleGraph g;
    for (const auto& a : body) {
      for (const auto& t : a.args) g.nodes.insert(t.name);
      if (a.is_class()) {
        g.labels[a.arg(0)].push_back(ClassExpression::named(a.predicate));
      } else {
        g.edges.push_back({a.predicate, a.arg(0), a.arg(1)});
      }
    }
    g.absorb_self_loops();
    return g;
  }
};

// Order in which eligible roll-up variables are picked.
enum class RollOrder { Lexicographic, ReverseLexicographic };

struct NoStep {};

inline ClassExpression unify_labels(const RuleGraph& g, const std::string& v) {
  auto it = g.labels.find(v);
  if (it == g.labels.end()) return ClassExpression::top();
  return conjunction(it->second);
}

// One roll-up: folds a non-head variable of degree 1 into the label of its
// only neighbour. Returns NoStep at the fixpoint.
inline std::variant<RuleGraph, NoStep> roll_up_step(RuleGraph g, const std::set<std::string>& head_vars,
                                                     RollOrder order = RollOrder::Lexicographic) {
  g.absorb_self_loops();
  std::vector<std::string> eligible;
  for (const auto& v : g.nodes)
    if (!head_vars.count(v) && g.degree(v) == 1) eligible.push_back(v);
  if (eligible.empty()) return NoStep{};
  const std::string v = order == RollOrder::Lexicographic ? eligible.front() : eligible.back();

  auto eit = std::find_if(g.edges.begin(), g.edges.end(), [&](const Edge& e) { return e.from == v || e.to == v; });
  Edge edge = *eit;
  g.edges.erase(eit);

  ClassExpression filler = unify_labels(g, v);
  if (edge.to == v) {
    g.labels[edge.from].push_back(ClassExpression::some(RoleExpression::named(edge.property), std::move(filler)));
  } else {
    g.labels[edge.to].push_back(
        ClassExpression::some(RoleExpression::inverse(RoleExpression::named(edge.property)), std::move(filler)));
  }
  g.labels.erase(v);
  g.nodes.erase(v);
  return g;
}

inline RuleGraph roll_up_fixpoint(RuleGraph g, const std::set<std::string>& head_vars,
                                  RollOrder order = RollOrder::Lexicographic) {
  for (;;) {
    auto step = roll_up_step(g, head_vars, order);
    if (std::holds_alternative<NoStep>(step)) return g;
    g = std::move(std::get<RuleGraph>(step));
  }
}

// Mints fresh role names for Self-encoded class guards. Named sources C get
// R_C; complex sources get R_C1, R_C2, ... in minting order. Collisions
// with the signature or earlier names append _2, _3, ...
class FreshRoleNamer {
 public:
  explicit FreshRoleNamer(const Signature& sig, std::set<std::string> used = {}) : sig_(&sig), used_(std::move(used)) {}

  std::string next(const ClassExpression& source) {
    std::string base;
    if (source.kind == ClassExpression::Kind::Named) {
      base = "R_" + source.name;
      std::replace(base.begin(), base.end(), ':', '_');
    } else {
      base = "R_C" + std::to_string(++complex_counter_);
    }
    std::string name = base;
    for (int k = 2; taken(name); ++k) name = base + "_" + std::to_string(k);
    used_.insert(name);
    return name;
  }

  const std::set<std::string>& used() const { return used_; }

 private:
  bool taken(const std::string& n) const { return sig_->contains(n) || used_.count(n); }

  const Signature* sig_;
  std::set<std::string> used_;
  int complex_counter_ = 0;
};

inline std::string fresh_role_name(const ClassExpression& source, const Signature& sig, std::set<std::string>& used) {
  FreshRoleNamer namer(sig, used);
  auto n = namer.next(source);
  used = namer.used();
  return n;
}

struct FreshRole {
  std::string name;
  ClassExpression source;
  friend bool operator==(const FreshRole&, const FreshRole&) = default;
};

struct HeadTranslation {
  std::vector<Axiom> axioms;
  std::vector<FreshRole> fresh_roles;
  std::vector<std::string> warnings;
};

struct Untranslatable {
  std::string reason;
};

using FinishResult = std::variant<HeadTranslation, Untranslatable>;

namespace detail {

inline std::string describe_edges(const std::vector<Edge>& edges) {
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out += ", ";
    out += edges[i].property + "(?" + edges[i].from + ", ?" + edges[i].to + ")";
  }
  return out;
}

}  // namespace detail

// Class-atom head C(x), or property-atom head R(x, x) when self_role is set.
// Expects g at the roll-up fixpoint for head variables {x}.
inline FinishResult finish_class_head(RuleGraph g, const std::string& x, const std::string& head_name,
                                      bool self_role = false) {
  if (!g.edges.empty())
    return Untranslatable{"body contains a cycle or a variable shared by several property atoms: " +
                          detail::describe_edges(g.edges)};
  for (const auto& v : g.nodes) {
    if (v == x) continue;
    g.labels[x].push_back(ClassExpression::some(RoleExpression::universal(), unify_labels(g, v)));
  }
  ClassExpression sup = self_role ? ClassExpression::has_self(RoleExpression::named(head_name))
                                  : ClassExpression::named(head_name);
  HeadTranslation out;
  out.axioms.push_back(SubClassOf{unify_labels(g, x), std::move(sup)});
  return out;
}

// Property-atom head R(x, y) with x != y. Expects g at the roll-up fixpoint
// for head variables {x, y}.
inline FinishResult finish_role_head(RuleGraph g, const std::string& x, const std::string& y,
                                     const std::string& head_role, FreshRoleNamer& namer) {
  // Walk from x along a simple path of remaining edges.
  std::vector<std::string> path{x};
  std::vector<RoleExpression> steps;
  std::vector<bool> used(g.edges.size(), false);
  std::string cur = x;
  while (cur != y) {
    std::optional<std::size_t> pick;
    std::size_t incident = 0;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (used[i] || (g.edges[i].from != cur && g.edges[i].to != cur)) continue;
      ++incident;
      pick = i;
    }
    if (incident == 0) break;
    if (incident > 1)
      return Untranslatable{"remaining property atoms do not form a simple path from ?" + x + " to ?" + y + ": " +
                            detail::describe_edges(g.edges)};
    const Edge& e = g.edges[*pick];
    used[*pick] = true;
    const bool forward = e.from == cur;
    const std::string& nxt = forward ? e.to : e.from;
    if (std::find(path.begin(), path.end(), nxt) != path.end())
      return Untranslatable{"body contains a cycle through ?" + nxt + ": " + detail::describe_edges(g.edges)};
    auto role = RoleExpression::named(e.property);
    steps.push_back(forward ? role : RoleExpression::inverse(role));
    path.push_back(nxt);
    cur = nxt;
  }
  const bool connected = cur == y;
  if (std::find(used.begin(), used.end(), false) != used.end())
    return Untranslatable{"remaining property atoms do not form a simple path from ?" + x + " to ?" + y + ": " +
                          detail::describe_edges(g.edges)};

  // Everything left off the path has degree 0 here.
  std::vector<std::string> leftovers;
  for (const auto& v : g.nodes)
    if (std::find(path.begin(), path.end(), v) == path.end() && v != y) leftovers.push_back(v);

  std::vector<std::string> seq;  // nodes in chain order
  std::vector<RoleExpression> links;
  if (connected) {
    for (const auto& v : leftovers)
      g.labels[x].push_back(ClassExpression::some(RoleExpression::universal(), unify_labels(g, v)));
    seq = path;
    links = steps;
  } else {
    seq.push_back(x);
    for (const auto& v : leftovers) seq.push_back(v);
    seq.push_back(y);
    links.assign(seq.size() - 1, RoleExpression::universal());
  }

  HeadTranslation out;
  std::vector<RoleExpression> chain;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i > 0) chain.push_back(links[i - 1]);
    auto label = unify_labels(g, seq[i]);
    if (label.kind == ClassExpression::Kind::Top) continue;
    auto fresh = namer.next(label);
    out.axioms.push_back(SubClassOf{label, ClassExpression::has_self(RoleExpression::named(fresh))});
    out.fresh_roles.push_back({fresh, label});
    chain.push_back(RoleExpression::named(fresh));
  }
  if (chain.size() > 1)
    out.warnings.push_back("property chain axiom for " + head_role +
                           " is not checked against OWL 2 global restrictions on role regularity");
  out.axioms.push_back(SubObjectPropertyOf{std::move(chain), head_role});
  return out;
}

// Runs roll-up to the fixpoint and finishes according to the head atom.
inline FinishResult translate_graph(RuleGraph g, const Atom& head, FreshRoleNamer& namer,
                                    RollOrder order = RollOrder::Lexicographic) {
  if (head.is_class() || head.arg(0) == head.arg(1)) {
    const std::string& x = head.arg(0);
    g = roll_up_fixpoint(std::move(g), {x}, order);
    return finish_class_head(std::move(g), x, head.predicate, !head.is_class());
  }
  const std::string& x = head.arg(0);
  const std::string& y = head.arg(1);
  g = roll_up_fixpoint(std::move(g), {x, y}, order);
  return finish_role_head(std::move(g), x, y, head.predicate, namer);
}

}  // namespace ruleowl
