#pragma once

// Shared value types: rule terms and atoms, OWL class/role expressions,
// axioms and ontology signatures.

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace ruleowl {

namespace names {

inline constexpr const char* kThing = "owl:Thing";
inline constexpr const char* kTopObjectProperty = "owl:topObjectProperty";
inline constexpr const char* kNominalSchemaVariables = "rowl:nominalSchemaVariables";

inline bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

inline bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

// `[A-Za-z_][A-Za-z0-9_]*`
inline bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(), is_ident_char);
}

// identifier with an optional `prefix:` qualifier
inline bool is_entity_name(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos) return is_identifier(s);
  return is_identifier(s.substr(0, colon)) && is_identifier(s.substr(colon + 1));
}

}  // namespace names

// ---------------------------------------------------------------------------
// Rules

struct Term {
  std::string name;  // variable name without the leading '?'

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Atom {
  enum class Kind { Class, Property };

  Kind kind = Kind::Class;
  std::string predicate;
  std::vector<Term> args;  // one argument for Class, two for Property

  static Atom klass(std::string name, std::string var) {
    return Atom{Kind::Class, std::move(name), {Term{std::move(var)}}};
  }
  static Atom property(std::string name, std::string from, std::string to) {
    return Atom{Kind::Property, std::move(name), {Term{std::move(from)}, Term{std::move(to)}}};
  }

  bool is_class() const { return kind == Kind::Class; }
  const std::string& arg(std::size_t i) const { return args.at(i).name; }

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Thrown by Rule::make when a rule violates safety or well-formedness.
class InvalidRule : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Rule {
 public:
  // Deduplicates the body and checks safety.
  static Rule make(std::vector<Atom> body, Atom head) {
    if (body.empty()) throw InvalidRule("rule body must contain at least one atom");
    auto check_atom = [](const Atom& a) {
      if (!names::is_entity_name(a.predicate))
        throw InvalidRule("invalid predicate name '" + a.predicate + "'");
      std::size_t want = a.is_class() ? 1 : 2;
      if (a.args.size() != want) throw InvalidRule("wrong arity for '" + a.predicate + "'");
      for (const auto& t : a.args)
        if (!names::is_identifier(t.name)) throw InvalidRule("invalid variable name '" + t.name + "'");
    };
    std::vector<Atom> unique;
    for (auto& a : body) {
      check_atom(a);
      if (std::find(unique.begin(), unique.end(), a) == unique.end()) unique.push_back(std::move(a));
    }
    check_atom(head);
    Rule r;
    r.body_ = std::move(unique);
    r.head_ = std::move(head);
    auto bv = r.body_variables();
    for (const auto& t : r.head_.args)
      if (!bv.count(t.name)) throw InvalidRule("unsafe rule: head variable ?" + t.name + " does not occur in the body");
    return r;
  }

  const std::vector<Atom>& body() const { return body_; }
  const Atom& head() const { return head_; }

  std::set<std::string> body_variables() const {
    std::set<std::string> out;
    for (const auto& a : body_)
      for (const auto& t : a.args) out.insert(t.name);
    return out;
  }
  std::set<std::string> head_variables() const {
    std::set<std::string> out;
    for (const auto& t : head_.args) out.insert(t.name);
    return out;
  }

  friend bool operator==(const Rule&, const Rule&) = default;

 private:
  Rule() = default;
  std::vector<Atom> body_;
  Atom head_;
};

// ---------------------------------------------------------------------------
// Expressions

struct RoleExpression {
  enum class Kind { Named, Inverse, Universal };

  Kind kind = Kind::Named;
  std::string name;  // empty for Universal

  static RoleExpression named(std::string n) { return {Kind::Named, std::move(n)}; }
  static RoleExpression universal() { return {Kind::Universal, {}}; }
  // inverse of an inverse collapses back to the named role; U is its own inverse
  static RoleExpression inverse(const RoleExpression& r) {
    switch (r.kind) {
      case Kind::Named: return {Kind::Inverse, r.name};
      case Kind::Inverse: return {Kind::Named, r.name};
      case Kind::Universal: return r;
    }
    return r;
  }

  bool is_named() const { return kind == Kind::Named; }

  friend bool operator==(const RoleExpression&, const RoleExpression&) = default;
};

struct ClassExpression {
  // Nominal is a nominal-schema placeholder {?v}; it only appears in
  // previews of grounded rules and is never persisted.
  enum class Kind { Named, Top, Intersection, SomeValuesFrom, HasSelf, Nominal };

  Kind kind = Kind::Top;
  std::string name;                       // Named class name, Nominal variable
  RoleExpression role;                    // SomeValuesFrom, HasSelf
  std::vector<ClassExpression> operands;  // Intersection operands; [filler] for SomeValuesFrom

  static ClassExpression named(std::string n) { return {Kind::Named, std::move(n), {}, {}}; }
  static ClassExpression top() { return {}; }
  static ClassExpression nominal(std::string var) { return {Kind::Nominal, std::move(var), {}, {}}; }
  static ClassExpression some(RoleExpression r, ClassExpression filler) {
    return {Kind::SomeValuesFrom, {}, std::move(r), {std::move(filler)}};
  }
  static ClassExpression has_self(RoleExpression r) { return {Kind::HasSelf, {}, std::move(r), {}}; }
  // Raw constructor; callers normally go through canonicalize or conjunction.
  static ClassExpression intersection(std::vector<ClassExpression> ops) {
    return {Kind::Intersection, {}, {}, std::move(ops)};
  }

  bool is_atomic() const { return kind == Kind::Named || kind == Kind::Top || kind == Kind::Nominal; }
  const ClassExpression& filler() const { return operands.at(0); }

  friend bool operator==(const ClassExpression&, const ClassExpression&) = default;
};

// ---------------------------------------------------------------------------
// Manchester-style text for expressions. Also the canonical sort key of
// intersection operands.

inline std::string manchester(const RoleExpression& r) {
  switch (r.kind) {
    case RoleExpression::Kind::Named: return r.name;
    case RoleExpression::Kind::Inverse: return "inverse " + r.name;
    case RoleExpression::Kind::Universal: return names::kTopObjectProperty;
  }
  return {};
}

inline std::string manchester(const ClassExpression& e);

namespace detail {
inline std::string manchester_operand(const ClassExpression& e) {
  return e.is_atomic() ? manchester(e) : "(" + manchester(e) + ")";
}
}  // namespace detail

inline std::string manchester(const ClassExpression& e) {
  using K = ClassExpression::Kind;
  switch (e.kind) {
    case K::Named: return e.name;
    case K::Top: return names::kThing;
    case K::Nominal: return "{?" + e.name + "}";
    case K::HasSelf: return manchester(e.role) + " Self";
    case K::SomeValuesFrom: return manchester(e.role) + " some " + detail::manchester_operand(e.filler());
    case K::Intersection: {
      std::string out;
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i) out += " and ";
        out += detail::manchester_operand(e.operands[i]);
      }
      return out;
    }
  }
  return {};
}

// Flattens nested intersections, drops Top operands and duplicates, sorts
// operands by their rendered text and collapses 0/1-operand intersections.
inline ClassExpression canonicalize(const ClassExpression& e) {
  using K = ClassExpression::Kind;
  switch (e.kind) {
    case K::SomeValuesFrom: return ClassExpression::some(e.role, canonicalize(e.filler()));
    case K::Intersection: {
      std::vector<std::pair<std::string, ClassExpression>> keyed;
      auto add = [&](ClassExpression c) {
        if (c.kind == K::Top) return;
        auto key = manchester(c);
        for (const auto& [k, v] : keyed)
          if (k == key && v == c) return;
        keyed.emplace_back(std::move(key), std::move(c));
      };
      for (const auto& op : e.operands) {
        auto c = canonicalize(op);
        if (c.kind == K::Intersection) {
          for (auto& inner : c.operands) add(std::move(inner));
        } else {
          add(std::move(c));
        }
      }
      std::stable_sort(keyed.begin(), keyed.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      if (keyed.empty()) return ClassExpression::top();
      if (keyed.size() == 1) return std::move(keyed.front().second);
      std::vector<ClassExpression> ops;
      ops.reserve(keyed.size());
      for (auto& kv : keyed) ops.push_back(std::move(kv.second));
      return ClassExpression::intersection(std::move(ops));
    }
    default: return e;
  }
}

// Canonical conjunction of a label list; Top when empty.
inline ClassExpression conjunction(std::vector<ClassExpression> parts) {
  return canonicalize(ClassExpression::intersection(std::move(parts)));
}

// ---------------------------------------------------------------------------
// Axioms

struct SubClassOf {
  ClassExpression sub;
  ClassExpression sup;
  friend bool operator==(const SubClassOf&, const SubClassOf&) = default;
};

// A chain of length one is a plain subproperty axiom.
struct SubObjectPropertyOf {
  std::vector<RoleExpression> chain;
  std::string sup;
  friend bool operator==(const SubObjectPropertyOf&, const SubObjectPropertyOf&) = default;
};

enum class EntityKind { Class, ObjectProperty };

struct Declaration {
  EntityKind kind = EntityKind::Class;
  std::string name;
  friend bool operator==(const Declaration&, const Declaration&) = default;
};

struct Annotation {
  std::string property;
  std::string value;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct AnnotatedSwrlRule {
  Rule rule;
  std::vector<Annotation> annotations;
  friend bool operator==(const AnnotatedSwrlRule&, const AnnotatedSwrlRule&) = default;
};

using Axiom = std::variant<SubClassOf, SubObjectPropertyOf, Declaration, AnnotatedSwrlRule>;

inline Axiom canonicalize(const Axiom& ax) {
  if (const auto* s = std::get_if<SubClassOf>(&ax)) return SubClassOf{canonicalize(s->sub), canonicalize(s->sup)};
  return ax;
}

// ---------------------------------------------------------------------------
// Signatures

struct Signature {
  std::set<std::string> classes;
  std::set<std::string> object_properties;

  bool contains(const std::string& n) const { return classes.count(n) || object_properties.count(n); }
  bool contains(EntityKind k, const std::string& n) const {
    return k == EntityKind::Class ? classes.count(n) > 0 : object_properties.count(n) > 0;
  }
  void add(EntityKind k, const std::string& n) {
    (k == EntityKind::Class ? classes : object_properties).insert(n);
  }
  void merge(const Signature& o) {
    classes.insert(o.classes.begin(), o.classes.end());
    object_properties.insert(o.object_properties.begin(), o.object_properties.end());
  }
  // Names used both as a class and as an object property (punning).
  std::vector<std::string> punned_names() const {
    std::vector<std::string> out;
    std::set_intersection(classes.begin(), classes.end(), object_properties.begin(), object_properties.end(),
                          std::back_inserter(out));
    return out;
  }
  bool has_punning() const { return !punned_names().empty(); }

  friend bool operator==(const Signature&, const Signature&) = default;
};

inline void collect_signature(const RoleExpression& r, Signature& sig) {
  if (r.kind != RoleExpression::Kind::Universal) sig.object_properties.insert(r.name);
}

inline void collect_signature(const ClassExpression& e, Signature& sig) {
  using K = ClassExpression::Kind;
  switch (e.kind) {
    case K::Named: sig.classes.insert(e.name); break;
    case K::SomeValuesFrom:
    case K::HasSelf: collect_signature(e.role, sig); break;
    default: break;
  }
  for (const auto& op : e.operands) collect_signature(op, sig);
}

inline void collect_signature(const Rule& rule, Signature& sig) {
  auto add = [&](const Atom& a) {
    sig.add(a.is_class() ? EntityKind::Class : EntityKind::ObjectProperty, a.predicate);
  };
  for (const auto& a : rule.body()) add(a);
  add(rule.head());
}

inline void collect_signature(const Axiom& ax, Signature& sig) {
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, SubClassOf>) {
          collect_signature(a.sub, sig);
          collect_signature(a.sup, sig);
        } else if constexpr (std::is_same_v<T, SubObjectPropertyOf>) {
          for (const auto& r : a.chain) collect_signature(r, sig);
          sig.object_properties.insert(a.sup);
        } else if constexpr (std::is_same_v<T, Declaration>) {
          sig.add(a.kind, a.name);
        } else {
          collect_signature(a.rule, sig);
        }
      },
      ax);
}

inline Signature signature_of(const Rule& rule) {
  Signature s;
  collect_signature(rule, s);
  return s;
}

inline Signature signature_of(const std::vector<Axiom>& axioms) {
  Signature s;
  for (const auto& ax : axioms) collect_signature(ax, s);
  return s;
}

}  // namespace ruleowl
