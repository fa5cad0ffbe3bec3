#pragma once

// Finite-model equivalence checking of rules against axiom sets.
//
// Extensions are bitmasks: element d of a class is bit d, pair (d, e) of a
// role is bit d * n + e. Domains therefore stay at n <= 8.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ruleowl/model.hpp"
#include "ruleowl/rule_graph.hpp"
#include "ruleowl/transformer.hpp"

namespace ruleowl {

inline constexpr std::size_t kMaxOracleDomain = 8;
inline constexpr std::size_t kExhaustiveBitBudget = 20;
inline constexpr std::size_t kSampledInterpretations = 100000;
inline constexpr std::uint64_t kDefaultOracleSeed = 0xDA5E;

using Mask = std::uint64_t;

struct Interpretation {
  std::size_t domain_size = 1;
  std::map<std::string, Mask> class_ext;
  std::map<std::string, Mask> role_ext;

  Mask full_domain() const { return domain_size >= 64 ? ~Mask{0} : (Mask{1} << domain_size) - 1; }
  Mask full_relation() const {
    const std::size_t bits = domain_size * domain_size;
    return bits >= 64 ? ~Mask{0} : (Mask{1} << bits) - 1;
  }
  Mask diagonal(Mask set) const {
    Mask out = 0;
    for (std::size_t d = 0; d < domain_size; ++d)
      if (set >> d & 1) out |= Mask{1} << (d * domain_size + d);
    return out;
  }
  bool related(Mask rel, std::size_t d, std::size_t e) const { return rel >> (d * domain_size + e) & 1; }

  Mask cls(const std::string& n) const {
    auto it = class_ext.find(n);
    return it == class_ext.end() ? 0 : it->second;
  }
  Mask role(const std::string& n) const {
    auto it = role_ext.find(n);
    return it == role_ext.end() ? 0 : it->second;
  }

  std::string dump() const {
    std::ostringstream os;
    os << "domain {0.." << domain_size - 1 << "}\n";
    for (const auto& [n, m] : class_ext) {
      os << "  " << n << " = {";
      bool first = true;
      for (std::size_t d = 0; d < domain_size; ++d)
        if (m >> d & 1) {
          os << (first ? "" : ", ") << d;
          first = false;
        }
      os << "}\n";
    }
    for (const auto& [n, m] : role_ext) {
      os << "  " << n << " = {";
      bool first = true;
      for (std::size_t d = 0; d < domain_size; ++d)
        for (std::size_t e = 0; e < domain_size; ++e)
          if (related(m, d, e)) {
            os << (first ? "" : ", ") << "(" << d << "," << e << ")";
            first = false;
          }
      os << "}\n";
    }
    return os.str();
  }
};

inline Mask eval(const Interpretation& I, const RoleExpression& r) {
  switch (r.kind) {
    case RoleExpression::Kind::Named: return I.role(r.name);
    case RoleExpression::Kind::Universal: return I.full_relation();
    case RoleExpression::Kind::Inverse: {
      const Mask m = I.role(r.name);
      const std::size_t n = I.domain_size;
      Mask out = 0;
      for (std::size_t d = 0; d < n; ++d)
        for (std::size_t e = 0; e < n; ++e)
          if (I.related(m, d, e)) out |= Mask{1} << (e * n + d);
      return out;
    }
  }
  return 0;
}

inline Mask eval(const Interpretation& I, const ClassExpression& c) {
  using K = ClassExpression::Kind;
  switch (c.kind) {
    case K::Named: return I.cls(c.name);
    case K::Top: return I.full_domain();
    case K::Intersection: {
      Mask m = I.full_domain();
      for (const auto& op : c.operands) m &= eval(I, op);
      return m;
    }
    case K::SomeValuesFrom: {
      const Mask rel = eval(I, c.role);
      const Mask fill = eval(I, c.filler());
      Mask out = 0;
      for (std::size_t d = 0; d < I.domain_size; ++d)
        for (std::size_t e = 0; e < I.domain_size; ++e)
          if ((fill >> e & 1) && I.related(rel, d, e)) {
            out |= Mask{1} << d;
            break;
          }
      return out;
    }
    case K::HasSelf: {
      const Mask rel = eval(I, c.role);
      Mask out = 0;
      for (std::size_t d = 0; d < I.domain_size; ++d)
        if (I.related(rel, d, d)) out |= Mask{1} << d;
      return out;
    }
    case K::Nominal: throw std::invalid_argument("nominal schema {?" + c.name + "} has no finite-model semantics here");
  }
  return 0;
}

inline Mask compose(const Interpretation& I, Mask a, Mask b) {
  const std::size_t n = I.domain_size;
  Mask out = 0;
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t m = 0; m < n; ++m) {
      if (!I.related(a, d, m)) continue;
      for (std::size_t e = 0; e < n; ++e)
        if (I.related(b, m, e)) out |= Mask{1} << (d * n + e);
    }
  return out;
}

// First-order reading: every assignment satisfying the body satisfies the head.
inline bool rule_holds(const Interpretation& I, const Rule& rule) {
  const auto var_set = rule.body_variables();
  const std::vector<std::string> vars(var_set.begin(), var_set.end());
  auto index_of = [&](const std::string& v) {
    return static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };
  struct Compiled {
    bool is_class;
    Mask ext;
    std::size_t a, b;
  };
  auto compile = [&](const Atom& at) {
    if (at.is_class()) return Compiled{true, I.cls(at.predicate), index_of(at.arg(0)), 0};
    return Compiled{false, I.role(at.predicate), index_of(at.arg(0)), index_of(at.arg(1))};
  };
  std::vector<Compiled> body;
  for (const auto& at : rule.body()) body.push_back(compile(at));
  const Compiled head = compile(rule.head());

  const std::size_t n = I.domain_size;
  std::vector<std::size_t> val(vars.size(), 0);
  auto sat = [&](const Compiled& c) {
    return c.is_class ? (c.ext >> val[c.a] & 1) != 0 : I.related(c.ext, val[c.a], val[c.b]);
  };
  for (;;) {
    bool body_ok = true;
    for (const auto& c : body)
      if (!sat(c)) {
        body_ok = false;
        break;
      }
    if (body_ok && !sat(head)) return false;
    std::size_t i = 0;
    while (i < val.size() && ++val[i] == n) val[i++] = 0;
    if (i == val.size()) return true;
  }
}

inline bool axiom_holds(const Interpretation& I, const Axiom& axiom) {
  if (const auto* s = std::get_if<SubClassOf>(&axiom)) return (eval(I, s->sub) & ~eval(I, s->sup)) == 0;
  if (const auto* p = std::get_if<SubObjectPropertyOf>(&axiom)) {
    Mask rel = eval(I, p->chain.front());
    for (std::size_t i = 1; i < p->chain.size(); ++i) rel = compose(I, rel, eval(I, p->chain[i]));
    return (rel & ~I.role(p->sup)) == 0;
  }
  if (const auto* r = std::get_if<AnnotatedSwrlRule>(&axiom)) return rule_holds(I, r->rule);
  return true;  // Declaration
}

inline bool axioms_hold(const Interpretation& I, const std::vector<Axiom>& axioms) {
  for (const auto& ax : axioms)
    if (!axiom_holds(I, ax)) return false;
  return true;
}

// Interprets each fresh role R_E as the diagonal over E.
inline Interpretation canonical_extension(Interpretation I, const std::vector<FreshRole>& fresh) {
  for (const auto& f : fresh) {
    if (I.role_ext.count(f.name) || I.class_ext.count(f.name))
      throw std::invalid_argument("fresh role " + f.name + " is already interpreted");
    I.role_ext[f.name] = I.diagonal(eval(I, f.source));
  }
  return I;
}

struct Verdict {
  bool pass = true;
  std::optional<Interpretation> counterexample;
  std::size_t interpretations_checked = 0;
  bool exhaustive = true;  // false when some domain size was sampled
};

struct OracleConfig {
  std::size_t max_domain = 2;
  std::uint64_t seed = kDefaultOracleSeed;
  std::size_t bit_budget = kExhaustiveBitBudget;
  std::size_t samples = kSampledInterpretations;
};

// Compares the rule with the axioms on interpretations of the rule's
// signature (fresh roles interpreted canonically) for domain sizes
// 1..max_domain. Small signatures are enumerated exhaustively, larger ones
// sampled.
inline Verdict check_equivalence(const Rule& rule, const std::vector<Axiom>& axioms,
                                 const std::vector<FreshRole>& fresh, const OracleConfig& cfg = {}) {
  if (cfg.max_domain < 1 || cfg.max_domain > kMaxOracleDomain)
    throw std::invalid_argument("oracle domain size must be in 1.." + std::to_string(kMaxOracleDomain));
  const Signature sig = signature_of(rule);
  const std::vector<std::string> classes(sig.classes.begin(), sig.classes.end());
  const std::vector<std::string> roles(sig.object_properties.begin(), sig.object_properties.end());

  Verdict v;
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t n = 1; n <= cfg.max_domain; ++n) {
    Interpretation I;
    I.domain_size = n;
    const std::size_t bits = classes.size() * n + roles.size() * n * n;
    const bool exhaustive = bits <= cfg.bit_budget;
    v.exhaustive = v.exhaustive && exhaustive;
    const Mask cmask = I.full_domain();
    const Mask rmask = I.full_relation();

    auto check = [&]() {
      ++v.interpretations_checked;
      const bool lhs = rule_holds(I, rule);
      const bool rhs = fresh.empty() ? axioms_hold(I, axioms) : axioms_hold(canonical_extension(I, fresh), axioms);
      if (lhs != rhs) {
        v.pass = false;
        v.counterexample = I;
        return false;
      }
      return true;
    };

    if (exhaustive) {
      const std::uint64_t total = std::uint64_t{1} << bits;
      for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (const auto& cn : classes) {
          I.class_ext[cn] = c & cmask;
          c >>= n;
        }
        for (const auto& rn : roles) {
          I.role_ext[rn] = c & rmask;
          c >>= n * n;
        }
        if (!check()) return v;
      }
    } else {
      for (std::size_t s = 0; s < cfg.samples; ++s) {
        for (const auto& cn : classes) I.class_ext[cn] = rng() & cmask;
        for (const auto& rn : roles) I.role_ext[rn] = rng() & rmask;
        if (!check()) return v;
      }
    }
  }
  return v;
}

inline Verdict check_equivalence(const Rule& rule, const Success& result, std::size_t max_domain,
                                 std::uint64_t seed = kDefaultOracleSeed) {
  OracleConfig cfg;
  cfg.max_domain = max_domain;
  cfg.seed = seed;
  return check_equivalence(rule, result.axioms, result.fresh_roles, cfg);
}

}  // namespace ruleowl
