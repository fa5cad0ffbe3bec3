#pragma once

// Ontology documents in a subset of the OWL 2 functional-style syntax, plus
// Manchester-style display rendering, declaration management and commits.
//
// Supported subset:
//   Prefix(p:=<iri>)  Ontology(<iri>? axiom*)
//   Declaration(Class(n))  Declaration(ObjectProperty(n))
//   SubClassOf(C D)  SubObjectPropertyOf(P n)
//   SubObjectPropertyOf(ObjectPropertyChain(P+) n)
//   ObjectIntersectionOf  ObjectSomeValuesFrom  ObjectHasSelf  ObjectInverseOf
//   owl:Thing  owl:topObjectProperty
//   DLSafeRule(Annotation(p "v")* Body(atom*) Head(atom))
//     with ClassAtom / ObjectPropertyAtom over Variable(var:v)

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstddef>
#include <cstring>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "ruleowl/model.hpp"
#include "ruleowl/rule_parser.hpp"

namespace ruleowl {

namespace iris {
inline constexpr const char* kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr const char* kRowl = "urn:rowl#";
inline constexpr const char* kVar = "urn:swrl:var#";
inline constexpr const char* kDefaultBase = "http://example.org/ontology#";
}  // namespace iris

struct OntologyDocument {
  // Non-reserved prefixes in declaration order; "" is the default prefix.
  std::vector<std::pair<std::string, std::string>> prefixes;
  std::optional<std::string> ontology_iri;
  std::vector<Axiom> axioms;

  static OntologyDocument empty(const std::string& base_iri = iris::kDefaultBase) {
    OntologyDocument d;
    d.prefixes.emplace_back("", base_iri);
    return d;
  }

  // Declared names plus names used in axioms.
  Signature signature() const { return signature_of(axioms); }

  friend bool operator==(const OntologyDocument&, const OntologyDocument&) = default;
};

// ---------------------------------------------------------------------------
// Functional-style rendering

namespace detail {

inline std::string fss_entity(const std::string& name) {
  return name.find(':') == std::string::npos ? ":" + name : name;
}

inline std::string fss_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline std::string functional(const RoleExpression& r) {
  switch (r.kind) {
    case RoleExpression::Kind::Named: return detail::fss_entity(r.name);
    case RoleExpression::Kind::Inverse: return "ObjectInverseOf(" + detail::fss_entity(r.name) + ")";
    case RoleExpression::Kind::Universal: return names::kTopObjectProperty;
  }
  return {};
}

inline std::string functional(const ClassExpression& c) {
  using K = ClassExpression::Kind;
  switch (c.kind) {
    case K::Named: return detail::fss_entity(c.name);
    case K::Top: return names::kThing;
    case K::Intersection: {
      std::string out = "ObjectIntersectionOf(";
      for (std::size_t i = 0; i < c.operands.size(); ++i) out += (i ? " " : "") + functional(c.operands[i]);
      return out + ")";
    }
    case K::SomeValuesFrom: return "ObjectSomeValuesFrom(" + functional(c.role) + " " + functional(c.filler()) + ")";
    case K::HasSelf: return "ObjectHasSelf(" + functional(c.role) + ")";
    case K::Nominal: throw std::logic_error("nominal schema placeholders cannot be serialized");
  }
  return {};
}

inline std::string functional(const Atom& a) {
  if (a.is_class()) return "ClassAtom(" + detail::fss_entity(a.predicate) + " Variable(var:" + a.arg(0) + "))";
  return "ObjectPropertyAtom(" + detail::fss_entity(a.predicate) + " Variable(var:" + a.arg(0) + ") Variable(var:" +
         a.arg(1) + "))";
}

inline std::string functional(const Axiom& ax) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, SubClassOf>) {
          return "SubClassOf(" + functional(a.sub) + " " + functional(a.sup) + ")";
        } else if constexpr (std::is_same_v<T, SubObjectPropertyOf>) {
          std::string sub;
          if (a.chain.size() == 1) {
            sub = functional(a.chain.front());
          } else {
            sub = "ObjectPropertyChain(";
            for (std::size_t i = 0; i < a.chain.size(); ++i) sub += (i ? " " : "") + functional(a.chain[i]);
            sub += ")";
          }
          return "SubObjectPropertyOf(" + sub + " " + detail::fss_entity(a.sup) + ")";
        } else if constexpr (std::is_same_v<T, Declaration>) {
          return std::string("Declaration(") + (a.kind == EntityKind::Class ? "Class(" : "ObjectProperty(") +
                 detail::fss_entity(a.name) + "))";
        } else {
          std::string out = "DLSafeRule(";
          for (const auto& an : a.annotations)
            out += "Annotation(" + detail::fss_entity(an.property) + " " + detail::fss_quote(an.value) + ") ";
          out += "Body(";
          for (std::size_t i = 0; i < a.rule.body().size(); ++i) out += (i ? " " : "") + functional(a.rule.body()[i]);
          out += ") Head(" + functional(a.rule.head()) + "))";
          return out;
        }
      },
      ax);
}

inline std::string serialize_ontology(const OntologyDocument& doc) {
  std::string out;
  for (const auto& [p, iri] : doc.prefixes) out += "Prefix(" + p + ":=<" + iri + ">)\n";
  out += std::string("Prefix(owl:=<") + iris::kOwl + ">)\n";
  out += std::string("Prefix(rowl:=<") + iris::kRowl + ">)\n";
  out += std::string("Prefix(var:=<") + iris::kVar + ">)\n\n";
  out += "Ontology(";
  if (doc.ontology_iri) out += "<" + *doc.ontology_iri + ">";
  if (doc.axioms.empty()) return out + ")\n";
  out += "\n";
  for (const auto& ax : doc.axioms) out += functional(ax) + "\n";
  return out + ")\n";
}

// ---------------------------------------------------------------------------
// Manchester-style rendering

inline std::string render_manchester(const Axiom& ax) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, SubClassOf>) {
          return manchester(a.sub) + " SubClassOf " + manchester(a.sup);
        } else if constexpr (std::is_same_v<T, SubObjectPropertyOf>) {
          std::string out;
          for (std::size_t i = 0; i < a.chain.size(); ++i) out += (i ? " o " : "") + manchester(a.chain[i]);
          return out + " SubPropertyOf " + a.sup;
        } else if constexpr (std::is_same_v<T, Declaration>) {
          return (a.kind == EntityKind::Class ? "Class: " : "ObjectProperty: ") + a.name;
        } else {
          std::string out = "Rule: " + render_rule(a.rule);
          for (const auto& an : a.annotations) out += " [" + an.property + " " + detail::fss_quote(an.value) + "]";
          return out;
        }
      },
      ax);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class FssLexer {
 public:
  enum class Tok { Name, Iri, String, LParen, RParen, Equals, End };
  struct Token {
    Tok type;
    std::string text;
    Position pos;
  };

  explicit FssLexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws();
    Position start = pos_;
    if (i_ >= text_.size()) return {Tok::End, "", start};
    char c = text_[i_];
    if (c == '(') return advance(), Token{Tok::LParen, "(", start};
    if (c == ')') return advance(), Token{Tok::RParen, ")", start};
    if (c == '=') return advance(), Token{Tok::Equals, "=", start};
    if (c == '<') {
      advance();
      std::string iri;
      while (i_ < text_.size() && text_[i_] != '>') {
        if (text_[i_] == '\n' || text_[i_] == ' ') throw error(pos_, "malformed IRI");
        iri += text_[i_];
        advance();
      }
      if (i_ >= text_.size()) throw error(start, "unterminated IRI");
      advance();
      return {Tok::Iri, iri, start};
    }
    if (c == '"') {
      advance();
      std::string s;
      while (i_ < text_.size() && text_[i_] != '"') {
        if (text_[i_] == '\\') {
          advance();
          if (i_ >= text_.size()) break;
        }
        s += text_[i_];
        advance();
      }
      if (i_ >= text_.size()) throw error(start, "unterminated string literal");
      advance();
      return {Tok::String, s, start};
    }
    if (names::is_ident_char(c) || c == ':') {
      std::string n;
      while (i_ < text_.size() && (names::is_ident_char(text_[i_]) || text_[i_] == ':')) {
        n += text_[i_];
        advance();
      }
      return {Tok::Name, n, start};
    }
    throw error(start, std::string("unexpected character '") + c + "'");
  }

  static ParseError error(Position p, const std::string& msg) { return ParseError(ParseError::Kind::Syntax, p, msg); }

 private:
  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }
  void skip_ws() {
    for (;;) {
      while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) advance();
      if (i_ < text_.size() && text_[i_] == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
        continue;
      }
      return;
    }
  }

  std::string_view text_;
  std::size_t i_ = 0;
  Position pos_;
};

class FssParser {
  using Tok = FssLexer::Tok;

 public:
  explicit FssParser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  OntologyDocument parse() {
    OntologyDocument doc;
    while (is_keyword("Prefix")) {
      next();
      expect(Tok::LParen);
      auto pfx = take(Tok::Name, "prefix name");
      if (pfx.text.empty() || pfx.text.back() != ':' || pfx.text.find(':') != pfx.text.size() - 1)
        throw FssLexer::error(pfx.pos, "malformed prefix name '" + pfx.text + "'");
      std::string p = pfx.text.substr(0, pfx.text.size() - 1);
      if (!p.empty() && !names::is_identifier(p)) throw FssLexer::error(pfx.pos, "malformed prefix name '" + pfx.text + "'");
      expect(Tok::Equals);
      auto iri = take(Tok::Iri, "IRI");
      expect(Tok::RParen);
      if (auto fixed = reserved_iri(p)) {
        if (iri.text != fixed)
          throw FssLexer::error(iri.pos, "reserved prefix '" + p + ":' must map to <" + fixed + ">");
        continue;
      }
      for (const auto& [q, _] : doc.prefixes)
        if (q == p) throw FssLexer::error(pfx.pos, "duplicate prefix '" + p + ":'");
      doc.prefixes.emplace_back(p, iri.text);
    }
    prefixes_ = &doc.prefixes;
    if (!is_keyword("Ontology")) throw FssLexer::error(tok_.pos, "expected 'Ontology'");
    next();
    expect(Tok::LParen);
    if (tok_.type == Tok::Iri) {
      doc.ontology_iri = tok_.text;
      next();
    }
    while (tok_.type != Tok::RParen) doc.axioms.push_back(axiom());
    next();
    if (tok_.type != Tok::End) throw FssLexer::error(tok_.pos, "unexpected content after Ontology(...)");
    return doc;
  }

 private:
  static const char* reserved_iri(const std::string& p) {
    if (p == "owl") return iris::kOwl;
    if (p == "rowl") return iris::kRowl;
    if (p == "var") return iris::kVar;
    return nullptr;
  }

  bool is_keyword(const char* k) const { return tok_.type == Tok::Name && tok_.text == k; }
  void next() { tok_ = lex_.next(); }

  FssLexer::Token take(Tok t, const char* what) {
    if (tok_.type != t)
      throw FssLexer::error(tok_.pos, std::string("expected ") + what +
                                          (tok_.type == Tok::End ? ", found end of input" : ", found '" + tok_.text + "'"));
    auto out = tok_;
    next();
    return out;
  }
  void expect(Tok t) {
    static const char* what[] = {"name", "IRI", "string", "'('", "')'", "'='", "end of input"};
    take(t, what[static_cast<int>(t)]);
  }
  FssLexer::Token keyword() { return take(Tok::Name, "keyword"); }

  // Entity reference: `:n`, `p:n` for a declared prefix, or reserved owl:/rowl:/var: names.
  struct Entity {
    std::string prefix;
    std::string local;
    Position pos;
    std::string name() const { return prefix.empty() ? local : prefix + ":" + local; }
  };

  Entity entity() {
    auto t = take(Tok::Name, "entity name");
    auto colon = t.text.find(':');
    if (colon == std::string::npos) throw FssLexer::error(t.pos, "expected prefixed name, found '" + t.text + "'");
    Entity e{t.text.substr(0, colon), t.text.substr(colon + 1), t.pos};
    if (!names::is_identifier(e.local)) throw FssLexer::error(t.pos, "malformed name '" + t.text + "'");
    if (!reserved_iri(e.prefix)) {
      bool known = false;
      for (const auto& [p, _] : *prefixes_) known = known || p == e.prefix;
      if (!known) throw FssLexer::error(t.pos, "undeclared prefix '" + e.prefix + ":'");
    }
    return e;
  }

  std::string user_entity(const char* what) {
    auto e = entity();
    if (reserved_iri(e.prefix))
      throw FssLexer::error(e.pos, std::string("reserved name '") + e.name() + "' cannot be used as " + what);
    return e.name();
  }

  RoleExpression role() {
    if (is_keyword("ObjectInverseOf")) {
      next();
      expect(Tok::LParen);
      auto r = RoleExpression::inverse(RoleExpression::named(user_entity("an object property")));
      expect(Tok::RParen);
      return r;
    }
    auto e = entity();
    if (e.name() == names::kTopObjectProperty) return RoleExpression::universal();
    if (reserved_iri(e.prefix)) throw FssLexer::error(e.pos, "unsupported object property '" + e.name() + "'");
    return RoleExpression::named(e.name());
  }

  ClassExpression class_expr() {
    if (tok_.type == Tok::Name && tok_.text.find(':') == std::string::npos) {
      auto k = keyword();
      expect(Tok::LParen);
      ClassExpression out;
      if (k.text == "ObjectIntersectionOf") {
        std::vector<ClassExpression> ops;
        while (tok_.type != Tok::RParen) ops.push_back(class_expr());
        if (ops.size() < 2) throw FssLexer::error(k.pos, "ObjectIntersectionOf needs at least two operands");
        out = ClassExpression::intersection(std::move(ops));
      } else if (k.text == "ObjectSomeValuesFrom") {
        auto r = role();
        out = ClassExpression::some(std::move(r), class_expr());
      } else if (k.text == "ObjectHasSelf") {
        auto pos = tok_.pos;
        auto r = role();
        if (r.kind == RoleExpression::Kind::Universal)
          throw FssLexer::error(pos, "ObjectHasSelf over owl:topObjectProperty is not supported");
        out = ClassExpression::has_self(std::move(r));
      } else {
        throw FssLexer::error(k.pos, "unsupported class expression '" + k.text + "'");
      }
      expect(Tok::RParen);
      return out;
    }
    auto e = entity();
    if (e.name() == names::kThing) return ClassExpression::top();
    if (reserved_iri(e.prefix)) throw FssLexer::error(e.pos, "unsupported class '" + e.name() + "'");
    return ClassExpression::named(e.name());
  }

  std::string variable() {
    auto k = keyword();
    if (k.text != "Variable") throw FssLexer::error(k.pos, "expected Variable(...)");
    expect(Tok::LParen);
    auto e = entity();
    expect(Tok::RParen);
    return e.local;
  }

  Atom atom() {
    auto k = keyword();
    expect(Tok::LParen);
    Atom a;
    if (k.text == "ClassAtom") {
      auto n = user_entity("a rule predicate");
      a = Atom::klass(n, variable());
    } else if (k.text == "ObjectPropertyAtom") {
      auto n = user_entity("a rule predicate");
      auto x = variable();
      a = Atom::property(n, x, variable());
    } else {
      throw FssLexer::error(k.pos, "unsupported rule atom '" + k.text + "'");
    }
    expect(Tok::RParen);
    return a;
  }

  std::vector<Atom> atom_list(const char* kw) {
    auto k = keyword();
    if (k.text != kw) throw FssLexer::error(k.pos, std::string("expected ") + kw + "(...)");
    expect(Tok::LParen);
    std::vector<Atom> out;
    while (tok_.type != Tok::RParen) out.push_back(atom());
    next();
    return out;
  }

  Axiom axiom() {
    auto k = keyword();
    expect(Tok::LParen);
    Axiom out;
    if (k.text == "Declaration") {
      auto kind = keyword();
      expect(Tok::LParen);
      if (kind.text != "Class" && kind.text != "ObjectProperty")
        throw FssLexer::error(kind.pos, "unsupported declaration kind '" + kind.text + "'");
      auto n = user_entity("a declared entity");
      expect(Tok::RParen);
      out = Declaration{kind.text == "Class" ? EntityKind::Class : EntityKind::ObjectProperty, n};
    } else if (k.text == "SubClassOf") {
      auto sub = class_expr();
      out = SubClassOf{std::move(sub), class_expr()};
    } else if (k.text == "SubObjectPropertyOf") {
      std::vector<RoleExpression> chain;
      if (is_keyword("ObjectPropertyChain")) {
        next();
        expect(Tok::LParen);
        while (tok_.type != Tok::RParen) chain.push_back(role());
        next();
        if (chain.size() < 2) throw FssLexer::error(k.pos, "ObjectPropertyChain needs at least two properties");
      } else {
        chain.push_back(role());
      }
      out = SubObjectPropertyOf{std::move(chain), user_entity("a super property")};
    } else if (k.text == "DLSafeRule") {
      std::vector<Annotation> anns;
      while (is_keyword("Annotation")) {
        next();
        expect(Tok::LParen);
        auto p = entity();
        auto v = take(Tok::String, "string literal");
        expect(Tok::RParen);
        anns.push_back({p.name(), v.text});
      }
      auto body = atom_list("Body");
      auto head_pos = tok_.pos;
      auto head = atom_list("Head");
      if (head.size() != 1) throw FssLexer::error(head_pos, "DLSafeRule head must contain exactly one atom");
      try {
        out = AnnotatedSwrlRule{Rule::make(std::move(body), std::move(head.front())), std::move(anns)};
      } catch (const InvalidRule& e) {
        throw ParseError(ParseError::Kind::UnsafeRule, k.pos, e.what());
      }
    } else {
      throw FssLexer::error(k.pos, "unsupported axiom '" + k.text + "'");
    }
    expect(Tok::RParen);
    return out;
  }

  FssLexer lex_;
  FssLexer::Token tok_;
  const std::vector<std::pair<std::string, std::string>>* prefixes_ = nullptr;
};

}  // namespace detail

// Throws ParseError for anything outside the supported subset.
inline OntologyDocument parse_ontology(std::string_view text) { return detail::FssParser(text).parse(); }

// ---------------------------------------------------------------------------
// Declarations and commits

// Declarations for names used in `axioms` but absent from `sig`: classes
// first, then object properties, each sorted.
inline std::vector<Declaration> missing_declarations(const std::vector<Axiom>& axioms, const Signature& sig) {
  const Signature used = signature_of(axioms);
  std::vector<Declaration> out;
  for (const auto& c : used.classes)
    if (!sig.classes.count(c)) out.push_back({EntityKind::Class, c});
  for (const auto& p : used.object_properties)
    if (!sig.object_properties.count(p)) out.push_back({EntityKind::ObjectProperty, p});
  return out;
}

struct CommitOutcome {
  OntologyDocument document;
  std::vector<Axiom> added;
  std::vector<std::string> notices;
};

inline CommitOutcome commit(const OntologyDocument& doc, const std::vector<Axiom>& axioms, bool declare_missing) {
  CommitOutcome out{doc, {}, {}};
  std::vector<Axiom> canon;
  canon.reserve(doc.axioms.size());
  for (const auto& ax : doc.axioms) canon.push_back(canonicalize(ax));

  auto append = [&](const Axiom& ax) {
    Axiom c = canonicalize(ax);
    if (std::find(canon.begin(), canon.end(), c) != canon.end()) {
      out.notices.push_back("skipped duplicate axiom " + functional(ax));
      return;
    }
    canon.push_back(c);
    out.document.axioms.push_back(ax);
    out.added.push_back(ax);
  };
  if (declare_missing)
    for (const auto& d : missing_declarations(axioms, doc.signature())) append(d);
  for (const auto& ax : axioms) append(ax);
  return out;
}

// ---------------------------------------------------------------------------
// Files

// Writes to a temporary file next to `path`, syncs it and renames it over
// `path`. `mid_write` (tests only) runs after half the content is written.
inline void write_file_atomic(const std::string& path, std::string_view content,
                              const std::function<void()>& mid_write = {}) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw std::system_error(errno, std::generic_category(), "cannot create " + tmp);
  auto write_all = [&](std::string_view chunk) {
    while (!chunk.empty()) {
      ssize_t n = ::write(fd, chunk.data(), chunk.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        int err = errno;
        ::close(fd);
        ::unlink(tmp.c_str());
        throw std::system_error(err, std::generic_category(), "cannot write " + tmp);
      }
      chunk.remove_prefix(static_cast<std::size_t>(n));
    }
  };
  const std::size_t half = content.size() / 2;
  write_all(content.substr(0, half));
  if (mid_write) mid_write();
  write_all(content.substr(half));
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    int err = errno;
    ::unlink(tmp.c_str());
    throw std::system_error(err, std::generic_category(), "cannot flush " + tmp);
  }
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    int err = errno;
    ::unlink(tmp.c_str());
    throw std::system_error(err, std::generic_category(), "cannot replace " + path);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline OntologyDocument load_ontology(const std::string& path) { return parse_ontology(read_file(path)); }

inline void save_ontology(const std::string& path, const OntologyDocument& doc) {
  write_file_atomic(path, serialize_ontology(doc));
}

}  // namespace ruleowl
