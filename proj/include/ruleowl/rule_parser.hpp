#pragma once

// Textual rule syntax:
//
//   rule  := atoms '->' atoms
//   atoms := atom ('^' atom)*
//   atom  := NAME '(' term (',' term)? ')'
//   term  := '?' IDENT
//
// NAME is an identifier with an optional `prefix:` qualifier. A conjunctive
// head yields one rule per head atom.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ruleowl/model.hpp"

namespace ruleowl {

struct Position {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based
  friend bool operator==(const Position&, const Position&) = default;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnsafeRule, UnsupportedTerm, DuplicateAtomWarningSuppressed };

  ParseError(Kind kind, Position pos, const std::string& message)
      : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
        kind_(kind),
        pos_(pos),
        message_(message) {}

  Kind kind() const { return kind_; }
  const Position& position() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  Kind kind_;
  Position pos_;
  std::string message_;
};

inline const char* to_string(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::Syntax: return "Syntax";
    case ParseError::Kind::UnsafeRule: return "UnsafeRule";
    case ParseError::Kind::UnsupportedTerm: return "UnsupportedTerm";
    case ParseError::Kind::DuplicateAtomWarningSuppressed: return "DuplicateAtomWarningSuppressed";
  }
  return "";
}

struct RuleParseResult {
  std::vector<Rule> rules;
  // Non-fatal notices of kind DuplicateAtomWarningSuppressed.
  std::vector<ParseError> warnings;
};

namespace detail {

class RuleLexer {
 public:
  enum class Tok { Name, Var, LParen, RParen, Comma, And, Arrow, End };

  struct Token {
    Tok type;
    std::string text;
    Position pos;
  };

  explicit RuleLexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws();
    Position start = pos_;
    if (i_ >= text_.size()) return {Tok::End, "", start};
    char c = text_[i_];
    switch (c) {
      case '(': advance(); return {Tok::LParen, "(", start};
      case ')': advance(); return {Tok::RParen, ")", start};
      case ',': advance(); return {Tok::Comma, ",", start};
      case '^': advance(); return {Tok::And, "^", start};
      case '-':
        if (i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
          advance();
          advance();
          return {Tok::Arrow, "->", start};
        }
        throw ParseError(ParseError::Kind::Syntax, start, "expected '->'");
      case '?': {
        advance();
        if (i_ >= text_.size() || !names::is_ident_start(text_[i_]))
          throw ParseError(ParseError::Kind::Syntax, start, "expected variable name after '?'");
        return {Tok::Var, ident(), start};
      }
      default: break;
    }
    if (names::is_ident_start(c)) {
      std::string n = ident();
      if (i_ < text_.size() && text_[i_] == ':') {
        advance();
        if (i_ >= text_.size() || !names::is_ident_start(text_[i_]))
          throw ParseError(ParseError::Kind::Syntax, pos_, "expected local name after prefix '" + n + ":'");
        n += ":" + ident();
      }
      return {Tok::Name, n, start};
    }
    throw ParseError(ParseError::Kind::Syntax, start, std::string("unexpected character '") + c + "'");
  }

  // Position of the last character of the input (or 1:1 when empty).
  Position last_position() const { return last_char_pos_; }

 private:
  void advance() {
    last_char_pos_ = pos_;
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }
  void skip_ws() {
    while (i_ < text_.size() && (text_[i_] == ' ' || text_[i_] == '\t' || text_[i_] == '\n' || text_[i_] == '\r'))
      advance();
  }
  std::string ident() {
    std::size_t b = i_;
    while (i_ < text_.size() && names::is_ident_char(text_[i_])) advance();
    return std::string(text_.substr(b, i_ - b));
  }

  std::string_view text_;
  std::size_t i_ = 0;
  Position pos_;
  Position last_char_pos_;
};

class RuleParser {
  using Tok = RuleLexer::Tok;

 public:
  explicit RuleParser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  RuleParseResult parse() {
    auto body = atoms();
    expect(Tok::Arrow, "'->'");
    auto head = atoms();
    if (tok_.type != Tok::End) fail(tok_.pos, "unexpected '" + tok_.text + "' after rule head");

    RuleParseResult out;
    std::vector<Atom> body_atoms;
    for (auto& [atom, pos] : body) {
      bool dup = false;
      for (const auto& b : body_atoms) dup = dup || b == atom;
      if (dup)
        out.warnings.emplace_back(ParseError::Kind::DuplicateAtomWarningSuppressed, pos,
                                  "duplicate body atom '" + atom.predicate + "' removed");
      body_atoms.push_back(atom);
    }
    std::map<std::string, bool> bound;
    for (const auto& a : body_atoms)
      for (const auto& t : a.args) bound[t.name] = true;
    for (auto& [atom, pos] : head) {
      for (const auto& t : atom.args)
        if (!bound.count(t.name))
          throw ParseError(ParseError::Kind::UnsafeRule, pos,
                           "unsafe rule: head variable ?" + t.name + " does not occur in the body");
      try {
        out.rules.push_back(Rule::make(body_atoms, atom));
      } catch (const InvalidRule& e) {
        throw ParseError(ParseError::Kind::Syntax, pos, e.what());
      }
    }
    return out;
  }

 private:
  struct Located {
    Atom atom;
    Position pos;
  };

  [[noreturn]] void fail(Position p, const std::string& msg) { throw ParseError(ParseError::Kind::Syntax, p, msg); }

  void expect(Tok t, const char* what) {
    if (tok_.type != t) {
      if (tok_.type == Tok::End) fail(lex_.last_position(), std::string("unexpected end of input, expected ") + what);
      fail(tok_.pos, std::string("expected ") + what + ", found '" + tok_.text + "'");
    }
    tok_ = lex_.next();
  }

  std::vector<Located> atoms() {
    std::vector<Located> out;
    out.push_back(atom());
    while (tok_.type == Tok::And) {
      tok_ = lex_.next();
      out.push_back(atom());
    }
    return out;
  }

  Located atom() {
    if (tok_.type != Tok::Name) {
      if (tok_.type == Tok::End) fail(lex_.last_position(), "unexpected end of input, expected an atom");
      fail(tok_.pos, "expected predicate name, found '" + tok_.text + "'");
    }
    Position pos = tok_.pos;
    std::string pred = tok_.text;
    if (pred.rfind("owl:", 0) == 0 || pred.rfind("rowl:", 0) == 0)
      fail(pos, "reserved vocabulary '" + pred + "' cannot be used as a rule predicate");
    tok_ = lex_.next();
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    args.push_back(term());
    while (tok_.type == Tok::Comma) {
      tok_ = lex_.next();
      args.push_back(term());
    }
    if (args.size() > 2) fail(pos, "atom '" + pred + "' has " + std::to_string(args.size()) + " arguments, at most 2 allowed");
    expect(Tok::RParen, "')'");

    auto [it, inserted] = arity_.emplace(pred, args.size());
    if (!inserted && it->second != args.size())
      fail(pos, "predicate '" + pred + "' used with arity " + std::to_string(args.size()) + " and " +
                    std::to_string(it->second));
    Atom a{args.size() == 1 ? Atom::Kind::Class : Atom::Kind::Property, pred, std::move(args)};
    return {std::move(a), pos};
  }

  Term term() {
    if (tok_.type == Tok::Var) {
      Term t{tok_.text};
      tok_ = lex_.next();
      return t;
    }
    if (tok_.type == Tok::Name)
      throw ParseError(ParseError::Kind::UnsupportedTerm, tok_.pos,
                       "individual '" + tok_.text + "' is not supported as an argument; use a ?variable");
    if (tok_.type == Tok::End) fail(lex_.last_position(), "unexpected end of input, expected a ?variable");
    fail(tok_.pos, "expected a ?variable, found '" + tok_.text + "'");
  }

  RuleLexer lex_;
  RuleLexer::Token tok_;
  std::map<std::string, std::size_t> arity_;
};

}  // namespace detail

// Parses one line of rule text. Throws ParseError.
inline RuleParseResult parse_rule_detailed(std::string_view text) { return detail::RuleParser(text).parse(); }

inline std::vector<Rule> parse_rule(std::string_view text) { return parse_rule_detailed(text).rules; }

inline std::string render_atom(const Atom& a) {
  std::string out = a.predicate + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    out += "?" + a.args[i].name;
  }
  return out + ")";
}

inline std::string render_rule(const Rule& rule) {
  std::string out;
  for (std::size_t i = 0; i < rule.body().size(); ++i) {
    if (i) out += " ^ ";
    out += render_atom(rule.body()[i]);
  }
  return out + " -> " + render_atom(rule.head());
}

}  // namespace ruleowl
