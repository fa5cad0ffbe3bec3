#pragma once

// Request-level operations shared by the CLI and the HTTP service: convert
// rule text against a document, plan commits, and the JSON payloads.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ruleowl/model.hpp"
#include "ruleowl/ns_options.hpp"
#include "ruleowl/ontology_io.hpp"
#include "ruleowl/rule_parser.hpp"
#include "ruleowl/transformer.hpp"

namespace ruleowl {

enum class ConvertStatus { Ok, Untranslatable, Error };

inline const char* to_string(ConvertStatus s) {
  switch (s) {
    case ConvertStatus::Ok: return "ok";
    case ConvertStatus::Untranslatable: return "untranslatable";
    case ConvertStatus::Error: return "error";
  }
  return "";
}

struct ConvertReport {
  ConvertStatus status = ConvertStatus::Error;
  std::vector<Rule> rules;                  // one per head atom
  std::vector<ConversionResult> results;    // parallel to rules
  std::vector<Axiom> axioms;                // all rules translated
  std::vector<FreshRole> fresh_roles;
  std::vector<Declaration> fresh_declarations;
  std::vector<GroundingOption> options;     // of the first untranslatable rule
  std::vector<std::string> option_previews;
  std::vector<std::string> warnings;
  std::optional<std::string> message;
  std::optional<Position> position;
  std::optional<ParseError::Kind> error_kind;
};

inline ConvertReport convert_text(std::string_view rule_text, const OntologyDocument& doc) {
  ConvertReport rep;
  try {
    auto parsed = parse_rule_detailed(rule_text);
    rep.rules = std::move(parsed.rules);
    for (const auto& w : parsed.warnings) rep.warnings.push_back(w.what());
  } catch (const ParseError& e) {
    rep.status = ConvertStatus::Error;
    rep.message = e.message();
    rep.position = e.position();
    rep.error_kind = e.kind();
    return rep;
  }

  const Signature sig = doc.signature();
  Signature taken = sig;
  const UntranslatableRule* first_bad = nullptr;
  const Rule* first_bad_rule = nullptr;
  for (const auto& rule : rep.rules) {
    rep.results.push_back(convert(rule, taken));
    if (const auto* s = std::get_if<Success>(&rep.results.back())) {
      // later head atoms must not reuse fresh names minted for earlier ones
      for (const auto& f : s->fresh_roles) taken.object_properties.insert(f.name);
    }
  }
  for (std::size_t i = 0; i < rep.rules.size(); ++i) {
    if (const auto* s = std::get_if<Success>(&rep.results[i])) {
      rep.axioms.insert(rep.axioms.end(), s->axioms.begin(), s->axioms.end());
      rep.fresh_roles.insert(rep.fresh_roles.end(), s->fresh_roles.begin(), s->fresh_roles.end());
      rep.warnings.insert(rep.warnings.end(), s->warnings.begin(), s->warnings.end());
    } else if (!first_bad) {
      first_bad = &std::get<UntranslatableRule>(rep.results[i]);
      first_bad_rule = &rep.rules[i];
    }
  }

  if (!first_bad) {
    rep.status = ConvertStatus::Ok;
    rep.fresh_declarations = missing_declarations(rep.axioms, sig);
    return rep;
  }
  rep.status = ConvertStatus::Untranslatable;
  rep.axioms.clear();
  rep.fresh_roles.clear();
  rep.options = first_bad->options;
  for (const auto& opt : rep.options) rep.option_previews.push_back(render_ns_preview(*first_bad_rule, opt));
  std::vector<Axiom> as_rules;
  for (const auto& r : rep.rules) as_rules.push_back(AnnotatedSwrlRule{r, {}});
  rep.fresh_declarations = missing_declarations(as_rules, sig);
  std::string msg = "rule cannot be translated into OWL axioms: " + first_bad->reason;
  if (rep.options.empty()) msg += "; no nominal-schema grounding makes it translatable";
  if (first_bad->options_truncated) rep.warnings.push_back("grounding options limited to at most 3 variables");
  rep.message = msg;
  return rep;
}

// Axioms to commit for rule text, given the user's grounding choice.
struct CommitPlan {
  enum class Verdict { Ready, NeedsGrounding, InvalidGrounding, Error };
  Verdict verdict = Verdict::Error;
  std::vector<Axiom> axioms;
  ConvertReport report;
};

inline CommitPlan plan_commit(std::string_view rule_text, const OntologyDocument& doc,
                              const std::optional<std::set<std::string>>& ground) {
  CommitPlan plan;
  plan.report = convert_text(rule_text, doc);
  const auto& rep = plan.report;
  if (rep.status == ConvertStatus::Error) return plan;
  if (rep.status == ConvertStatus::Ok) {
    plan.verdict = CommitPlan::Verdict::Ready;
    plan.axioms = rep.axioms;
    return plan;
  }
  if (!ground) {
    plan.verdict = CommitPlan::Verdict::NeedsGrounding;
    return plan;
  }
  // Translatable head atoms are committed as axioms; every untranslatable
  // one needs the chosen option to be one of its minimal options.
  std::vector<Axiom> out;
  const GroundingOption chosen{*ground};
  for (std::size_t i = 0; i < rep.rules.size(); ++i) {
    if (const auto* s = std::get_if<Success>(&rep.results[i])) {
      out.insert(out.end(), s->axioms.begin(), s->axioms.end());
      continue;
    }
    const auto& opts = std::get<UntranslatableRule>(rep.results[i]).options;
    if (std::find(opts.begin(), opts.end(), chosen) == opts.end()) {
      plan.verdict = CommitPlan::Verdict::InvalidGrounding;
      return plan;
    }
    out.push_back(annotate_rule(rep.rules[i], chosen));
  }
  plan.verdict = CommitPlan::Verdict::Ready;
  plan.axioms = std::move(out);
  return plan;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json axiom_json(const Axiom& ax) {
  return {{"functional", functional(ax)}, {"manchester", render_manchester(ax)}};
}

inline nlohmann::json declaration_json(const Declaration& d) {
  return {{"kind", d.kind == EntityKind::Class ? "Class" : "ObjectProperty"}, {"name", d.name}};
}

inline nlohmann::json to_json(const ConvertReport& rep) {
  nlohmann::json j;
  j["status"] = to_string(rep.status);
  j["axioms"] = nlohmann::json::array();
  for (const auto& ax : rep.axioms) j["axioms"].push_back(axiom_json(ax));
  j["freshDeclarations"] = nlohmann::json::array();
  for (const auto& d : rep.fresh_declarations) j["freshDeclarations"].push_back(declaration_json(d));
  j["options"] = nlohmann::json::array();
  for (const auto& o : rep.options) j["options"].push_back(std::vector<std::string>(o.variables.begin(), o.variables.end()));
  j["optionPreviews"] = rep.option_previews;
  j["warnings"] = rep.warnings;
  if (rep.message) j["message"] = *rep.message;
  if (rep.position) j["position"] = {{"line", rep.position->line}, {"column", rep.position->column}};
  if (rep.error_kind) j["errorKind"] = to_string(*rep.error_kind);
  return j;
}

inline nlohmann::json signature_json(const Signature& sig) {
  return {{"classes", std::vector<std::string>(sig.classes.begin(), sig.classes.end())},
          {"objectProperties", std::vector<std::string>(sig.object_properties.begin(), sig.object_properties.end())}};
}

}  // namespace ruleowl
