// ruleowl: convert rules to OWL axioms, verify translations, serve the API.

#include <pthread.h>
#include <signal.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "ruleowl/api.hpp"
#include "ruleowl/http_service.hpp"
#include "ruleowl/mutation.hpp"
#include "ruleowl/ontology_io.hpp"
#include "ruleowl/oracle.hpp"
#include "ruleowl/rule_parser.hpp"
#include "ruleowl/transformer.hpp"

namespace {

using namespace ruleowl;

enum Exit : int { kOk = 0, kInputError = 1, kUntranslatable = 2, kInvalidGround = 3, kVerifyFailed = 4 };

struct CliConfig {
  std::string ontology_path;
  std::string base_iri = iris::kDefaultBase;
  std::string format = "manchester";
  std::uint64_t seed = kDefaultOracleSeed;
};

struct RuleSource {
  std::vector<std::string> rules;
  std::string rules_file;
};

void add_common(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--ontology", cfg.ontology_path, "Ontology file (.ofn, functional-syntax subset)");
  cmd->add_option("--base-iri", cfg.base_iri, "IRI of the default prefix for new ontologies");
  cmd->add_option("--seed", cfg.seed, "Seed for sampled oracle interpretations");
}

void add_rule_source(CLI::App* cmd, RuleSource& src) {
  cmd->add_option("--rule", src.rules, "Rule text, e.g. \"A(?x) -> B(?x)\"");
  cmd->add_option("--rules-file", src.rules_file, "File with one rule per line; '#' starts a comment");
}

struct NumberedRule {
  std::size_t line;
  std::string text;
};

std::vector<NumberedRule> collect_rules(const RuleSource& src) {
  std::vector<NumberedRule> out;
  for (const auto& r : src.rules) out.push_back({0, r});
  if (!src.rules_file.empty()) {
    std::istringstream in(read_file(src.rules_file));
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      out.push_back({n, line});
    }
  }
  return out;
}

OntologyDocument load_config_document(const CliConfig& cfg) {
  if (cfg.ontology_path.empty() || !std::filesystem::exists(cfg.ontology_path))
    return OntologyDocument::empty(cfg.base_iri);
  return load_ontology(cfg.ontology_path);
}

std::string where(const NumberedRule& r) {
  return r.line ? "line " + std::to_string(r.line) + ": " : std::string();
}

void print_parse_error(const NumberedRule& r, const ConvertReport& rep) {
  std::cerr << "error: " << where(r);
  if (rep.position) std::cerr << rep.position->line << ":" << rep.position->column << ": ";
  std::cerr << rep.message.value_or("parse error") << "\n";
}

void print_axioms(const std::vector<Axiom>& axioms, const std::string& format) {
  for (const auto& ax : axioms) std::cout << (format == "functional" ? functional(ax) : render_manchester(ax)) << "\n";
}

int cmd_convert(const CliConfig& cfg, const RuleSource& src, bool do_commit, bool declare_missing,
                const std::string& ground_arg) {
  if (do_commit && cfg.ontology_path.empty()) {
    std::cerr << "error: --commit requires --ontology\n";
    return kInputError;
  }
  std::optional<std::set<std::string>> ground;
  if (!ground_arg.empty()) {
    ground.emplace();
    std::istringstream in(ground_arg);
    std::string v;
    while (std::getline(in, v, ',')) {
      while (!v.empty() && (v.front() == ' ' || v.front() == '?')) v.erase(0, 1);
      while (!v.empty() && v.back() == ' ') v.pop_back();
      if (!v.empty()) ground->insert(v);
    }
  }

  OntologyDocument doc;
  std::vector<NumberedRule> rules;
  try {
    doc = load_config_document(cfg);
    rules = collect_rules(src);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (rules.empty()) {
    std::cerr << "error: no rules given (use --rule or --rules-file)\n";
    return kInputError;
  }

  int code = kOk;
  for (const auto& r : rules) {
    auto plan = plan_commit(r.text, doc, ground);
    const auto& rep = plan.report;
    if (plan.verdict == CommitPlan::Verdict::Error) {
      print_parse_error(r, rep);
      return kInputError;
    }
    if (cfg.format == "json") {
      auto j = to_json(rep);
      if (plan.verdict == CommitPlan::Verdict::Ready && rep.status == ConvertStatus::Untranslatable) {
        j["grounded"] = nlohmann::json::array();
        for (const auto& ax : plan.axioms) j["grounded"].push_back(axiom_json(ax));
      }
      std::cout << j.dump() << "\n";
    } else if (rep.status == ConvertStatus::Ok) {
      print_axioms(plan.axioms, cfg.format);
    } else {
      std::cout << "# untranslatable: " << where(r) << r.text << "\n";
      std::cout << "# " << rep.message.value_or("") << "\n";
      for (std::size_t i = 0; i < rep.options.size(); ++i)
        std::cout << "option " << join_variables(rep.options[i].variables) << "\t" << rep.option_previews[i] << "\n";
      if (plan.verdict == CommitPlan::Verdict::Ready) print_axioms(plan.axioms, cfg.format);
    }

    if (plan.verdict == CommitPlan::Verdict::NeedsGrounding) {
      code = std::max<int>(code, kUntranslatable);
      continue;
    }
    if (plan.verdict == CommitPlan::Verdict::InvalidGrounding) {
      std::cerr << "error: " << where(r) << "--ground " << ground_arg << " is not a valid grounding option\n";
      code = kInvalidGround;
      continue;
    }
    if (do_commit) {
      auto outcome = commit(doc, plan.axioms, declare_missing);
      for (const auto& n : outcome.notices) std::cerr << "note: " << n << "\n";
      doc = std::move(outcome.document);
    }
  }

  if (do_commit) {
    try {
      save_ontology(cfg.ontology_path, doc);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kInputError;
    }
  }
  return code;
}

int cmd_verify(const CliConfig& cfg, const RuleSource& src, std::size_t max_domain, bool mutate) {
  OntologyDocument doc;
  std::vector<NumberedRule> rules;
  try {
    doc = load_config_document(cfg);
    rules = collect_rules(src);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (max_domain < 1 || max_domain > kMaxOracleDomain) {
    std::cerr << "error: --max-domain must be between 1 and " << kMaxOracleDomain << "\n";
    return kInputError;
  }

  std::size_t total = 0, passed = 0, untranslatable = 0, failed = 0;
  const Signature sig = doc.signature();
  for (const auto& r : rules) {
    std::vector<Rule> parsed;
    try {
      parsed = parse_rule(r.text);
    } catch (const ParseError& e) {
      std::cerr << "error: " << where(r) << e.what() << "\n";
      return kInputError;
    }
    for (const auto& rule : parsed) {
      ++total;
      auto res = convert(rule, sig, {RollOrder::Lexicographic, false});
      const auto* ok = std::get_if<Success>(&res);
      if (!ok) {
        ++untranslatable;
        std::cout << "UNTRANSLATABLE " << render_rule(rule) << "\n";
        continue;
      }
      std::vector<Axiom> axioms = ok->axioms;
      if (mutate) {
        auto cls = class_names(axioms);
        if (cls.size() >= 2) {
          auto first = *cls.begin();
          auto second = *std::next(cls.begin());
          axioms = replace_class_name(axioms, second, first);
          std::cout << "# mutated: " << second << " -> " << first << "\n";
        } else {
          std::cout << "# mutation skipped: fewer than two class names\n";
        }
      }
      OracleConfig oc;
      oc.max_domain = max_domain;
      oc.seed = cfg.seed;
      auto verdict = check_equivalence(rule, axioms, ok->fresh_roles, oc);
      if (verdict.pass) {
        ++passed;
        std::cout << "PASS " << render_rule(rule) << "\n";
      } else {
        ++failed;
        std::cout << "FAIL " << render_rule(rule) << "\n";
        for (const auto& ax : axioms) std::cout << "  axiom: " << render_manchester(ax) << "\n";
        std::cout << "  counterexample: " << verdict.counterexample->dump();
      }
    }
  }
  std::cout << total << " rules: " << passed << " passed, " << untranslatable << " untranslatable, " << failed
            << " failed\n";
  return failed ? kVerifyFailed : kOk;
}

int cmd_serve(const CliConfig& cfg, int port, const std::string& host, const std::string& static_dir) {
  if (cfg.ontology_path.empty()) {
    std::cerr << "error: serve requires --ontology\n";
    return kInputError;
  }
  OntologyDocument doc;
  try {
    doc = load_config_document(cfg);
    if (!std::filesystem::exists(cfg.ontology_path)) save_ontology(cfg.ontology_path, doc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  // Block termination signals in every thread; a dedicated thread waits for them.
  sigset_t sigs;
  sigemptyset(&sigs);
  sigaddset(&sigs, SIGINT);
  sigaddset(&sigs, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &sigs, nullptr);

  auto active = std::make_shared<ActiveDocument>(std::move(doc), cfg.ontology_path);
  Service service(active, static_dir.empty() ? std::nullopt : std::optional<std::string>(static_dir));
  int bound = service.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return kInputError;
  }
  std::cout << "listening on http://" << host << ":" << bound << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&sigs, &sig);
    service.stop();
  });
  service.listen_after_bind();
  if (waiter.joinable()) {
    // listen can also end without a signal; wake the waiter in that case.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  }
  try {
    active->flush();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convert rules into OWL 2 axioms"};
  app.require_subcommand(1);
  CliConfig cfg;

  RuleSource convert_src;
  bool do_commit = false, declare_missing = false;
  std::string ground;
  auto* convert = app.add_subcommand("convert", "Translate rules and print the generated axioms");
  add_common(convert, cfg);
  add_rule_source(convert, convert_src);
  convert->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"functional", "manchester", "json"}));
  convert->add_flag("--commit", do_commit, "Write the generated axioms into the ontology file");
  convert->add_flag("--declare-missing", declare_missing, "Declare classes and properties not yet in the ontology");
  convert->add_option("--ground", ground, "Nominal-schema variables for an untranslatable rule, e.g. z or y,z");

  RuleSource verify_src;
  std::size_t max_domain = 2;
  bool mutate = false;
  auto* verify = app.add_subcommand("verify", "Check translations against the finite-model oracle");
  add_common(verify, cfg);
  add_rule_source(verify, verify_src);
  verify->add_option("--max-domain", max_domain, "Largest domain size to check");
  verify->add_flag("--mutate", mutate, "Corrupt the generated axioms before checking");

  int port = 0;
  std::string host = "127.0.0.1";
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  add_common(serve, cfg);
  serve->add_option("--port", port, "Port to listen on")->required();
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--static-dir", static_dir, "Directory with web front-end files served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  if (*convert) return cmd_convert(cfg, convert_src, do_commit, declare_missing, ground);
  if (*verify) return cmd_verify(cfg, verify_src, max_domain, mutate);
  return cmd_serve(cfg, port, host, static_dir);
}
