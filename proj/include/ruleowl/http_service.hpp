#pragma once

// HTTP/JSON service over a single active ontology document.
//
//   POST /api/convert   {ruleText}                          -> ConvertResponse
//   POST /api/commit    {ruleText, ground?, declareMissing} -> {committed, notices}
//   GET  /api/signature                                     -> {classes, objectProperties}
//   GET  /api/ontology                                      -> functional-syntax text
//   POST /api/ontology  {text}                              -> {ok}
//
// Static files for the web front end are served from an optional directory
// mounted at "/".

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <utility>

#include "httplib.h"
#include "json.hpp"

#include "ruleowl/api.hpp"
#include "ruleowl/ontology_io.hpp"

namespace ruleowl {

// The single mutable document cell. Readers get a consistent snapshot;
// writers are serialized and persist before the new state is published.
class ActiveDocument {
 public:
  ActiveDocument(OntologyDocument doc, std::optional<std::string> path)
      : doc_(std::move(doc)), path_(std::move(path)) {}

  OntologyDocument snapshot() const {
    std::shared_lock lock(mu_);
    return doc_;
  }

  // Runs `update` on the current document under the writer lock. When it
  // returns a new document, that document is persisted, then published.
  template <typename F>
  auto modify(F&& update) {
    std::unique_lock lock(mu_);
    auto [next, result] = update(static_cast<const OntologyDocument&>(doc_));
    if (next) {
      if (path_) save_ontology(*path_, *next);
      doc_ = std::move(*next);
    }
    return result;
  }

  void flush() const {
    std::shared_lock lock(mu_);
    if (path_) save_ontology(*path_, doc_);
  }

  const std::optional<std::string>& path() const { return path_; }

 private:
  mutable std::shared_mutex mu_;
  OntologyDocument doc_;
  std::optional<std::string> path_;
};

class Service {
 public:
  explicit Service(std::shared_ptr<ActiveDocument> doc, std::optional<std::string> static_dir = std::nullopt)
      : doc_(std::move(doc)) {
    if (static_dir) server_.set_mount_point("/", *static_dir);
    routes();
  }

  // Binds to host:port; port 0 picks a free port. Returns the bound port or
  // -1 on failure.
  int bind(const std::string& host, int port) {
    if (port == 0) return server_.bind_to_any_port(host);
    return server_.bind_to_port(host, port) ? port : -1;
  }

  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  bool is_running() const { return server_.is_running(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

  ActiveDocument& document() { return *doc_; }

 private:
  using json = nlohmann::json;

  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static std::optional<json> body_json(const httplib::Request& req, httplib::Response& res) {
    try {
      auto j = json::parse(req.body);
      if (!j.is_object()) throw std::invalid_argument("request body must be a JSON object");
      return j;
    } catch (const std::exception& e) {
      reply(res, 400, {{"status", "error"}, {"message", std::string("malformed JSON: ") + e.what()}});
      return std::nullopt;
    }
  }

  static std::optional<std::string> string_field(const json& j, const char* key, httplib::Response& res) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      reply(res, 400, {{"status", "error"}, {"message", std::string("missing string field '") + key + "'"}});
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  void routes() {
    server_.Post("/api/convert", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req, res);
      if (!body) return;
      auto text = string_field(*body, "ruleText", res);
      if (!text) return;
      reply(res, 200, to_json(convert_text(*text, doc_->snapshot())));
    });

    server_.Post("/api/commit", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req, res);
      if (!body) return;
      auto text = string_field(*body, "ruleText", res);
      if (!text) return;
      std::optional<std::set<std::string>> ground;
      if (auto it = body->find("ground"); it != body->end() && !it->is_null()) {
        if (!it->is_array() || !std::all_of(it->begin(), it->end(), [](const json& v) { return v.is_string(); }))
          return reply(res, 400, {{"status", "error"}, {"message", "'ground' must be a list of variable names"}});
        ground.emplace();
        for (const auto& v : *it) {
          auto name = v.get<std::string>();
          if (!name.empty() && name.front() == '?') name.erase(0, 1);
          ground->insert(name);
        }
      }
      bool declare = body->value("declareMissing", false);

      // Planning and applying happen under the writer lock so the plan sees
      // the document it is committed to.
      json out;
      int status = 200;
      try {
        doc_->modify([&](const OntologyDocument& cur) -> std::pair<std::optional<OntologyDocument>, int> {
          auto plan = plan_commit(*text, cur, ground);
          switch (plan.verdict) {
            case CommitPlan::Verdict::Error:
              out = to_json(plan.report);
              status = 400;
              return {std::nullopt, 0};
            case CommitPlan::Verdict::NeedsGrounding:
            case CommitPlan::Verdict::InvalidGrounding:
              out = to_json(plan.report);
              out["message"] = plan.verdict == CommitPlan::Verdict::NeedsGrounding
                                   ? "rule is untranslatable; choose a grounding option to insert it as an annotated SWRL rule"
                                   : "the given grounding is not one of the offered options";
              status = 409;
              return {std::nullopt, 0};
            case CommitPlan::Verdict::Ready: break;
          }
          auto outcome = commit(cur, plan.axioms, declare);
          out = {{"committed", json::array()}, {"notices", outcome.notices}};
          for (const auto& ax : outcome.added) out["committed"].push_back(functional(ax));
          return {std::move(outcome.document), 0};
        });
      } catch (const std::exception& e) {
        return reply(res, 500, {{"status", "error"}, {"message", std::string("commit failed: ") + e.what()}});
      }
      reply(res, status, out);
    });

    server_.Get("/api/signature", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, signature_json(doc_->snapshot().signature()));
    });

    server_.Get("/api/ontology", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(serialize_ontology(doc_->snapshot()), "text/plain");
    });

    server_.Post("/api/ontology", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req, res);
      if (!body) return;
      auto text = string_field(*body, "text", res);
      if (!text) return;
      OntologyDocument parsed;
      try {
        parsed = parse_ontology(*text);
      } catch (const ParseError& e) {
        return reply(res, 400,
                     {{"status", "error"},
                      {"message", e.message()},
                      {"position", {{"line", e.position().line}, {"column", e.position().column}}}});
      }
      try {
        doc_->modify([&](const OntologyDocument&) -> std::pair<std::optional<OntologyDocument>, int> {
          return {std::move(parsed), 0};
        });
      } catch (const std::exception& e) {
        return reply(res, 500, {{"status", "error"}, {"message", e.what()}});
      }
      reply(res, 200, {{"ok", true}});
    });
  }

  std::shared_ptr<ActiveDocument> doc_;
  httplib::Server server_;
};

}  // namespace ruleowl
