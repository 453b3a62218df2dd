// Copyright 2026 The Tactful Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP/JSON service. Every request goes through Service::Handle, a pure
// function of (method, path, body) and the loaded registry; the HTTP layer
// only copies bytes in and out.
//
// Config file:
//
//   {
//     "lexicon": "builtin:default",
//     "bind": {"host": "127.0.0.1", "port": 8080},
//     "models": {"table-a1": "builtin:table-a1", "annotator-7": "models/a7.json"},
//     "channels": {"experiment-a": "builtin:experiment-a", "en-zh": "channels/en_zh.json"},
//     "retrieval_corpus": "corpus/requests.jsonl"
//   }
//
// The builtin names "table-a1", "experiment-a" and "all-safe" are always
// registered unless the config rebinds them. TACTFUL_HOST and TACTFUL_PORT
// override the bind address.
//
// Endpoints (JSON bodies):
//
//   GET  /v1/health          -> {status, lexicon_version}
//   GET  /v1/strategies      -> the lexicon document
//   GET  /v1/profiles        -> {models, channels, retrieval}
//   POST /v1/extract         {message} -> {strategies, occurrences}
//   POST /v1/perceive        {model, message | strategies} -> {model, strategies, level, polarity}
//   POST /v1/plan            {message | strategies, sender, receiver, channel, method, options}
//                            -> plan
//   POST /v1/paraphrase      {message, sender, receiver, channel, method, options, beam,
//                             alternatives} -> {original, no_intervention, plan, alternatives}
//   POST /v1/channel/profile {pairs: [{original, round_trip}], threshold, label} -> profile
//   POST /v1/admin/reload    -> {status, lexicon_version}
//
// Errors: {code, message, detail} with 400 (bad request), 404 (unknown
// route or profile), 405, 422 (no admissible answer) or 500.

#pragma once

#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "tactful/channel.hpp"
#include "tactful/error.hpp"
#include "tactful/extract.hpp"
#include "tactful/http.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/perception.hpp"
#include "tactful/pipeline.hpp"
#include "tactful/planner.hpp"
#include "tactful/resources.hpp"
#include "tactful/serialize.hpp"

namespace tactful {

struct ServiceConfig {
  std::string lexicon = "builtin:default";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::map<std::string, std::string> models;
  std::map<std::string, std::string> channels;
  std::optional<std::string> retrieval_corpus;
  std::string base_dir;
  std::string source;  // config file, re-read on reload; empty for in-memory configs
};

inline ServiceConfig ParseServiceConfig(const nlohmann::json& doc, const std::string& base_dir = "") {
  lexicon_detail::RejectUnknownKeys(doc, {"lexicon", "bind", "models", "channels", "retrieval_corpus"},
                                    "service config");
  ServiceConfig c;
  c.base_dir = base_dir;
  try {
    if (doc.contains("lexicon")) c.lexicon = doc["lexicon"].get<std::string>();
    if (doc.contains("bind")) {
      const auto& bind = doc["bind"];
      lexicon_detail::RejectUnknownKeys(bind, {"host", "port"}, "service config 'bind'");
      if (bind.contains("host")) c.host = bind["host"].get<std::string>();
      if (bind.contains("port")) c.port = bind["port"].get<int>();
    }
    if (doc.contains("models")) c.models = doc["models"].get<std::map<std::string, std::string>>();
    if (doc.contains("channels")) c.channels = doc["channels"].get<std::map<std::string, std::string>>();
    if (doc.contains("retrieval_corpus")) c.retrieval_corpus = doc["retrieval_corpus"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("service config: ") + e.what());
  }
  if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::kConfig, "service config: port out of range");
  return c;
}

inline ServiceConfig LoadServiceConfig(const std::string& path) {
  ServiceConfig c = ParseServiceConfig(ParseJson(ReadFile(path), "service config '" + path + "'"),
                                       std::filesystem::path(path).parent_path().string());
  c.source = path;
  return c;
}

inline void ApplyEnvironment(ServiceConfig& c) {
  if (const char* host = std::getenv("TACTFUL_HOST"); host && *host) c.host = host;
  if (const char* port = std::getenv("TACTFUL_PORT"); port && *port) {
    try {
      std::size_t used = 0;
      int p = std::stoi(port, &used);
      if (used != std::string(port).size() || p < 0 || p > 65535) throw std::invalid_argument(port);
      c.port = p;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfig, std::string("TACTFUL_PORT is not a port: ") + port);
    }
  }
}

// An error carrying a structured detail object for the response body.
class DetailedError : public Error {
 public:
  DetailedError(ErrorCode code, const std::string& message, nlohmann::json detail)
      : Error(code, message), detail_(std::move(detail)) {}
  const nlohmann::json& detail() const { return detail_; }

 private:
  nlohmann::json detail_;
};

// Loaded models, channels and lexicon. Immutable once built.
class Registry {
 public:
  static std::shared_ptr<const Registry> Build(const ServiceConfig& c) {
    auto r = std::shared_ptr<Registry>(new Registry(ResolveLexicon(c.lexicon, c.base_dir)));
    std::map<std::string, std::string> models = {{"table-a1", "builtin:table-a1"}};
    std::map<std::string, std::string> channels = {{"experiment-a", "builtin:experiment-a"},
                                                   {"all-safe", "builtin:all-safe"}};
    for (const auto& [name, ref] : c.models) models[name] = ref;
    for (const auto& [name, ref] : c.channels) channels[name] = ref;
    for (const auto& [name, ref] : models) r->models_.emplace(name, ResolveModel(ref, r->lexicon_, c.base_dir));
    for (const auto& [name, ref] : channels) {
      r->channels_.emplace(name, ResolveChannel(ref, r->lexicon_, c.base_dir));
    }
    if (c.retrieval_corpus) {
      std::vector<std::string> texts;
      for (const CorpusEntry& e : LoadCorpus(ResolvePath(*c.retrieval_corpus, c.base_dir))) texts.push_back(e.text);
      for (const auto& [name, model] : r->models_) {
        r->indexes_.emplace(name, std::make_unique<RetrievalIndex>(texts, model, r->lexicon_));
      }
    }
    return r;
  }

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  const StrategyLexicon& lexicon() const { return lexicon_; }

  const PerceptionModel& model(const std::string& name) const {
    auto it = models_.find(name);
    if (it == models_.end()) throw Unknown("model", name, Names(models_));
    return it->second;
  }

  const ChannelSpec& channel(const std::string& name) const {
    auto it = channels_.find(name);
    if (it == channels_.end()) throw Unknown("channel", name, Names(channels_));
    return it->second;
  }

  // Retrieval index judged by the named sender model, or null.
  const RetrievalIndex* index(const std::string& sender) const {
    auto it = indexes_.find(sender);
    return it == indexes_.end() ? nullptr : it->second.get();
  }

  std::vector<std::string> model_names() const { return Names(models_); }
  std::vector<std::string> channel_names() const { return Names(channels_); }
  bool has_retrieval() const { return !indexes_.empty(); }

 private:
  explicit Registry(StrategyLexicon lex) : lexicon_(std::move(lex)) {}

  template <typename Map>
  static std::vector<std::string> Names(const Map& m) {
    std::vector<std::string> out;
    for (const auto& [name, value] : m) out.push_back(name);
    return out;
  }

  static DetailedError Unknown(const std::string& kind, const std::string& name,
                               const std::vector<std::string>& available) {
    return DetailedError(ErrorCode::kUnknownProfile, "unknown " + kind + " '" + name + "'",
                         {{"kind", kind}, {"name", name}, {"available", available}});
  }

  StrategyLexicon lexicon_;
  std::map<std::string, PerceptionModel> models_;
  std::map<std::string, ChannelSpec> channels_;
  std::map<std::string, std::unique_ptr<RetrievalIndex>> indexes_;
};

struct HttpResult {
  int status = 200;
  std::string body;
};

inline int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownProfile:
      return 404;
    case ErrorCode::kParse:
    case ErrorCode::kValidation:
    case ErrorCode::kUnknownStrategy:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kConfig:
      return 400;
    case ErrorCode::kInfeasible:
    case ErrorCode::kNoSafeStrategy:
    case ErrorCode::kEmptyPool:
    case ErrorCode::kUniverseTooLarge:
    case ErrorCode::kNoApplicableTemplate:
    case ErrorCode::kInsufficientData:
      return 422;
    default:
      return 500;
  }
}

inline HttpResult ErrorResult(int status, std::string_view code, const std::string& message,
                              nlohmann::json detail = nlohmann::json::object()) {
  nlohmann::json body = {{"code", code}, {"message", message}, {"detail", std::move(detail)}};
  return {status, body.dump()};
}

namespace service_detail {

inline std::string RequireText(const nlohmann::json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    throw Error(ErrorCode::kValidation, std::string("request needs a string '") + key + "'");
  }
  return it->get<std::string>();
}

inline std::string TextOr(const nlohmann::json& body, const char* key, const std::string& fallback) {
  auto it = body.find(key);
  if (it == body.end()) return fallback;
  if (!it->is_string()) throw Error(ErrorCode::kValidation, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

inline StrategySet StrategiesFrom(const nlohmann::json& body, const StrategyLexicon& lex) {
  StrategySet out;
  try {
    for (const auto& s : body.at("strategies")) out.insert(s.get<std::string>());
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kValidation, "'strategies' must be an array of strategy ids");
  }
  for (const StrategyId& s : out) lex.at(s);
  return out;
}

inline Circumstance CircumstanceFrom(const nlohmann::json& body, const Registry& reg) {
  return {reg.model(TextOr(body, "sender", "table-a1")), reg.model(TextOr(body, "receiver", "table-a1")),
          reg.channel(TextOr(body, "channel", "all-safe"))};
}

inline std::size_t CountOr(const nlohmann::json& body, const char* key, std::size_t fallback) {
  auto it = body.find(key);
  if (it == body.end()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 1) {
    throw Error(ErrorCode::kValidation, std::string("'") + key + "' must be a positive integer");
  }
  return it->get<std::size_t>();
}

}  // namespace service_detail

class Service {
 public:
  explicit Service(ServiceConfig config) : config_(std::move(config)), registry_(Registry::Build(config_)) {}

  const ServiceConfig& config() const { return config_; }

  std::shared_ptr<const Registry> registry() const {
    std::lock_guard<std::mutex> lock(mu_);
    return registry_;
  }

  // Re-reads the config file (if any) and swaps in a fresh registry. On
  // failure the old registry stays live.
  void Reload() {
    ServiceConfig next = config_.source.empty() ? config_ : LoadServiceConfig(config_.source);
    if (!config_.source.empty()) {
      next.host = config_.host;
      next.port = config_.port;
    }
    std::shared_ptr<const Registry> fresh = Registry::Build(next);
    std::lock_guard<std::mutex> lock(mu_);
    config_.models = next.models;
    config_.channels = next.channels;
    config_.lexicon = next.lexicon;
    config_.retrieval_corpus = next.retrieval_corpus;
    registry_ = std::move(fresh);
  }

  HttpResult Handle(const std::string& method, const std::string& path, const std::string& body) {
    try {
      return Route(method, path, body);
    } catch (const DetailedError& e) {
      return ErrorResult(HttpStatus(e.code()), ToString(e.code()), e.what(), e.detail());
    } catch (const Error& e) {
      return ErrorResult(HttpStatus(e.code()), ToString(e.code()), e.what());
    } catch (const std::exception& e) {
      return ErrorResult(500, "internal_error", e.what());
    }
  }

 private:
  HttpResult Route(const std::string& method, const std::string& path, const std::string& raw) {
    using namespace service_detail;
    static const std::map<std::string, std::string> kRoutes = {
        {"/v1/health", "GET"},          {"/v1/strategies", "GET"},        {"/v1/profiles", "GET"},
        {"/v1/extract", "POST"},        {"/v1/perceive", "POST"},         {"/v1/plan", "POST"},
        {"/v1/paraphrase", "POST"},     {"/v1/channel/profile", "POST"},  {"/v1/admin/reload", "POST"}};
    auto route = kRoutes.find(path);
    if (route == kRoutes.end()) return ErrorResult(404, "not_found", "no such endpoint: " + path);
    if (route->second != method) {
      return ErrorResult(405, "method_not_allowed", path + " expects " + route->second);
    }
    if (path == "/v1/admin/reload") {
      Reload();
      return Ok({{"status", "reloaded"}, {"lexicon_version", registry()->lexicon().version()}});
    }
    std::shared_ptr<const Registry> reg = registry();
    const StrategyLexicon& lex = reg->lexicon();
    if (path == "/v1/health") return Ok({{"status", "ok"}, {"lexicon_version", lex.version()}});
    if (path == "/v1/strategies") return Ok(ToJson(lex));
    if (path == "/v1/profiles") {
      return Ok({{"models", reg->model_names()},
                 {"channels", reg->channel_names()},
                 {"retrieval", reg->has_retrieval()}});
    }

    nlohmann::json body = nlohmann::json::parse(raw.empty() ? "{}" : raw, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      return ErrorResult(400, ToString(ErrorCode::kParse), "request body is not a JSON object");
    }
    if (path == "/v1/extract") {
      Message m(RequireText(body, "message"));
      return Ok(ToJson(ExtractStrategies(m, lex), m, lex));
    }
    if (path == "/v1/perceive") {
      std::string name = TextOr(body, "model", "table-a1");
      const PerceptionModel& model = reg->model(name);
      StrategySet s = body.contains("strategies") ? StrategiesFrom(body, lex)
                                                  : ExtractStrategies(RequireText(body, "message"), lex).strategies;
      return Ok({{"model", name},
                 {"strategies", StrategiesJson(s, lex)},
                 {"level", Round6(Perceive(model, s))},
                 {"polarity", std::string(ToString(PolarityOf(model, s)))}});
    }
    if (path == "/v1/plan") {
      Circumstance circ = CircumstanceFrom(body, *reg);
      BuildOptions opts = BuildOptionsFromJson(body.value("options", nlohmann::json()));
      std::string plan_method = TextOr(body, "method", "ilp");
      if (body.contains("message")) {
        Message m(RequireText(body, "message"));
        PlanProblem p = BuildProblem(m, circ, lex, opts);
        return Ok(ToJson(PlanWithMethod(plan_method, p, circ, m, lex, Index(*reg, body)), lex));
      }
      if (plan_method == "retrieval") throw Error(ErrorCode::kValidation, "retrieval planning needs a 'message'");
      PlanProblem p = BuildProblem(StrategiesFrom(body, lex), circ, lex, opts);
      return Ok(ToJson(PlanWithMethod(plan_method, p, circ, Message(""), lex), lex));
    }
    if (path == "/v1/paraphrase") {
      Circumstance circ = CircumstanceFrom(body, *reg);
      ParaphraseOptions opts;
      opts.method = TextOr(body, "method", "ilp");
      opts.build = BuildOptionsFromJson(body.value("options", nlohmann::json()));
      opts.beam = CountOr(body, "beam", 3);
      opts.alternatives = CountOr(body, "alternatives", 1);
      return Ok(ToJson(Paraphrase(RequireText(body, "message"), circ, lex, opts, Index(*reg, body)), lex));
    }
    // /v1/channel/profile
    std::vector<RoundTripPair> pairs;
    try {
      for (const auto& p : body.at("pairs")) {
        pairs.push_back({p.at("original").get<std::string>(), p.at("round_trip").get<std::string>()});
      }
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kValidation, "'pairs' must be an array of {original, round_trip}");
    }
    double threshold = 0.5;
    if (body.contains("threshold")) {
      if (!body["threshold"].is_number()) throw Error(ErrorCode::kValidation, "'threshold' must be a number");
      threshold = body["threshold"].get<double>();
    }
    return Ok(ToJson(ProfileChannel(pairs, lex, threshold, TextOr(body, "label", "profiled")), lex));
  }

  static const RetrievalIndex* Index(const Registry& reg, const nlohmann::json& body) {
    return reg.index(service_detail::TextOr(body, "sender", "table-a1"));
  }

  static HttpResult Ok(const nlohmann::json& j) { return {200, j.dump()}; }

  ServiceConfig config_;
  mutable std::mutex mu_;
  std::shared_ptr<const Registry> registry_;
};

// Binds `service` to an httplib server. Start() listens on a background
// thread; Run() blocks.
class HttpServer {
 public:
  explicit HttpServer(Service& service) : service_(service) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      HttpResult r = service_.Handle(req.method, req.path, req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    server_.Get(".*", forward);
    server_.Post(".*", forward);
    server_.Put(".*", forward);
    server_.Delete(".*", forward);
  }

  ~HttpServer() { Stop(); }

  // Port 0 picks a free port. Returns the bound port.
  int Bind(const std::string& host, int port) {
    int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) {
      throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
    }
    return bound;
  }

  void Start() {
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void Run() { server_.listen_after_bind(); }

  void Stop() {
    if (server_.is_running()) server_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  Service& service_;
  httplib::Server server_;
  std::thread thread_;
};

// Loads the registry, binds and serves until the process is stopped.
inline void Serve(ServiceConfig config) {
  ApplyEnvironment(config);
  Service service(config);
  HttpServer server(service);
  server.Bind(config.host, config.port);
  server.Run();
}

}  // namespace tactful
