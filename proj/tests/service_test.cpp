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

#include "tactful/service.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <thread>
#include <vector>

namespace tactful {
namespace {

const StrategyLexicon& Lex() { return DefaultLexicon(); }

nlohmann::json Body(const HttpResult& r) { return nlohmann::json::parse(r.body); }

struct GoldenCase {
  nlohmann::json request;
  Circumstance circ;
  ParaphraseOptions opts;
};

std::vector<GoldenCase> GoldenCases() {
  Circumstance exp_a{TableA1Model(), TableA1Model(), ExperimentAChannel(Lex())};
  ParaphraseOptions greedy;
  greedy.method = "greedy";
  ParaphraseOptions three;
  three.alternatives = 3;
  three.build.forbidden = {"By.The.Way"};
  return {
      {{{"message", "could you please proofread this article? thanks!"},
        {"sender", "table-a1"},
        {"receiver", "table-a1"},
        {"channel", "experiment-a"}},
       exp_a,
       {}},
      {{{"message", "hi , would you please fix the broken link in the infobox ? thank you ."},
        {"channel", "experiment-a"},
        {"method", "greedy"}},
       exp_a,
       greedy},
      {{{"message", "could you please proofread this article? thanks!"},
        {"channel", "experiment-a"},
        {"alternatives", 3},
        {"options", {{"forbidden", {"By.The.Way"}}}}},
       exp_a,
       three},
  };
}

TEST(ServiceGoldenTest, ParaphraseMatchesLibrary) {
  Service service(ServiceConfig{});
  for (const GoldenCase& c : GoldenCases()) {
    HttpResult r = service.Handle("POST", "/v1/paraphrase", c.request.dump());
    ASSERT_EQ(r.status, 200) << r.body;
    std::string expected =
        ToJson(Paraphrase(c.request["message"].get<std::string>(), c.circ, Lex(), c.opts), Lex()).dump();
    EXPECT_EQ(r.body, expected);
  }
}

TEST(ServiceGoldenTest, WorkedExampleEndToEnd) {
  Service service(ServiceConfig{});
  HttpResult r = service.Handle("POST", "/v1/paraphrase", GoldenCases()[0].request.dump());
  nlohmann::json j = Body(r);
  EXPECT_DOUBLE_EQ(j["plan"]["gap"].get<double>(), 0.001);
  EXPECT_DOUBLE_EQ(j["no_intervention"]["gap"].get<double>(), 0.684);
  EXPECT_EQ(j["no_intervention"]["receiver_view"], "proofread this article? thanks!");
  const nlohmann::json& top = j["alternatives"][0];
  EXPECT_EQ(top["text"], "btw , can you maybe proofread this article? thanks!");
  EXPECT_DOUBLE_EQ(top["gap"].get<double>(), 0.001);
  EXPECT_EQ(j["original"]["s_in"], StrategiesJson({"Subjunctive", "Please", "Gratitude"}, Lex()));
}

TEST(ServiceGoldenTest, AlternativesSortedByGap) {
  Service service(ServiceConfig{});
  nlohmann::json j = Body(service.Handle("POST", "/v1/paraphrase", GoldenCases()[2].request.dump()));
  const auto& alts = j["alternatives"];
  ASSERT_GE(alts.size(), 1u);
  EXPECT_LE(alts.size(), 3u);
  for (std::size_t i = 1; i < alts.size(); ++i) {
    EXPECT_LE(alts[i - 1]["gap"].get<double>(), alts[i]["gap"].get<double>());
  }
  for (const auto& a : alts) {
    EXPECT_EQ(std::string(a["text"]).find("btw"), std::string::npos);
  }
}

TEST(ServiceTest, HealthStrategiesProfiles) {
  Service service(ServiceConfig{});
  nlohmann::json health = Body(service.Handle("GET", "/v1/health", ""));
  EXPECT_EQ(health["status"], "ok");
  EXPECT_EQ(health["lexicon_version"], Lex().version());
  nlohmann::json strategies = Body(service.Handle("GET", "/v1/strategies", ""));
  EXPECT_EQ(strategies["strategies"].size(), 18u);
  nlohmann::json profiles = Body(service.Handle("GET", "/v1/profiles", ""));
  EXPECT_EQ(profiles["models"], nlohmann::json({"table-a1"}));
  EXPECT_EQ(profiles["channels"], nlohmann::json({"all-safe", "experiment-a"}));
  EXPECT_EQ(profiles["retrieval"], false);
}

TEST(ServiceTest, ExtractPerceivePlanProfile) {
  Service service(ServiceConfig{});
  nlohmann::json ex = Body(service.Handle("POST", "/v1/extract", R"({"message": "could you please check? thanks"})"));
  EXPECT_EQ(ex["strategies"], StrategiesJson({"Subjunctive", "Please", "Gratitude"}, Lex()));
  EXPECT_EQ(ex["occurrences"].size(), 3u);

  nlohmann::json per =
      Body(service.Handle("POST", "/v1/perceive", R"({"strategies": ["Gratitude", "Please"], "model": "table-a1"})"));
  EXPECT_DOUBLE_EQ(per["level"].get<double>(), 1.219);
  EXPECT_EQ(per["polarity"], "positive");

  nlohmann::json plan = Body(service.Handle(
      "POST", "/v1/plan",
      R"({"strategies": ["Subjunctive", "Please", "Gratitude"], "channel": "experiment-a", "method": "oracle"})"));
  EXPECT_EQ(plan["method"], "oracle");
  EXPECT_DOUBLE_EQ(plan["gap"].get<double>(), 0.001);

  nlohmann::json profile = Body(service.Handle(
      "POST", "/v1/channel/profile",
      R"({"pairs": [{"original": "please check.", "round_trip": "check."},
                    {"original": "thanks!", "round_trip": "thanks!"}]})"));
  EXPECT_EQ(profile["at_risk"], nlohmann::json({"Please.Start"}));
}

TEST(ServiceTest, Errors) {
  Service service(ServiceConfig{});
  HttpResult unknown = service.Handle("POST", "/v1/plan", R"({"strategies": [], "receiver": "nobody"})");
  EXPECT_EQ(unknown.status, 404);
  nlohmann::json j = Body(unknown);
  EXPECT_EQ(j["code"], "unknown_profile");
  EXPECT_EQ(j["detail"]["name"], "nobody");
  EXPECT_TRUE(j.contains("message"));

  HttpResult infeasible = service.Handle(
      "POST", "/v1/plan",
      R"({"strategies": ["Gratitude"], "channel": "experiment-a", "options": {"required": ["Please"]}})");
  EXPECT_EQ(infeasible.status, 422);
  EXPECT_EQ(Body(infeasible)["code"], "infeasible");

  EXPECT_EQ(service.Handle("POST", "/v1/extract", "{nope").status, 400);
  EXPECT_EQ(Body(service.Handle("POST", "/v1/extract", "{}"))["code"], "validation_error");
  EXPECT_EQ(service.Handle("GET", "/v2/whatever", "").status, 404);
  EXPECT_EQ(service.Handle("GET", "/v1/plan", "").status, 405);
  EXPECT_EQ(Body(service.Handle("POST", "/v1/plan", R"({"strategies": ["Sarcasm"]})"))["code"], "unknown_strategy");
  EXPECT_EQ(service.Handle("POST", "/v1/plan", R"({"strategies": [], "method": "magic"})").status, 400);
  HttpResult no_corpus = service.Handle("POST", "/v1/plan", R"({"message": "hi", "method": "retrieval"})");
  EXPECT_EQ(no_corpus.status, 400);
}

std::filesystem::path TempDir(const std::string& name) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(ServiceTest, ConfigRetrievalAndReload) {
  std::filesystem::path dir = TempDir("tactful_service_cfg");
  PerceptionModel harsh = TableA1Model();
  harsh.coefficients["Gratitude"] = 0.2;
  SaveModel(harsh, (dir / "harsh.json").string());
  WriteFile((dir / "corpus.jsonl").string(),
            SerializeCorpus({{"1", "can you fix the link? thanks!"}, {"2", "hello , could you check the page?"}}));
  WriteFile((dir / "service.json").string(),
            R"({"models": {"harsh": "harsh.json"}, "retrieval_corpus": "corpus.jsonl",
                "bind": {"host": "127.0.0.1", "port": 0}})");
  Service service(LoadServiceConfig((dir / "service.json").string()));
  nlohmann::json profiles = Body(service.Handle("GET", "/v1/profiles", ""));
  EXPECT_EQ(profiles["models"], nlohmann::json({"harsh", "table-a1"}));
  EXPECT_EQ(profiles["retrieval"], true);
  HttpResult retrieval = service.Handle(
      "POST", "/v1/plan", R"({"message": "could you please fix the link?", "method": "retrieval"})");
  ASSERT_EQ(retrieval.status, 200) << retrieval.body;
  EXPECT_EQ(Body(retrieval)["method"], "retrieval");

  WriteFile((dir / "service.json").string(), R"({"models": {"other": "harsh.json"}})");
  EXPECT_EQ(service.Handle("POST", "/v1/admin/reload", "").status, 200);
  profiles = Body(service.Handle("GET", "/v1/profiles", ""));
  EXPECT_EQ(profiles["models"], nlohmann::json({"other", "table-a1"}));

  // A broken config keeps the previous registry.
  WriteFile((dir / "service.json").string(), R"({"models": {"bad": "missing.json"}})");
  EXPECT_NE(service.Handle("POST", "/v1/admin/reload", "").status, 200);
  profiles = Body(service.Handle("GET", "/v1/profiles", ""));
  EXPECT_EQ(profiles["models"], nlohmann::json({"other", "table-a1"}));
  std::filesystem::remove_all(dir);
}

TEST(ServiceTest, ConfigValidation) {
  EXPECT_THROW(ParseServiceConfig(nlohmann::json{{"colour", 1}}), Error);
  EXPECT_THROW(ParseServiceConfig(nlohmann::json{{"bind", {{"port", 70000}}}}), Error);
  ServiceConfig c;
  c.models["x"] = "builtin:nope";
  EXPECT_THROW(Service{c}, Error);
}

TEST(ServiceHttpTest, RealServerGoldenAndConcurrent) {
  Service service(ServiceConfig{});
  HttpServer server(service);
  int port = server.Bind("127.0.0.1", 0);
  server.Start();
  httplib::Client client("127.0.0.1", port);

  auto health = client.Get("/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);

  for (const GoldenCase& c : GoldenCases()) {
    auto res = client.Post("/v1/paraphrase", c.request.dump(), "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, service.Handle("POST", "/v1/paraphrase", c.request.dump()).body);
  }

  auto missing = client.Post("/v1/plan", R"({"strategies": [], "sender": "ghost"})", "application/json");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(nlohmann::json::parse(missing->body)["code"], "unknown_profile");

  const std::string request = GoldenCases()[0].request.dump();
  std::vector<std::string> bodies(8);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    threads.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", port);
      auto res = c.Post("/v1/paraphrase", request, "application/json");
      if (res) bodies[i] = res->body;
    });
  }
  for (std::thread& t : threads) t.join();
  for (const std::string& b : bodies) EXPECT_EQ(b, bodies[0]);
  EXPECT_FALSE(bodies[0].empty());
  server.Stop();
}

TEST(ServiceHttpTest, BindFailure) {
  Service service(ServiceConfig{});
  HttpServer server(service);
  EXPECT_THROW(server.Bind("999.999.999.999", 0), Error);
}

}  // namespace
}  // namespace tactful
