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

#include "tactful/channel.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "tactful/edit.hpp"
#include "tactful/translator.hpp"
#include "test_fixtures.hpp"

namespace tactful {
namespace {

const StrategyLexicon& Lex() { return DefaultLexicon(); }

StrategySet Extract(const std::string& text) { return ExtractStrategies(text, Lex()).strategies; }

std::string Delete(const std::string& text, const StrategySet& keep) {
  return DeleteMarkers(Message(text), keep, Lex()).message.raw();
}

// Ten pairs; "please" appears in eight originals and survives in two.
std::vector<RoundTripPair> PleaseFixture() {
  std::vector<RoundTripPair> pairs;
  for (int i = 0; i < 8; ++i) {
    std::string clause = "check section " + std::to_string(i) + " ?";
    pairs.push_back({"can you please " + clause, i < 6 ? "can you " + clause : "can you please " + clause});
  }
  pairs.push_back({"the table is broken .", "the table is broken ."});
  pairs.push_back({"thanks !", "thanks !"});
  return pairs;
}

TEST(ChannelTest, ProfilerFlagsLossyStrategy) {
  ChannelProfile p = ProfileChannel(PleaseFixture(), Lex());
  EXPECT_FALSE(p.spec.IsSafe("Please"));
  EXPECT_EQ(p.support.at("Please").supporting, 8u);
  EXPECT_EQ(p.support.at("Please").lost, 6u);
  EXPECT_DOUBLE_EQ(p.support.at("Please").loss_rate, 0.75);
  EXPECT_TRUE(p.spec.IsSafe("Indicative"));
  EXPECT_TRUE(p.spec.IsSafe("Gratitude"));
  EXPECT_EQ(p.spec.AtRisk(), StrategySet{"Please"});
}

TEST(ChannelTest, IdentityPairsAreAllSafe) {
  std::vector<RoundTripPair> pairs;
  for (const std::string& t : testing_fixtures::GeneratedMessages(50, 2)) pairs.push_back({t, t});
  ChannelProfile p = ProfileChannel(pairs, Lex());
  EXPECT_TRUE(p.spec.AtRisk().empty());
  EXPECT_TRUE(p.spec.covers(Lex()));
}

TEST(ChannelTest, ThresholdIsStrict) {
  std::vector<RoundTripPair> pairs = {{"thanks !", "ok ."}, {"thanks !", "thanks !"}};
  EXPECT_TRUE(ProfileChannel(pairs, Lex(), 0.5).spec.IsSafe("Gratitude"));
  EXPECT_FALSE(ProfileChannel(pairs, Lex(), 0.4).spec.IsSafe("Gratitude"));
}

TEST(ChannelTest, UnsupportedStrategiesDefaultSafeAndAreListed) {
  ChannelProfile p = ProfileChannel({{"thanks !", "thanks !"}}, Lex());
  EXPECT_TRUE(p.spec.IsSafe("Swearing"));
  EXPECT_EQ(p.unsupported.size(), Lex().size() - 1);
  EXPECT_EQ(std::count(p.unsupported.begin(), p.unsupported.end(), "Gratitude"), 0);
}

TEST(ChannelTest, EmptyPairsAreRejected) {
  try {
    ProfileChannel({}, Lex());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
}

TEST(ChannelTest, ExperimentAChannel) {
  ChannelSpec c = ExperimentAChannel(Lex());
  EXPECT_EQ(c.AtRisk(), (StrategySet{"Subjunctive", "Please", "Filler", "Swearing"}));
  EXPECT_EQ(c.Safe().size(), 14u);
  EXPECT_THROW(c.IsSafe("Sarcasm"), Error);
  EXPECT_THROW(ChannelWithAtRisk(Lex(), {"Sarcasm"}, "x"), Error);
}

TEST(ChannelTest, SimulateDropsAtRiskMarkers) {
  Message out = SimulateChannel(Message("could you please check? thanks!"), ExperimentAChannel(Lex()), Lex());
  EXPECT_EQ(out.raw(), "check? thanks!");
  EXPECT_EQ(Extract(out.raw()), StrategySet{"Gratitude"});
  Message same("can you check? thanks!");
  EXPECT_EQ(SimulateChannel(same, ExperimentAChannel(Lex()), Lex()).raw(), same.raw());
}

TEST(ChannelTest, SimulationLeavesOnlySafeStrategiesAndIsIdempotent) {
  const ChannelSpec c = ExperimentAChannel(Lex());
  for (const std::string& text : testing_fixtures::GeneratedMessages(300, 21)) {
    Message once = SimulateChannel(Message(text), c, Lex());
    StrategySet after = Extract(once.raw());
    for (const StrategyId& s : after) EXPECT_TRUE(c.IsSafe(s)) << text << " -> " << once.raw();
    StrategySet before = Extract(text);
    for (const StrategyId& s : before) {
      if (c.IsSafe(s)) EXPECT_TRUE(after.count(s)) << s << ": " << text << " -> " << once.raw();
    }
    EXPECT_EQ(SimulateChannel(once, c, Lex()).raw(), once.raw());
  }
}

TEST(DeleteTest, TokenModeRemovesOnlyTheMarker) {
  EXPECT_EQ(Delete("can you please explain?", {"Indicative"}), "can you explain?");
  // Dropping "could you" would make "please" sentence-initial, which reads as
  // Please.Start; that is not kept either, so it goes too.
  EXPECT_EQ(Delete("could you please check it?", {"Please"}), "check it?");
  EXPECT_EQ(Delete("so where is the article?", {}), "where is the article?");
  EXPECT_EQ(Delete("So where is the article?", {}), "Where is the article?");
}

TEST(DeleteTest, SegmentModeRemovesTheClause) {
  EXPECT_EQ(Delete("thanks for your help, i will try again.", {}), "i will try again.");
  EXPECT_EQ(Delete("sorry to be off-topic, but where is it?", {"Conj.Start"}), "but where is it?");
  EXPECT_EQ(Delete("fix the link. thanks!", {}), "fix the link.");
  EXPECT_EQ(Delete("fix the link, thank you.", {}), "fix the link.");
}

TEST(DeleteTest, DeletionIsSound) {
  for (const std::string& text : testing_fixtures::GeneratedMessages(300, 8)) {
    StrategySet in = Extract(text);
    std::vector<StrategyId> ordered = Lex().Ordered(in);
    // Keep every other strategy.
    StrategySet keep;
    for (std::size_t i = 0; i < ordered.size(); i += 2) keep.insert(ordered[i]);
    PostDeletionContext ctx = DeleteMarkers(Message(text), keep, Lex());
    StrategySet out = Extract(ctx.message.raw());
    for (const StrategyId& s : out) EXPECT_TRUE(keep.count(s)) << text << " -> " << ctx.message.raw();
    for (const RemovedSpan& r : ctx.removed) EXPECT_FALSE(keep.count(r.strategy));
  }
}

TEST(ChannelTest, FileRoundTrip) {
  ChannelProfile p = ProfileChannel(PleaseFixture(), Lex(), 0.5, "fixture");
  ChannelSpec back = ChannelFromJson(nlohmann::json::parse(ToJson(p.spec).dump()));
  EXPECT_EQ(back.safety, p.spec.safety);
  EXPECT_EQ(back.label, "fixture");
  ValidateChannel(back, Lex());
  ChannelSpec partial = back;
  partial.safety.erase("Please");
  EXPECT_THROW(ValidateChannel(partial, Lex()), Error);
  nlohmann::json bools = {{"safety", {{"Please", false}, {"Gratitude", true}}}};
  ChannelSpec b = ChannelFromJson(bools);
  EXPECT_FALSE(b.safety.at("Please"));
  EXPECT_TRUE(b.safety.at("Gratitude"));
  EXPECT_THROW(ChannelFromJson(nlohmann::json{{"safety", {{"Please", 2}}}}), Error);
}

TEST(ChannelTest, PairFileRoundTrip) {
  std::vector<RoundTripPair> pairs = PleaseFixture();
  std::vector<RoundTripPair> back = ParsePairs(SerializePairs(pairs));
  ASSERT_EQ(back.size(), pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(back[i].original, pairs[i].original);
    EXPECT_EQ(back[i].round_trip, pairs[i].round_trip);
  }
  EXPECT_THROW(ParsePairs("{\"original\": \"x\"}\n"), Error);
}

TEST(FetchTest, OfflineClientPreservesOrderAndReportsMisses) {
  std::vector<RoundTripPair> pairs = PleaseFixture();
  OfflinePairClient client(pairs);
  std::vector<std::string> utterances;
  for (const auto& p : pairs) utterances.push_back(p.original);
  utterances.insert(utterances.begin() + 3, "not recorded");
  FetchReport report = FetchRoundTrips(utterances, client, 4);
  ASSERT_EQ(report.pairs.size(), pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(report.pairs[i].original, pairs[i].original);
    EXPECT_EQ(report.pairs[i].round_trip, pairs[i].round_trip);
  }
  ASSERT_EQ(report.failures.size(), 1u);
  EXPECT_EQ(report.failures[0].index, 3u);
  EXPECT_EQ(report.failures[0].utterance, "not recorded");
}

TEST(FetchTest, HttpClientAgainstLocalTranslator) {
  httplib::Server server;
  server.Post("/translate", [](const httplib::Request& req, httplib::Response& res) {
    if (req.get_header_value("Authorization") != "Bearer k") {
      res.status = 401;
      return;
    }
    auto body = nlohmann::json::parse(req.body);
    std::string text = body.at("text");
    if (text.find("slow") != std::string::npos) std::this_thread::sleep_for(std::chrono::milliseconds(1500));
    if (text.find("broken") != std::string::npos) {
      res.status = 500;
      return;
    }
    // The pivot hop tags the text; the return hop drops "please".
    if (body.at("to") == "zh") {
      text = "[zh] " + text;
    } else {
      text = text.substr(5);
      for (auto pos = text.find("please "); pos != std::string::npos; pos = text.find("please ")) {
        text.erase(pos, 7);
      }
    }
    res.set_content(nlohmann::json{{"translation", text}}.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpTranslatorConfig config;
  config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/translate";
  config.api_key = "k";
  config.timeout_seconds = 0.5;
  HttpTranslatorClient client(config);
  FetchReport report =
      FetchRoundTrips({"can you please check ?", "broken input", "slow input", "thanks !"}, client, 3);
  ASSERT_EQ(report.pairs.size(), 2u);
  EXPECT_EQ(report.pairs[0].round_trip, "can you check ?");
  EXPECT_EQ(report.pairs[1].round_trip, "thanks !");
  ASSERT_EQ(report.failures.size(), 2u);
  EXPECT_EQ(report.failures[0].index, 1u);
  EXPECT_NE(report.failures[0].message.find("500"), std::string::npos);
  EXPECT_EQ(report.failures[1].index, 2u);

  config.api_key = "wrong";
  HttpTranslatorClient unauthorized(config);
  EXPECT_THROW(unauthorized.RoundTrip("thanks"), Error);

  server.stop();
  th.join();
}

TEST(FetchTest, MissingEndpointIsConfigError) {
  try {
    HttpTranslatorClient client(HttpTranslatorConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

}  // namespace
}  // namespace tactful
