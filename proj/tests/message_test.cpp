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

#include "tactful/message.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

namespace tactful {
namespace {

std::vector<std::string> Lowers(const Message& m) {
  std::vector<std::string> out;
  for (const Token& t : m.tokens()) out.push_back(t.lower);
  return out;
}

TEST(MessageTest, TwoQuestionsAreTwoSentences) {
  Message m("Could you check? Thanks!");
  EXPECT_EQ(m.sentences().size(), 2u);
  EXPECT_EQ(m.segments().size(), 2u);
  EXPECT_EQ(Lowers(m), (std::vector<std::string>{"could", "you", "check", "?", "thanks", "!"}));
}

TEST(MessageTest, CommaSplitsSegmentsNotSentences) {
  Message m("sorry to be off-topic, but ...");
  EXPECT_EQ(m.sentences().size(), 1u);
  EXPECT_EQ(m.segments().size(), 2u);
  EXPECT_EQ(m.tokens()[3].text, "off-topic");
}

TEST(MessageTest, EmptyInput) {
  Message m("");
  EXPECT_TRUE(m.empty());
  EXPECT_EQ(m.sentences().size(), 0u);
  EXPECT_EQ(m.segments().size(), 0u);
  EXPECT_EQ(Message("   \n").sentences().size(), 0u);
}

TEST(MessageTest, TerminatorNeedsFollowingSpace) {
  EXPECT_EQ(Message("uh...ok...whatever...did you get it?").sentences().size(), 1u);
  EXPECT_EQ(Message("version 2.5 is out. try it").sentences().size(), 2u);
  EXPECT_EQ(Message("really?! yes").sentences().size(), 2u);
}

TEST(MessageTest, ContractionsAndCurlyApostrophes) {
  Message m("I don\xE2\x80\x99t know, don't ask");
  EXPECT_EQ(m.tokens()[1].text, "don\xE2\x80\x99t");
  EXPECT_EQ(m.tokens()[1].lower, "don't");
  EXPECT_EQ(m.tokens()[4].lower, "don't");
}

TEST(MessageTest, EmDashDelimitsSegments) {
  Message m("wait\xE2\x80\x94what is this? ok");
  EXPECT_EQ(m.sentences().size(), 2u);
  EXPECT_EQ(m.segments().size(), 3u);
  EXPECT_FALSE(m.tokens()[1].word);
}

TEST(MessageTest, SentenceInitialIsFirstToken) {
  Message m("please stop. if you continue, please leave");
  EXPECT_TRUE(m.IsSentenceInitial(0));
  EXPECT_FALSE(m.IsSentenceInitial(1));
  EXPECT_TRUE(m.IsSentenceInitial(3));
  EXPECT_FALSE(m.IsSentenceInitial(7));
}

// Every token index sits in exactly one sentence and one segment, and the
// token stream plus recorded gaps reproduces the input.
TEST(MessageTest, LosslessAndPartitionedOnRandomText) {
  const std::vector<std::string> alphabet = {
      "a", "b", "Z", "9", " ", " ", "  ", "\t", "\n", ".", "!", "?", ",", ";", ":", "-", "'",
      "\xE2\x80\x94", "\xE2\x80\xA6", "\xC3\xA9", "\xE2\x80\x99", "(", ")"};
  std::mt19937 rng(7);
  for (int iter = 0; iter < 2000; ++iter) {
    std::string raw;
    int len = std::uniform_int_distribution<int>(0, 40)(rng);
    for (int k = 0; k < len; ++k) {
      raw += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    }
    Message m(raw);
    ASSERT_EQ(m.Reconstruct(), raw);
    std::vector<int> sentence_hits(m.size(), 0), segment_hits(m.size(), 0);
    for (const TokenSpan& s : m.sentences()) {
      for (std::size_t i = s.begin; i < s.end; ++i) ++sentence_hits[i];
    }
    for (const TokenSpan& s : m.segments()) {
      for (std::size_t i = s.begin; i < s.end; ++i) ++segment_hits[i];
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      ASSERT_EQ(sentence_hits[i], 1) << raw;
      ASSERT_EQ(segment_hits[i], 1) << raw;
      ASSERT_TRUE(m.sentences()[m.sentence_of(i)].contains(i));
      ASSERT_TRUE(m.segments()[m.segment_of(i)].contains(i));
    }
  }
}

}  // namespace
}  // namespace tactful
