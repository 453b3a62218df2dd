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

#pragma once

namespace tactful {

// Compiled-in copy of data/lexicon.json. Bump the version tag on any edit.
inline constexpr const char kDefaultLexiconJson[] = R"lexicon({
  "version": "tactful-lexicon/1",
  "strategies": [
    {"id": "Actually", "delete_mode": "token",
     "markers": [{"tokens": ["really"]}, {"tokens": ["actually"]}],
     "templates": [{"anchor": "before_main_verb_phrase", "text": "actually"},
                   {"anchor": "sentence_start", "text": "actually ,"}]},
    {"id": "Adverb.Just", "delete_mode": "token",
     "markers": [{"tokens": ["just"]}],
     "templates": [{"anchor": "before_main_verb_phrase", "text": "just"},
                   {"anchor": "sentence_start", "text": "just"}]},
    {"id": "Affirmation", "delete_mode": "segment",
     "markers": [{"tokens": ["ok"]}, {"tokens": ["okay"]}, {"tokens": ["good", "[work]"]},
                 {"tokens": ["excellent"]}, {"tokens": ["great", "work"]},
                 {"tokens": ["nice", "work"]}, {"tokens": ["well", "done"]}],
     "templates": [{"anchor": "message_start", "text": "ok ,"},
                   {"anchor": "message_end", "text": "good point ."}]},
    {"id": "Apology", "delete_mode": "segment",
     "markers": [{"tokens": ["sorry"]}, {"tokens": ["[i]", "apologize"]},
                 {"tokens": ["apologies"]}],
     "templates": [{"anchor": "message_start", "text": "sorry ,"},
                   {"anchor": "message_start", "text": "sorry to bother you ,"},
                   {"anchor": "message_end", "text": "sorry ."}]},
    {"id": "By.The.Way", "delete_mode": "token",
     "markers": [{"tokens": ["by", "the", "way"]}, {"tokens": ["btw"]}],
     "templates": [{"anchor": "message_start", "text": "btw ,"},
                   {"anchor": "message_start", "text": "by the way ,"}]},
    {"id": "Conj.Start", "delete_mode": "token",
     "markers": [{"tokens": ["so"], "anchor": "sentence_start"},
                 {"tokens": ["and"], "anchor": "sentence_start"},
                 {"tokens": ["but"], "anchor": "sentence_start"},
                 {"tokens": ["or"], "anchor": "sentence_start"}],
     "templates": [{"anchor": "sentence_start", "text": "so"},
                   {"anchor": "sentence_start", "text": "and"}]},
    {"id": "Filler", "delete_mode": "token",
     "markers": [{"tokens": ["hmm"]}, {"tokens": ["hmmm"]}, {"tokens": ["um"]},
                 {"tokens": ["umm"]}, {"tokens": ["uh"]}, {"tokens": ["uhm"]}],
     "templates": [{"anchor": "message_start", "text": "um ,"},
                   {"anchor": "message_start", "text": "hmm ,"}]},
    {"id": "For.Me", "delete_mode": "token",
     "markers": [{"tokens": ["for", "me"]}],
     "templates": [{"anchor": "sentence_end", "text": "for me"}]},
    {"id": "For.You", "delete_mode": "token",
     "markers": [{"tokens": ["for", "you"]}],
     "templates": [{"anchor": "sentence_end", "text": "for you"}]},
    {"id": "Gratitude", "delete_mode": "segment",
     "markers": [{"tokens": ["thanks"]}, {"tokens": ["thank", "you"]},
                 {"tokens": ["[i]", "appreciate"]}],
     "templates": [{"anchor": "message_end", "text": "thanks ."},
                   {"anchor": "message_end", "text": "thank you !"},
                   {"anchor": "message_start", "text": "thanks ,"}]},
    {"id": "Greeting", "delete_mode": "token",
     "markers": [{"tokens": ["hi"]}, {"tokens": ["hello"]}, {"tokens": ["hey"]}],
     "templates": [{"anchor": "message_start", "text": "hi ,"},
                   {"anchor": "message_start", "text": "hello ,"}]},
    {"id": "Hedges", "delete_mode": "token",
     "markers": [{"tokens": ["possibly"]}, {"tokens": ["maybe"]}, {"tokens": ["perhaps"]},
                 {"tokens": ["probably"]}, {"tokens": ["i", "think"]},
                 {"tokens": ["i", "guess"]}, {"tokens": ["i", "suppose"]}],
     "templates": [{"anchor": "before_main_verb_phrase", "text": "maybe"},
                   {"anchor": "sentence_start", "text": "perhaps"}]},
    {"id": "Indicative", "delete_mode": "token",
     "markers": [{"tokens": ["can", "you"]}, {"tokens": ["will", "you"]}],
     "templates": [{"anchor": "sentence_start", "text": "can you"},
                   {"anchor": "sentence_start", "text": "will you"}]},
    {"id": "Please", "delete_mode": "token",
     "markers": [{"tokens": ["please"], "anchor": "non_initial"}],
     "templates": [{"anchor": "before_main_verb_phrase", "text": "please"},
                   {"anchor": "sentence_end", "text": ", please"}]},
    {"id": "Please.Start", "delete_mode": "token",
     "markers": [{"tokens": ["please"], "anchor": "sentence_start"}],
     "templates": [{"anchor": "sentence_start", "text": "please"}]},
    {"id": "Reassurance", "delete_mode": "segment",
     "markers": [{"tokens": ["no", "worries"]}, {"tokens": ["no", "problem"]},
                 {"tokens": ["not", "a", "problem"]}, {"tokens": ["don't", "worry"]}],
     "templates": [{"anchor": "message_end", "text": "no worries ."},
                   {"anchor": "message_start", "text": "no problem ,"}]},
    {"id": "Subjunctive", "delete_mode": "token",
     "markers": [{"tokens": ["could", "you"]}, {"tokens": ["would", "you"]}],
     "templates": [{"anchor": "sentence_start", "text": "could you"},
                   {"anchor": "sentence_start", "text": "would you"}]},
    {"id": "Swearing", "delete_mode": "token",
     "markers": [{"tokens": ["the", "hell"]}, {"tokens": ["the", "heck"]},
                 {"tokens": ["fucking"]}, {"tokens": ["fuck"]}, {"tokens": ["damn"]},
                 {"tokens": ["wtf"]}],
     "templates": [{"anchor": "message_start", "text": "damn ,"},
                   {"anchor": "before_main_verb_phrase", "text": "the hell"}]}
  ]
})lexicon";

}  // namespace tactful
