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

// Lossless tokenization with sentence and segment boundaries.
//
// Words are maximal runs of ASCII alphanumerics or non-ASCII code points,
// with ' - and U+2019 allowed between word characters ("don't", "off-topic").
// Every other visible character is a one-character punctuation token.
// A sentence ends after . ! ? or U+2026 when followed by whitespace or the
// end of input; a segment additionally ends after , ; : U+2014 or U+2013.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tactful {

struct Token {
  std::string text;   // exact bytes from the raw message
  std::string lower;  // ASCII-lowercased, curly apostrophe folded to '
  std::size_t begin = 0;
  std::size_t end = 0;
  bool word = false;
};

// Half-open token index range.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool operator==(const TokenSpan&) const = default;
};

namespace message_detail {

inline bool IsSpace(unsigned char c) { return std::isspace(c) != 0; }
inline bool IsAsciiWord(unsigned char c) { return std::isalnum(c) != 0; }

inline std::size_t Utf8Length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

inline bool StartsWith(std::string_view s, std::size_t pos, std::string_view p) {
  return s.substr(pos, p.size()) == p;
}

constexpr std::string_view kEmDash = "\xE2\x80\x94";
constexpr std::string_view kEnDash = "\xE2\x80\x93";
constexpr std::string_view kEllipsis = "\xE2\x80\xA6";
constexpr std::string_view kRightQuote = "\xE2\x80\x99";

// Multi-byte sequences that behave as punctuation rather than letters.
inline std::size_t PunctuationSequence(std::string_view s, std::size_t pos) {
  for (std::string_view p : {kEmDash, kEnDash, kEllipsis}) {
    if (StartsWith(s, pos, p)) return p.size();
  }
  return 0;
}

inline bool IsWordStart(std::string_view s, std::size_t pos) {
  auto c = static_cast<unsigned char>(s[pos]);
  if (c < 0x80) return IsAsciiWord(c);
  return PunctuationSequence(s, pos) == 0 && !StartsWith(s, pos, kRightQuote);
}

inline std::string Lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (StartsWith(text, i, kRightQuote)) {
      out.push_back('\'');
      i += kRightQuote.size();
      continue;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
    ++i;
  }
  return out;
}

inline bool IsSentenceTerminator(std::string_view t) {
  return t == "." || t == "!" || t == "?" || t == kEllipsis;
}

inline bool IsSegmentDelimiter(std::string_view t) {
  return t == "," || t == ";" || t == ":" || t == kEmDash || t == kEnDash;
}

}  // namespace message_detail

inline bool IsSentenceTerminator(std::string_view token) {
  return message_detail::IsSentenceTerminator(token);
}

inline bool IsSegmentDelimiter(std::string_view token) {
  return message_detail::IsSegmentDelimiter(token);
}

class Message {
 public:
  Message() = default;

  explicit Message(std::string raw) : raw_(std::move(raw)) {
    Tokenize();
    Split();
  }

  const std::string& raw() const { return raw_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<TokenSpan>& sentences() const { return sentences_; }
  const std::vector<TokenSpan>& segments() const { return segments_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  std::size_t sentence_of(std::size_t token) const { return sentence_of_[token]; }
  std::size_t segment_of(std::size_t token) const { return segment_of_[token]; }

  bool IsSentenceInitial(std::size_t token) const {
    return sentences_[sentence_of_[token]].begin == token;
  }

  // Whitespace preceding token i (for i == size(), the trailing whitespace).
  std::string_view GapBefore(std::size_t i) const {
    std::size_t from = i == 0 ? 0 : tokens_[i - 1].end;
    std::size_t to = i < tokens_.size() ? tokens_[i].begin : raw_.size();
    return std::string_view(raw_).substr(from, to - from);
  }

  // Concatenation of gaps and token texts; equals raw() by construction.
  std::string Reconstruct() const {
    std::string out;
    out.reserve(raw_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      out.append(GapBefore(i));
      out.append(tokens_[i].text);
    }
    out.append(GapBefore(tokens_.size()));
    return out;
  }

 private:
  void Tokenize() {
    using namespace message_detail;
    std::string_view s = raw_;
    std::size_t i = 0;
    while (i < s.size()) {
      auto c = static_cast<unsigned char>(s[i]);
      if (IsSpace(c)) {
        ++i;
        continue;
      }
      std::size_t start = i;
      if (IsWordStart(s, i)) {
        while (i < s.size()) {
          auto d = static_cast<unsigned char>(s[i]);
          if (d < 0x80 && IsAsciiWord(d)) {
            ++i;
          } else if (d >= 0x80 && IsWordStart(s, i)) {
            i += std::min(Utf8Length(d), s.size() - i);
          } else {
            std::size_t joiner = 0;
            if (d == '\'' || d == '-') joiner = 1;
            else if (StartsWith(s, i, kRightQuote)) joiner = kRightQuote.size();
            if (joiner != 0 && i + joiner < s.size() && IsWordStart(s, i + joiner)) {
              i += joiner;
            } else {
              break;
            }
          }
        }
        Push(start, i, true);
        continue;
      }
      std::size_t len = PunctuationSequence(s, i);
      if (len == 0) len = std::min(Utf8Length(c), s.size() - i);
      i += len;
      Push(start, i, false);
    }
  }

  void Push(std::size_t begin, std::size_t end, bool word) {
    Token t;
    t.text = raw_.substr(begin, end - begin);
    t.lower = message_detail::Lower(t.text);
    t.begin = begin;
    t.end = end;
    t.word = word;
    tokens_.push_back(std::move(t));
  }

  void Split() {
    using namespace message_detail;
    sentence_of_.assign(tokens_.size(), 0);
    segment_of_.assign(tokens_.size(), 0);
    std::size_t sentence_start = 0;
    std::size_t segment_start = 0;
    auto close_segment = [&](std::size_t end) {
      if (end > segment_start) {
        for (std::size_t k = segment_start; k < end; ++k) segment_of_[k] = segments_.size();
        segments_.push_back({segment_start, end});
      }
      segment_start = end;
    };
    auto close_sentence = [&](std::size_t end) {
      close_segment(end);
      if (end > sentence_start) {
        for (std::size_t k = sentence_start; k < end; ++k) sentence_of_[k] = sentences_.size();
        sentences_.push_back({sentence_start, end});
      }
      sentence_start = end;
    };
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (message_detail::IsSentenceTerminator(t.text)) {
        bool at_boundary = t.end == raw_.size() || IsSpace(static_cast<unsigned char>(raw_[t.end]));
        if (at_boundary) {
          close_sentence(i + 1);
          continue;
        }
      }
      if (message_detail::IsSegmentDelimiter(t.text)) close_segment(i + 1);
    }
    close_sentence(tokens_.size());
  }

  std::string raw_;
  std::vector<Token> tokens_;
  std::vector<TokenSpan> sentences_;
  std::vector<TokenSpan> segments_;
  std::vector<std::size_t> sentence_of_;
  std::vector<std::size_t> segment_of_;
};

inline Message Tokenize(std::string raw) { return Message(std::move(raw)); }

}  // namespace tactful
