// Copyright 2026 The LVW Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Shared tokenizer for the line-oriented text formats (.sc, .fm, .smx).
// Whitespace and "//" comments are dropped; every token keeps its 1-based
// position.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lvw/error.hpp"

namespace lvw::text {

enum class TokenKind { Ident, Punct, String, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is(std::string_view t) const {
    return kind != TokenKind::String && kind != TokenKind::End && text == t;
  }
};

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Multi-character punctuation is matched greedily before single characters.
inline std::vector<Token> tokenize(std::string_view src) {
  static constexpr std::string_view kMulti[] = {"->", "<<", ">>"};
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      tok.kind = TokenKind::Ident;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"') {
        throw SyntaxError(line, col, "unterminated string literal");
      }
      tok.kind = TokenKind::String;
      tok.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j - i + 1);
    } else {
      tok.kind = TokenKind::Punct;
      std::size_t len = 1;
      for (auto m : kMulti) {
        if (src.substr(i, m.size()) == m) {
          len = m.size();
          break;
        }
      }
      tok.text = std::string(src.substr(i, len));
      advance(len);
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = TokenKind::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

// Cursor over a token vector with the usual expect/accept helpers. Errors are
// raised as SyntaxError at the offending token.
class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  bool at_end() const { return peek().kind == TokenKind::End; }

  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  bool accept(std::string_view t) {
    if (peek().is(t)) {
      next();
      return true;
    }
    return false;
  }

  const Token& expect(std::string_view t) {
    if (!peek().is(t)) fail(peek(), "expected '" + std::string(t) + "'");
    return next();
  }

  const Token& expect_ident(std::string_view what = "identifier") {
    if (peek().kind != TokenKind::Ident) {
      fail(peek(), "expected " + std::string(what));
    }
    return next();
  }

  const Token& expect_string() {
    if (peek().kind != TokenKind::String) fail(peek(), "expected string");
    return next();
  }

  [[noreturn]] static void fail(const Token& at, const std::string& message) {
    std::string found = at.kind == TokenKind::End ? "end of input"
                                                  : "'" + at.text + "'";
    throw SyntaxError(at.line, at.column, message + ", found " + found);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace lvw::text
