//
// Copyright 2026 The Diffractor Authors
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
//

#include "diffractor/tokenizer.h"

namespace diffractor {
namespace {

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

bool IsPunct(unsigned char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

bool IsWordish(std::string_view s) {
  for (unsigned char c : s) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80) {
      return true;
    }
  }
  return false;
}

void EmitChunk(std::string_view chunk, std::vector<Token>& out) {
  std::size_t b = 0;
  std::size_t e = chunk.size();
  while (b < e && IsPunct(static_cast<unsigned char>(chunk[b]))) {
    out.push_back({chunk.substr(b, 1), false});
    ++b;
  }
  std::size_t trailing_start = e;
  while (trailing_start > b &&
         IsPunct(static_cast<unsigned char>(chunk[trailing_start - 1]))) {
    --trailing_start;
  }
  if (trailing_start > b) {
    std::string_view core = chunk.substr(b, trailing_start - b);
    out.push_back({core, IsWordish(core)});
  }
  for (std::size_t i = trailing_start; i < e; ++i) {
    out.push_back({chunk.substr(i, 1), false});
  }
}

}  // namespace

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !IsSpace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) EmitChunk(text.substr(start, i - start), tokens);
  }
  return tokens;
}

}  // namespace diffractor
