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

#ifndef DIFFRACTOR_TOKENIZER_H_
#define DIFFRACTOR_TOKENIZER_H_

#include <string_view>
#include <vector>

namespace diffractor {

struct Token {
  std::string_view text;
  // False for punctuation and numbers, which are never perturbed.
  bool is_word;
};

// Splits on whitespace, then peels leading and trailing ASCII punctuation off
// each chunk as one-character tokens: "(hello," -> "(", "hello", ",".
// Inner punctuation stays attached ("don't", "3.14"). A token is a word when
// it holds a letter or any non-ASCII byte. Views point into `text`.
std::vector<Token> Tokenize(std::string_view text);

}  // namespace diffractor

#endif  // DIFFRACTOR_TOKENIZER_H_
