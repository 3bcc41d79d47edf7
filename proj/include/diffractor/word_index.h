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

#ifndef DIFFRACTOR_WORD_INDEX_H_
#define DIFFRACTOR_WORD_INDEX_H_

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace diffractor {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

// token -> position, with lookups by string_view that do not allocate.
using WordIndex =
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>;

// ASCII case folding. Bytes outside ASCII are left untouched.
std::string AsciiLower(std::string_view s);

}  // namespace diffractor

#endif  // DIFFRACTOR_WORD_INDEX_H_
