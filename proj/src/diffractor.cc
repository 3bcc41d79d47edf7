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

#include "diffractor/diffractor.h"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "diffractor/tokenizer.h"

namespace diffractor {

std::string_view BankTagName(BankTag tag) {
  switch (tag) {
    case BankTag::kL0:
      return "L0";
    case BankTag::kL1:
      return "L1";
    case BankTag::kL2:
      return "L2";
    case BankTag::kCustom:
      return "custom";
  }
  return "custom";
}

std::optional<BankTag> ParseBankTag(std::string_view name) {
  if (name == "L0") return BankTag::kL0;
  if (name == "L1") return BankTag::kL1;
  if (name == "L2") return BankTag::kL2;
  if (name == "custom") return BankTag::kCustom;
  return std::nullopt;
}

absl::StatusOr<ListBank> ListBank::Create(std::vector<WordList> lists,
                                          BankTag tag) {
  if (lists.empty()) {
    return absl::InvalidArgumentError("a list bank needs at least one list");
  }
  ListBank bank;
  bank.lists_ = std::move(lists);
  bank.tag_ = tag;
  return bank;
}

ListBank::Membership ListBank::Containing(std::string_view word) const {
  Membership out;
  for (std::size_t l = 0; l < lists_.size(); ++l) {
    if (std::optional<std::size_t> i = lists_[l].IndexOf(word)) {
      out.emplace_back(l, *i);
    }
  }
  return out;
}

bool ListBank::ContainsAnywhere(std::string_view word) const {
  return std::any_of(lists_.begin(), lists_.end(),
                     [&](const WordList& l) { return l.Contains(word); });
}

std::vector<std::string> ListBank::VocabularyUnion() const {
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  for (const WordList& l : lists_) {
    for (const std::string& w : l.words()) {
      if (seen.insert(w).second) out.push_back(w);
    }
  }
  return out;
}

absl::Status DiffractorConfig::Validate() const {
  if (absl::Status s = mechanism.Validate(); !s.ok()) return s;
  if (bank == nullptr || bank->size() == 0) {
    return absl::InvalidArgumentError("no word lists configured");
  }
  return absl::OkStatus();
}

PerturbationRecord PerturbWord(std::string_view word,
                               const DiffractorConfig& cfg, Rng& rng) {
  PerturbationRecord record;
  record.original = std::string(word);

  const ListBank& bank = *cfg.bank;
  ListBank::Membership members;
  if (cfg.case_policy == CasePolicy::kPreserveAttempt) {
    members = bank.Containing(word);
  }
  if (members.empty()) members = bank.Containing(AsciiLower(word));

  if (members.empty()) {
    record.was_oov = true;
    if (cfg.oov_policy == OovPolicy::kPassthrough) record.output = record.original;
    return record;
  }

  absl::InlinedVector<const std::string*, 12> outputs;
  for (const auto& [l, index] : members) {
    const WordList& list = bank.list(l);
    const std::size_t noisy =
        PerturbIndex(cfg.mechanism, index, list.size(), rng).value();
    outputs.push_back(&list.WordAt(noisy));
  }
  const std::size_t pick =
      outputs.size() == 1
          ? 0
          : static_cast<std::size_t>(UniformIndex(rng, outputs.size()));

  record.output = *outputs[pick];
  record.chosen_list = members[pick].first;
  record.lists_considered = members.size();
  if (cfg.debug_candidates) {
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      record.candidates.push_back({members[i].first, *outputs[i]});
    }
  }
  return record;
}

TextPerturbation PerturbText(std::string_view text,
                             const DiffractorConfig& cfg, Rng& rng) {
  TextPerturbation result;
  const std::vector<Token> tokens = Tokenize(text);
  result.records.reserve(tokens.size());
  for (const Token& token : tokens) {
    PerturbationRecord record;
    if (token.is_word) {
      record = PerturbWord(token.text, cfg, rng);
    } else {
      record.original = std::string(token.text);
      record.output = record.original;
      record.is_word = false;
    }
    if (!record.output.empty()) {
      if (!result.text.empty()) result.text.push_back(' ');
      result.text += record.output;
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

absl::StatusOr<std::size_t> MaxIndexDistance(std::string_view a,
                                             std::string_view b,
                                             const ListBank& bank) {
  std::optional<std::size_t> best;
  for (const WordList& list : bank.lists()) {
    std::optional<std::size_t> ia = list.IndexOf(a);
    std::optional<std::size_t> ib = list.IndexOf(b);
    if (!ia || !ib) continue;
    const std::size_t d = *ia > *ib ? *ia - *ib : *ib - *ia;
    best = std::max(best.value_or(0), d);
  }
  if (!best) {
    return absl::FailedPreconditionError("no list contains both '" +
                                         std::string(a) + "' and '" +
                                         std::string(b) + "'");
  }
  return *best;
}

absl::StatusOr<std::size_t> SentenceDistance(std::span<const std::string> a,
                                             std::span<const std::string> b,
                                             const ListBank& bank) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(
        "sentence distance needs equal lengths, got " +
        std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    absl::StatusOr<std::size_t> d = MaxIndexDistance(a[i], b[i], bank);
    if (!d.ok()) return d.status();
    total += *d;
  }
  return total;
}

}  // namespace diffractor
