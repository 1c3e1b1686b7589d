// Copyright 2026 The ctxbias Authors. All Rights Reserved.
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

#ifndef CTXBIAS_BIASING_H_
#define CTXBIAS_BIASING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctxbias/lattice.h"
#include "ctxbias/text_util.h"

namespace ctxbias {

/// Discount applied when none is given.
inline constexpr double kDefaultDiscount = 2.0;
/// Discount that worked best on real ATC data; a good starting point for sweeps.
inline constexpr double kRecommendedDiscount = 5.0;

/// Deduplicated set of boosted n-grams, kept in insertion order.
class PhraseSet {
 public:
  PhraseSet() = default;

  /// Returns false when `phrase` was already present. Throws InputError on an
  /// empty phrase or an empty token.
  bool Add(Tokens phrase);

  const std::vector<Tokens>& phrases() const { return phrases_; }
  std::size_t size() const { return phrases_.size(); }
  bool empty() const { return phrases_.empty(); }
  bool Contains(const Tokens& phrase) const { return index_.count(phrase) != 0; }
  std::size_t TotalLength() const;

 private:
  std::vector<Tokens> phrases_;
  std::set<Tokens> index_;
};

/// All contiguous sub-sequences of every phrase with length in
/// [min_order, max_order]; `max_order` unset means each phrase's full length.
PhraseSet CollectNgrams(const std::vector<Tokens>& phrases,
                        std::size_t min_order = 1,
                        std::optional<std::size_t> max_order = std::nullopt);

struct SequenceScore {
  std::size_t occurrences = 0;
  double bonus = 0.0;
};

/// Aho-Corasick matcher over word tokens. Every time a boosted n-gram ends
/// at the current word (including overlapping and suffix matches) the path
/// earns a flat -discount.
class BiasingAutomaton {
 public:
  using State = std::int32_t;
  static constexpr State kRoot = 0;

  BiasingAutomaton(const PhraseSet& phrases, double discount);

  double discount() const { return discount_; }
  std::size_t num_states() const { return fail_.size(); }

  /// Trie edge only; nullopt when (state, word) has no goto transition.
  std::optional<State> Goto(State state, const std::string& word) const;
  /// Total transition function: follows failure links, unknown words go to
  /// the root.
  State Next(State state, const std::string& word) const;

  State Fail(State state) const { return fail_[state]; }
  std::size_t Depth(State state) const { return depth_[state]; }
  /// Number of phrases that are suffixes of the word string spelled by `state`.
  std::size_t OutCount(State state) const { return out_count_[state]; }
  /// Whether the string spelled by `state` is itself a phrase.
  bool IsPhrase(State state) const { return terminal_[state]; }

  /// Graph-cost change for entering `state`.
  double Bonus(State state) const;

  SequenceScore Score(const Tokens& words) const;

  /// Debug dump: `src dst token weight` per trie edge, then `FAIL src dst`.
  std::string Dump() const;

 private:
  using TokenId = std::int32_t;

  TokenId Lookup(const std::string& word) const;

  double discount_;
  std::unordered_map<std::string, TokenId> vocab_;
  std::vector<std::string> words_;
  std::vector<std::unordered_map<TokenId, State>> goto_;
  std::vector<State> fail_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> out_count_;
  std::vector<char> terminal_;
};

inline BiasingAutomaton BuildMatcher(const PhraseSet& phrases, double discount) {
  return BiasingAutomaton(phrases, discount);
}

inline SequenceScore ScoreSequence(const BiasingAutomaton& automaton,
                                   const Tokens& words) {
  return automaton.Score(words);
}

/// Composes `lattice` with `automaton`: states are reachable
/// (lattice state, automaton state) pairs, each arc's graph cost drops by
/// the bonus of the automaton state it enters, acoustic costs are untouched,
/// and finals are inherited from the lattice. The result is trimmed.
WordLattice Rescore(const WordLattice& lattice, const BiasingAutomaton& automaton);

}  // namespace ctxbias

#endif  // CTXBIAS_BIASING_H_
