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

#include "ctxbias/biasing.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <utility>

#include "ctxbias/errors.h"

namespace ctxbias {

bool PhraseSet::Add(Tokens phrase) {
  if (phrase.empty()) throw InputError("empty phrase in n-gram set");
  for (const auto& tok : phrase) {
    if (tok.empty()) throw InputError("empty token in n-gram set");
  }
  if (!index_.insert(phrase).second) return false;
  phrases_.push_back(std::move(phrase));
  return true;
}

std::size_t PhraseSet::TotalLength() const {
  std::size_t total = 0;
  for (const auto& p : phrases_) total += p.size();
  return total;
}

PhraseSet CollectNgrams(const std::vector<Tokens>& phrases,
                        std::size_t min_order,
                        std::optional<std::size_t> max_order) {
  if (min_order < 1) throw InputError("min n-gram order must be >= 1");
  if (max_order && *max_order < min_order) {
    throw InputError("max n-gram order must be >= min order");
  }
  PhraseSet out;
  for (const auto& phrase : phrases) {
    if (phrase.empty()) throw InputError("empty input phrase");
    const std::size_t hi = std::min(max_order.value_or(phrase.size()), phrase.size());
    for (std::size_t start = 0; start < phrase.size(); ++start) {
      for (std::size_t len = min_order; len <= hi && start + len <= phrase.size();
           ++len) {
        out.Add(Tokens(phrase.begin() + start, phrase.begin() + start + len));
      }
    }
  }
  return out;
}

BiasingAutomaton::BiasingAutomaton(const PhraseSet& phrases, double discount)
    : discount_(discount) {
  if (!(discount >= 0.0) || !std::isfinite(discount)) {
    throw InputError("discount must be a finite value >= 0");
  }
  goto_.emplace_back();
  fail_.push_back(kRoot);
  depth_.push_back(0);
  terminal_.push_back(0);

  for (const auto& phrase : phrases.phrases()) {
    State cur = kRoot;
    for (const auto& word : phrase) {
      auto [it, added] = vocab_.emplace(word, static_cast<TokenId>(words_.size()));
      if (added) words_.push_back(word);
      TokenId tok = it->second;
      auto edge = goto_[cur].find(tok);
      if (edge != goto_[cur].end()) {
        cur = edge->second;
        continue;
      }
      State next = static_cast<State>(fail_.size());
      goto_[cur].emplace(tok, next);
      goto_.emplace_back();
      fail_.push_back(kRoot);
      depth_.push_back(depth_[cur] + 1);
      terminal_.push_back(0);
      cur = next;
    }
    terminal_[cur] = 1;
  }

  // Breadth-first: failure links only point to shallower states, which are
  // finished by the time a state is dequeued.
  out_count_.assign(fail_.size(), 0);
  std::deque<State> queue;
  for (const auto& [tok, child] : goto_[kRoot]) {
    fail_[child] = kRoot;
    out_count_[child] = terminal_[child];
    queue.push_back(child);
  }
  while (!queue.empty()) {
    State u = queue.front();
    queue.pop_front();
    for (const auto& [tok, child] : goto_[u]) {
      State f = fail_[u];
      while (f != kRoot && goto_[f].count(tok) == 0) f = fail_[f];
      auto edge = goto_[f].find(tok);
      fail_[child] = edge != goto_[f].end() ? edge->second : kRoot;
      out_count_[child] = terminal_[child] + out_count_[fail_[child]];
      queue.push_back(child);
    }
  }
}

BiasingAutomaton::TokenId BiasingAutomaton::Lookup(const std::string& word) const {
  auto it = vocab_.find(word);
  return it == vocab_.end() ? -1 : it->second;
}

std::optional<BiasingAutomaton::State> BiasingAutomaton::Goto(
    State state, const std::string& word) const {
  TokenId tok = Lookup(word);
  if (tok < 0) return std::nullopt;
  auto it = goto_[state].find(tok);
  if (it == goto_[state].end()) return std::nullopt;
  return it->second;
}

BiasingAutomaton::State BiasingAutomaton::Next(State state,
                                               const std::string& word) const {
  TokenId tok = Lookup(word);
  if (tok < 0) return kRoot;
  while (true) {
    auto it = goto_[state].find(tok);
    if (it != goto_[state].end()) return it->second;
    if (state == kRoot) return kRoot;
    state = fail_[state];
  }
}

double BiasingAutomaton::Bonus(State state) const {
  return 0.0 - discount_ * static_cast<double>(out_count_[state]);
}

SequenceScore BiasingAutomaton::Score(const Tokens& words) const {
  SequenceScore score;
  State q = kRoot;
  for (const auto& w : words) {
    q = Next(q, w);
    score.occurrences += out_count_[q];
  }
  score.bonus = 0.0 - discount_ * static_cast<double>(score.occurrences);
  return score;
}

std::string BiasingAutomaton::Dump() const {
  std::ostringstream out;
  for (State s = 0; s < static_cast<State>(goto_.size()); ++s) {
    std::map<std::string, State> sorted;
    for (const auto& [tok, dst] : goto_[s]) sorted.emplace(words_[tok], dst);
    for (const auto& [word, dst] : sorted) {
      out << s << ' ' << dst << ' ' << word << ' ' << FormatDouble(Bonus(dst))
          << '\n';
    }
  }
  for (State s = 1; s < static_cast<State>(fail_.size()); ++s) {
    out << "FAIL " << s << ' ' << fail_[s] << '\n';
  }
  return out.str();
}

WordLattice Rescore(const WordLattice& lattice, const BiasingAutomaton& automaton) {
  ValidateLattice(lattice);
  using Pair = std::pair<StateId, BiasingAutomaton::State>;

  std::vector<std::vector<std::size_t>> out_arcs(lattice.num_states);
  for (std::size_t i = 0; i < lattice.arcs.size(); ++i) {
    out_arcs[lattice.arcs[i].src].push_back(i);
  }

  WordLattice product;
  product.utt_id = lattice.utt_id;
  std::map<Pair, StateId> ids;
  std::deque<Pair> queue;
  auto state_of = [&](const Pair& p) {
    auto [it, added] = ids.emplace(p, static_cast<StateId>(ids.size()));
    if (added) queue.push_back(p);
    return it->second;
  };
  state_of({0, BiasingAutomaton::kRoot});

  while (!queue.empty()) {
    const Pair cur = queue.front();
    queue.pop_front();
    const StateId src = ids.at(cur);
    auto fin = lattice.finals.find(cur.first);
    if (fin != lattice.finals.end()) product.finals.emplace(src, fin->second);
    for (std::size_t a : out_arcs[cur.first]) {
      const LatticeArc& arc = lattice.arcs[a];
      const auto q = automaton.Next(cur.second, arc.word);
      LatticeArc next;
      next.src = src;
      next.dst = state_of({arc.dst, q});
      next.word = arc.word;
      next.cost.graph =
          arc.cost.graph - automaton.discount() * static_cast<double>(automaton.OutCount(q));
      next.cost.acoustic = arc.cost.acoustic;
      product.arcs.push_back(std::move(next));
    }
  }
  product.num_states = static_cast<StateId>(ids.size());
  return Trim(product);
}

}  // namespace ctxbias
