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
#include <map>
#include <sstream>

#include "doctest.h"

#include "ctxbias/errors.h"
#include "support/oracles.h"

namespace ctxbias {
namespace {

Tokens T(const std::string& text) { return SplitWhitespace(text); }

PhraseSet Phrases(std::initializer_list<const char*> texts) {
  PhraseSet set;
  for (const char* t : texts) set.Add(T(t));
  return set;
}

std::set<Tokens> AsSet(const PhraseSet& p) {
  return {p.phrases().begin(), p.phrases().end()};
}

// Enumerated paths keyed by word sequence; sequences can repeat in a
// lattice, so each key holds the sorted cost list.
std::map<Tokens, std::vector<std::pair<double, double>>> PathCosts(const WordLattice& lat) {
  std::map<Tokens, std::vector<std::pair<double, double>>> out;
  for (const auto& p : EnumeratePaths(lat)) {
    out[p.words].emplace_back(p.graph_cost, p.acoustic_cost);
  }
  for (auto& [w, v] : out) std::sort(v.begin(), v.end());
  return out;
}

TEST_CASE("collect n-grams") {
  CHECK(AsSet(CollectNgrams({T("a b")})) == std::set<Tokens>{T("a"), T("b"), T("a b")});
  CHECK(AsSet(CollectNgrams({T("a b c")}, 2, 2)) == std::set<Tokens>{T("a b"), T("b c")});

  PhraseSet shared = CollectNgrams({T("ryanair one"), T("lufthansa one")}, 1, 1);
  CHECK(shared.size() == 3);
  CHECK(std::count(shared.phrases().begin(), shared.phrases().end(), T("one")) == 1);

  // Orders beyond a phrase's length contribute nothing.
  CHECK(CollectNgrams({T("a")}, 2).empty());
  CHECK(CollectNgrams({}).empty());

  CHECK_THROWS_AS(CollectNgrams({T("a"), Tokens{}}), InputError);
  CHECK_THROWS_AS(CollectNgrams({T("a")}, 0), InputError);
  CHECK_THROWS_AS(CollectNgrams({T("a")}, 3, 2), InputError);
}

TEST_CASE("phrase set rejects empty phrases and keeps the first copy") {
  PhraseSet set;
  CHECK(set.Add(T("a b")));
  CHECK_FALSE(set.Add(T("a b")));
  CHECK(set.size() == 1);
  CHECK_THROWS_AS(set.Add({}), InputError);
  CHECK_THROWS_AS(set.Add({"a", ""}), InputError);
}

TEST_CASE("empty phrase set gives a single root that loops") {
  BiasingAutomaton a(PhraseSet{}, 2.0);
  CHECK(a.num_states() == 1);
  CHECK(a.Next(BiasingAutomaton::kRoot, "anything") == BiasingAutomaton::kRoot);
  CHECK(a.Bonus(BiasingAutomaton::kRoot) == 0.0);
  CHECK(a.Score(T("x y z")).occurrences == 0);
}

TEST_CASE("trie with a phrase and its extension") {
  BiasingAutomaton a(Phrases({"a", "a b"}), 1.0);
  CHECK(a.num_states() == 3);
  auto sa = a.Goto(BiasingAutomaton::kRoot, "a");
  REQUIRE(sa);
  auto sab = a.Goto(*sa, "b");
  REQUIRE(sab);
  CHECK(a.OutCount(*sa) == 1);
  CHECK(a.OutCount(*sab) == 1);
  CHECK(a.Depth(*sab) == 2);
  CHECK(a.Fail(*sab) == BiasingAutomaton::kRoot);
}

TEST_CASE("suffix matches are counted through failure links") {
  BiasingAutomaton a(Phrases({"a b", "b"}), 1.0);
  const auto sa = a.Next(BiasingAutomaton::kRoot, "a");
  const auto sab = a.Next(sa, "b");
  CHECK(a.OutCount(sa) == 0);
  CHECK(a.OutCount(sab) == 2);  // "a b" and its suffix "b"
  CHECK(a.Score(T("a b")).occurrences == 2);
}

TEST_CASE("score sequence") {
  BiasingAutomaton a(Phrases({"ryanair", "one", "ryanair one"}), 2.0);
  auto s = a.Score(T("ryanair one"));
  CHECK(s.occurrences == 3);
  CHECK(s.bonus == -6.0);

  auto empty = a.Score({});
  CHECK(empty.occurrences == 0);
  CHECK(empty.bonus == 0.0);

  BiasingAutomaton zero(Phrases({"ryanair", "one", "ryanair one"}), 0.0);
  auto z = zero.Score(T("ryanair one one"));
  CHECK(z.occurrences == 4);
  CHECK(z.bonus == 0.0);
}

TEST_CASE("overlapping occurrences") {
  BiasingAutomaton a(Phrases({"a a", "a"}), 1.0);
  // "a a a": "a" x3, "a a" x2
  CHECK(a.Score(T("a a a")).occurrences == 5);
  BiasingAutomaton b(Phrases({"a b a", "b a b"}), 1.0);
  CHECK(b.Score(T("a b a b a")).occurrences == 3);
}

TEST_CASE("negative or non-finite discount is rejected") {
  CHECK_THROWS_AS(BiasingAutomaton(PhraseSet{}, -1.0), InputError);
  CHECK_THROWS_AS(BiasingAutomaton(PhraseSet{}, std::nan("")), InputError);
}

TEST_CASE("default and recommended discounts") {
  CHECK(kDefaultDiscount == 2.0);
  CHECK(kRecommendedDiscount == 5.0);
}

TEST_CASE("automaton invariants on random phrase sets") {
  testing::Rng rng(3);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  for (int i = 0; i < 300; ++i) {
    PhraseSet set;
    for (auto& p : testing::RandomPhrases(rng, 8, 4, vocab)) set.Add(p);
    BiasingAutomaton a(set, 1.0);
    CHECK(a.num_states() <= 1 + set.TotalLength());
    CHECK(a.Fail(BiasingAutomaton::kRoot) == BiasingAutomaton::kRoot);
    for (BiasingAutomaton::State q = 1; q < static_cast<BiasingAutomaton::State>(a.num_states()); ++q) {
      CHECK(a.Depth(a.Fail(q)) < a.Depth(q));
      CHECK(a.OutCount(q) == (a.IsPhrase(q) ? 1u : 0u) + a.OutCount(a.Fail(q)));
    }
    // Tokens outside every phrase return to the root.
    for (BiasingAutomaton::State q = 0; q < static_cast<BiasingAutomaton::State>(a.num_states()); ++q) {
      CHECK(a.Next(q, "zzz") == BiasingAutomaton::kRoot);
    }
  }
}

TEST_CASE("automaton counts equal a naive substring scan") {
  testing::Rng rng(5);
  const std::vector<std::string> vocab = {"a", "b", "c"};
  for (int i = 0; i < 1000; ++i) {
    auto phrases = testing::RandomPhrases(rng, 6, 4, vocab);
    PhraseSet set;
    for (const auto& p : phrases) set.Add(p);
    BiasingAutomaton a(set, 1.5);
    Tokens words = testing::RandomWords(rng, 0, 12, vocab);
    auto score = a.Score(words);
    const std::size_t naive = testing::NaiveOccurrences(phrases, words);
    CHECK(score.occurrences == naive);
    CHECK(score.bonus == -1.5 * static_cast<double>(naive));
  }
}

TEST_CASE("dump lists trie edges and failure links") {
  BiasingAutomaton a(Phrases({"a b", "b"}), 2.0);
  const std::string dump = a.Dump();
  CHECK(dump.find("0 1 a 0\n") != std::string::npos);
  CHECK(dump.find("1 2 b -4\n") != std::string::npos);
  CHECK(dump.find("FAIL 2 3\n") != std::string::npos);
}

const char* kAlphaBravo =
    "UTT ab\n"
    "0 1 alpha 1 1\n"
    "0 2 bravo 1 1\n"
    "1 3 over 0.5 0\n"
    "2 3 over 0.5 0\n"
    "3\n";

WordLattice ParseOne(const std::string& text) {
  std::istringstream in(text);
  return ParseLattices(in).at(0);
}

TEST_CASE("rescoring with no phrases keeps every path cost") {
  const WordLattice lat = ParseOne(kAlphaBravo);
  const WordLattice out = Rescore(lat, BiasingAutomaton(PhraseSet{}, 2.0));
  CHECK(PathCosts(out) == PathCosts(lat));
  CHECK(out.num_states == lat.num_states);
}

TEST_CASE("rescoring boosts only the matching path") {
  const WordLattice lat = ParseOne(kAlphaBravo);
  const WordLattice out = Rescore(lat, BiasingAutomaton(Phrases({"bravo"}), 2.0));
  auto before = PathCosts(lat);
  auto after = PathCosts(out);
  REQUIRE(after.size() == 2);
  CHECK(after[T("alpha over")] == before[T("alpha over")]);
  CHECK(after[T("bravo over")][0].first == before[T("bravo over")][0].first - 2.0);
  CHECK(after[T("bravo over")][0].second == before[T("bravo over")][0].second);
  CHECK(BestPath(out).words == T("bravo over"));
  CHECK(BestPath(lat).words == T("alpha over"));
}

TEST_CASE("rescoring at zero discount preserves every arc weight") {
  testing::Rng rng(17);
  const std::vector<std::string> vocab = {"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    WordLattice lat = testing::RandomLattice(rng, 8, 14, vocab);
    PhraseSet set;
    for (auto& p : testing::RandomPhrases(rng, 6, 3, vocab)) set.Add(p);
    WordLattice out = Rescore(lat, BiasingAutomaton(set, 0.0));
    // Each product arc copies the weight of the lattice arc it came from.
    std::multiset<std::tuple<std::string, double, double>> in_w, out_w;
    for (const auto& a : lat.arcs) in_w.emplace(a.word, a.cost.graph, a.cost.acoustic);
    for (const auto& a : out.arcs) {
      CHECK(in_w.count({a.word, a.cost.graph, a.cost.acoustic}) > 0);
    }
    CHECK(PathCosts(out) == PathCosts(Trim(lat)));
  }
}

TEST_CASE("rescoring matches brute-force re-scoring of every path") {
  testing::Rng rng(23);
  const std::vector<std::string> vocab = {"a", "b", "c"};
  for (int i = 0; i < 300; ++i) {
    const WordLattice lat = testing::RandomLattice(rng, 8, 14, vocab);
    const auto phrases = testing::RandomPhrases(rng, 6, 3, vocab);
    PhraseSet set;
    for (const auto& p : phrases) set.Add(p);
    const WordLattice out = Rescore(lat, BiasingAutomaton(set, 3.0));

    std::map<Tokens, std::vector<std::pair<double, double>>> expect;
    for (const auto& p : testing::BruteForceRescore(lat, phrases, 3.0, 1.0)) {
      expect[p.words].emplace_back(p.graph_cost, p.acoustic_cost);
    }
    for (auto& [w, v] : expect) std::sort(v.begin(), v.end());
    CHECK(PathCosts(out) == expect);
  }
}

TEST_CASE("rescored best path picks more boosted callsigns as the discount grows") {
  testing::Rng rng(29);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  for (int i = 0; i < 200; ++i) {
    const WordLattice lat = testing::RandomLattice(rng, 8, 14, vocab);
    const auto phrases = testing::RandomPhrases(rng, 6, 3, vocab);
    PhraseSet set;
    for (const auto& p : phrases) set.Add(p);
    std::size_t last = 0;
    for (double d : {0.0, 1.0, 2.0, 4.0, 5.0, 6.0, 8.0}) {
      const auto best = BestPath(Rescore(lat, BiasingAutomaton(set, d)));
      const std::size_t occ = testing::NaiveOccurrences(phrases, best.words);
      CHECK(occ >= last);
      last = occ;
    }
  }
}

}  // namespace
}  // namespace ctxbias
