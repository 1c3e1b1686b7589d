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

#include "ctxbias/lattice.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include "ctxbias/errors.h"

namespace ctxbias {

namespace {

using Kind = ParseError::Kind;

bool IsEpsilonToken(const std::string& word) {
  return word == "<eps>" || word == "<epsilon>";
}

StateId ParseStateId(const std::string& token, std::size_t line) {
  auto value = ParseInt(token);
  if (!value || *value < 0 ||
      *value >= std::numeric_limits<StateId>::max()) {
    throw ParseError(Kind::kMalformed, line, "bad state id '" + token + "'");
  }
  return static_cast<StateId>(*value);
}

double ParseCost(const std::string& token, std::size_t line) {
  auto value = ParseDouble(token);
  if (!value || !std::isfinite(*value)) {
    throw ParseError(Kind::kMalformed, line, "bad cost '" + token + "'");
  }
  return *value;
}

// Outgoing arc indices per state, in file order.
std::vector<std::vector<std::size_t>> OutArcs(const WordLattice& lattice) {
  std::vector<std::vector<std::size_t>> out(lattice.num_states);
  for (std::size_t i = 0; i < lattice.arcs.size(); ++i) {
    out[lattice.arcs[i].src].push_back(i);
  }
  return out;
}

// Index of an arc closing a cycle, or -1.
long FindBackEdge(const WordLattice& lattice) {
  const auto out = OutArcs(lattice);
  enum Color : char { kWhite, kGray, kBlack };
  std::vector<Color> color(lattice.num_states, kWhite);
  // (state, position in its out list)
  std::vector<std::pair<StateId, std::size_t>> stack;
  for (StateId root = 0; root < lattice.num_states; ++root) {
    if (color[root] != kWhite) continue;
    stack.emplace_back(root, 0);
    color[root] = kGray;
    while (!stack.empty()) {
      auto& [s, pos] = stack.back();
      if (pos == out[s].size()) {
        color[s] = kBlack;
        stack.pop_back();
        continue;
      }
      std::size_t arc = out[s][pos++];
      StateId d = lattice.arcs[arc].dst;
      if (color[d] == kGray) return static_cast<long>(arc);
      if (color[d] == kWhite) {
        color[d] = kGray;
        stack.emplace_back(d, 0);
      }
    }
  }
  return -1;
}

struct PendingBlock {
  WordLattice lattice;
  std::size_t header_line = 0;
  std::vector<std::size_t> arc_lines;
  std::map<StateId, std::size_t> final_lines;
};

void FinishBlock(PendingBlock& block) {
  WordLattice& lat = block.lattice;
  StateId max_state = 0;
  for (const auto& arc : lat.arcs) {
    max_state = std::max({max_state, arc.src, arc.dst});
  }
  lat.num_states = max_state + 1;
  for (const auto& [state, line] : block.final_lines) {
    if (state >= lat.num_states) {
      throw ParseError(Kind::kUnknownState, line,
                       "final state " + std::to_string(state) +
                           " is not referenced by any arc of '" +
                           lat.utt_id + "'");
    }
  }
  if (lat.finals.empty()) {
    throw ParseError(Kind::kMalformed, block.header_line,
                     "lattice '" + lat.utt_id + "' has no final state");
  }
  long back = FindBackEdge(lat);
  if (back >= 0) {
    throw ParseError(Kind::kCycle, block.arc_lines[back],
                     "cycle in lattice '" + lat.utt_id + "'");
  }
}

}  // namespace

std::vector<WordLattice> ParseLattices(std::istream& in) {
  std::vector<WordLattice> result;
  std::set<std::string> seen;
  std::optional<PendingBlock> block;
  std::string line;
  std::size_t line_no = 0;

  auto close_block = [&]() {
    FinishBlock(*block);
    result.push_back(std::move(block->lattice));
    block.reset();
  };

  while (std::getline(in, line)) {
    ++line_no;
    Tokens toks = SplitWhitespace(line);
    if (toks.empty()) {
      if (block) close_block();
      continue;
    }
    if (!block) {
      if (toks[0] != "UTT" || toks.size() != 2) {
        throw ParseError(Kind::kMalformed, line_no, "expected 'UTT <utt_id>'");
      }
      if (!seen.insert(toks[1]).second) {
        throw ParseError(Kind::kDuplicateId, line_no,
                         "duplicate utterance id '" + toks[1] + "'");
      }
      block.emplace();
      block->lattice.utt_id = toks[1];
      block->header_line = line_no;
      continue;
    }
    if (toks[0] == "UTT") {
      throw ParseError(Kind::kMalformed, line_no,
                       "UTT header inside a block (missing blank line)");
    }
    if (toks.size() == 5) {
      LatticeArc arc;
      arc.src = ParseStateId(toks[0], line_no);
      arc.dst = ParseStateId(toks[1], line_no);
      if (IsEpsilonToken(toks[2])) {
        throw ParseError(Kind::kEpsilon, line_no, "epsilon arcs are not allowed");
      }
      arc.word = ToLower(toks[2]);
      arc.cost.graph = ParseCost(toks[3], line_no);
      arc.cost.acoustic = ParseCost(toks[4], line_no);
      block->lattice.arcs.push_back(std::move(arc));
      block->arc_lines.push_back(line_no);
    } else if (toks.size() == 1 || toks.size() == 3) {
      StateId state = ParseStateId(toks[0], line_no);
      CostPair cost;
      if (toks.size() == 3) {
        cost.graph = ParseCost(toks[1], line_no);
        cost.acoustic = ParseCost(toks[2], line_no);
      }
      if (!block->lattice.finals.emplace(state, cost).second) {
        throw ParseError(Kind::kMalformed, line_no,
                         "state " + toks[0] + " declared final twice");
      }
      block->final_lines.emplace(state, line_no);
    } else {
      throw ParseError(Kind::kMalformed, line_no,
                       "expected 1, 3 or 5 fields, got " +
                           std::to_string(toks.size()));
    }
  }
  if (block) close_block();
  return result;
}

std::string SerializeLattice(const WordLattice& lattice) {
  std::string out = "UTT " + lattice.utt_id + "\n";
  for (const auto& arc : lattice.arcs) {
    out += std::to_string(arc.src) + ' ' + std::to_string(arc.dst) + ' ' +
           arc.word + ' ' + FormatDouble(arc.cost.graph) + ' ' +
           FormatDouble(arc.cost.acoustic) + '\n';
  }
  for (const auto& [state, cost] : lattice.finals) {
    out += std::to_string(state);
    if (cost.graph != 0.0 || cost.acoustic != 0.0) {
      out += ' ' + FormatDouble(cost.graph) + ' ' + FormatDouble(cost.acoustic);
    }
    out += '\n';
  }
  out += '\n';
  return out;
}

void SerializeLattices(const std::vector<WordLattice>& lattices,
                       std::ostream& out) {
  for (const auto& lattice : lattices) out << SerializeLattice(lattice);
}

void ValidateLattice(const WordLattice& lattice) {
  const std::string who = "lattice '" + lattice.utt_id + "': ";
  if (lattice.num_states <= 0) throw InvariantError(who + "no states");
  if (lattice.finals.empty()) throw InvariantError(who + "no final state");
  auto in_range = [&](StateId s) { return s >= 0 && s < lattice.num_states; };
  for (const auto& arc : lattice.arcs) {
    if (!in_range(arc.src) || !in_range(arc.dst)) {
      throw InvariantError(who + "arc references an unknown state");
    }
    if (arc.word.empty() || IsEpsilonToken(arc.word)) {
      throw InvariantError(who + "epsilon arc");
    }
    if (!std::isfinite(arc.cost.graph) || !std::isfinite(arc.cost.acoustic)) {
      throw InvariantError(who + "non-finite arc cost");
    }
  }
  for (const auto& [state, cost] : lattice.finals) {
    if (!in_range(state)) throw InvariantError(who + "unknown final state");
    if (!std::isfinite(cost.graph) || !std::isfinite(cost.acoustic)) {
      throw InvariantError(who + "non-finite final cost");
    }
  }
  if (FindBackEdge(lattice) >= 0) throw InvariantError(who + "cycle");
}

std::vector<StateId> TopologicalOrder(const WordLattice& lattice) {
  std::vector<std::size_t> indegree(lattice.num_states, 0);
  for (const auto& arc : lattice.arcs) ++indegree[arc.dst];
  const auto out = OutArcs(lattice);
  std::priority_queue<StateId, std::vector<StateId>, std::greater<>> ready;
  for (StateId s = 0; s < lattice.num_states; ++s) {
    if (indegree[s] == 0) ready.push(s);
  }
  std::vector<StateId> order;
  order.reserve(lattice.num_states);
  while (!ready.empty()) {
    StateId s = ready.top();
    ready.pop();
    order.push_back(s);
    for (std::size_t a : out[s]) {
      if (--indegree[lattice.arcs[a].dst] == 0) ready.push(lattice.arcs[a].dst);
    }
  }
  if (order.size() != static_cast<std::size_t>(lattice.num_states)) {
    throw InvariantError("lattice '" + lattice.utt_id + "' is cyclic");
  }
  return order;
}

WordLattice Trim(const WordLattice& lattice) {
  const StateId n = lattice.num_states;
  std::vector<char> accessible(n, 0), coaccessible(n, 0);
  std::vector<std::vector<StateId>> fwd(n), bwd(n);
  for (const auto& arc : lattice.arcs) {
    fwd[arc.src].push_back(arc.dst);
    bwd[arc.dst].push_back(arc.src);
  }
  auto flood = [](const std::vector<std::vector<StateId>>& adj,
                  std::vector<StateId> seeds, std::vector<char>& mark) {
    for (StateId s : seeds) mark[s] = 1;
    while (!seeds.empty()) {
      StateId s = seeds.back();
      seeds.pop_back();
      for (StateId t : adj[s]) {
        if (!mark[t]) {
          mark[t] = 1;
          seeds.push_back(t);
        }
      }
    }
  };
  if (n > 0) flood(fwd, {0}, accessible);
  std::vector<StateId> final_states;
  for (const auto& [s, cost] : lattice.finals) final_states.push_back(s);
  flood(bwd, final_states, coaccessible);

  if (n == 0 || !accessible[0] || !coaccessible[0]) {
    throw InputError("lattice '" + lattice.utt_id + "' has no complete path");
  }
  std::vector<StateId> remap(n, -1);
  WordLattice out;
  out.utt_id = lattice.utt_id;
  for (StateId s = 0; s < n; ++s) {
    if (accessible[s] && coaccessible[s]) remap[s] = out.num_states++;
  }
  for (const auto& arc : lattice.arcs) {
    if (remap[arc.src] >= 0 && remap[arc.dst] >= 0) {
      LatticeArc copy = arc;
      copy.src = remap[arc.src];
      copy.dst = remap[arc.dst];
      out.arcs.push_back(std::move(copy));
    }
  }
  for (const auto& [s, cost] : lattice.finals) {
    if (remap[s] >= 0) out.finals.emplace(remap[s], cost);
  }
  return out;
}

namespace {

// Best suffix (state -> some final) chosen by the backward pass.
struct SuffixChoice {
  bool valid = false;
  CostPair cost;
  long arc = -1;  // -1: stop at this (final) state
  std::size_t num_arcs = 0;
};

// Walks the word sequence of a candidate suffix: an optional leading arc
// followed by the chosen suffix of the state it enters.
class SuffixCursor {
 public:
  SuffixCursor(const WordLattice& lat, const std::vector<SuffixChoice>& best,
               long first_arc)
      : lat_(lat), best_(best) {
    if (first_arc >= 0) {
      word_ = &lat_.arcs[first_arc].word;
      next_ = lat_.arcs[first_arc].dst;
    }
  }

  const std::string* word() const { return word_; }

  void Advance() {
    word_ = nullptr;
    if (next_ < 0) return;
    long arc = best_[next_].arc;
    if (arc < 0) {
      next_ = -1;
      return;
    }
    word_ = &lat_.arcs[arc].word;
    next_ = lat_.arcs[arc].dst;
  }

 private:
  const WordLattice& lat_;
  const std::vector<SuffixChoice>& best_;
  const std::string* word_ = nullptr;
  StateId next_ = -1;
};

int CompareSuffixWords(SuffixCursor a, SuffixCursor b) {
  while (a.word() != nullptr && b.word() != nullptr) {
    int c = a.word()->compare(*b.word());
    if (c != 0) return c < 0 ? -1 : 1;
    a.Advance();
    b.Advance();
  }
  if (a.word() == nullptr && b.word() == nullptr) return 0;
  return a.word() == nullptr ? -1 : 1;
}

}  // namespace

PathHypothesis BestPath(const WordLattice& lattice, double acoustic_scale) {
  const auto order = TopologicalOrder(lattice);
  const auto out = OutArcs(lattice);
  std::vector<SuffixChoice> best(lattice.num_states);

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const StateId s = *it;
    SuffixChoice& cur = best[s];
    auto final_it = lattice.finals.find(s);
    if (final_it != lattice.finals.end()) {
      cur.valid = true;
      cur.cost = final_it->second;
      cur.arc = -1;
      cur.num_arcs = 0;
    }
    for (std::size_t a : out[s]) {
      const LatticeArc& arc = lattice.arcs[a];
      const SuffixChoice& next = best[arc.dst];
      if (!next.valid) continue;
      CostPair cand{arc.cost.graph + next.cost.graph,
                    arc.cost.acoustic + next.cost.acoustic};
      std::size_t cand_arcs = next.num_arcs + 1;
      bool take = !cur.valid;
      if (!take) {
        double c_new = cand.Combined(acoustic_scale);
        double c_old = cur.cost.Combined(acoustic_scale);
        if (c_new != c_old) {
          take = c_new < c_old;
        } else {
          int cmp = CompareSuffixWords(SuffixCursor(lattice, best, static_cast<long>(a)),
                                       SuffixCursor(lattice, best, cur.arc));
          take = cmp < 0 || (cmp == 0 && cand_arcs < cur.num_arcs);
        }
      }
      if (take) {
        cur.valid = true;
        cur.cost = cand;
        cur.arc = static_cast<long>(a);
        cur.num_arcs = cand_arcs;
      }
    }
  }
  if (lattice.num_states == 0 || !best[0].valid) {
    throw InputError("lattice '" + lattice.utt_id + "' has no complete path");
  }

  PathHypothesis hyp;
  StateId s = 0;
  while (best[s].arc >= 0) {
    const LatticeArc& arc = lattice.arcs[best[s].arc];
    hyp.words.push_back(arc.word);
    hyp.graph_cost += arc.cost.graph;
    hyp.acoustic_cost += arc.cost.acoustic;
    ++hyp.num_arcs;
    s = arc.dst;
  }
  const CostPair& fin = lattice.finals.at(s);
  hyp.graph_cost += fin.graph;
  hyp.acoustic_cost += fin.acoustic;
  hyp.combined_cost = hyp.graph_cost + acoustic_scale * hyp.acoustic_cost;
  return hyp;
}

std::vector<PathHypothesis> EnumeratePaths(const WordLattice& lattice,
                                           std::size_t limit,
                                           double acoustic_scale) {
  std::vector<PathHypothesis> paths;
  if (lattice.num_states == 0) return paths;
  const auto out = OutArcs(lattice);
  PathHypothesis prefix;

  std::function<void(StateId)> visit = [&](StateId s) {
    auto final_it = lattice.finals.find(s);
    if (final_it != lattice.finals.end()) {
      if (paths.size() == limit) {
        throw InputError("lattice '" + lattice.utt_id + "' has more than " +
                         std::to_string(limit) + " paths");
      }
      PathHypothesis done = prefix;
      done.graph_cost += final_it->second.graph;
      done.acoustic_cost += final_it->second.acoustic;
      done.combined_cost = done.graph_cost + acoustic_scale * done.acoustic_cost;
      paths.push_back(std::move(done));
    }
    for (std::size_t a : out[s]) {
      const LatticeArc& arc = lattice.arcs[a];
      PathHypothesis saved = prefix;
      prefix.words.push_back(arc.word);
      prefix.graph_cost += arc.cost.graph;
      prefix.acoustic_cost += arc.cost.acoustic;
      ++prefix.num_arcs;
      visit(arc.dst);
      prefix = std::move(saved);
    }
  };
  visit(0);
  return paths;
}

bool BetterHypothesis(const PathHypothesis& a, const PathHypothesis& b) {
  if (a.combined_cost != b.combined_cost) return a.combined_cost < b.combined_cost;
  if (a.words != b.words) return a.words < b.words;
  return a.num_arcs < b.num_arcs;
}

}  // namespace ctxbias
