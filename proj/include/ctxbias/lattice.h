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

#ifndef CTXBIAS_LATTICE_H_
#define CTXBIAS_LATTICE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ctxbias/text_util.h"

namespace ctxbias {

using StateId = std::int32_t;

/// Negative-log weight pair as produced by a decoder. Re-scoring only ever
/// touches the graph part.
struct CostPair {
  double graph = 0.0;
  double acoustic = 0.0;

  double Combined(double acoustic_scale) const {
    return graph + acoustic_scale * acoustic;
  }
  bool operator==(const CostPair&) const = default;
};

struct LatticeArc {
  StateId src = 0;
  StateId dst = 0;
  std::string word;
  CostPair cost;

  bool operator==(const LatticeArc&) const = default;
};

/// Acyclic word acceptor for one utterance. State 0 is the start state and
/// states are 0 .. num_states - 1. Arcs keep their file order.
struct WordLattice {
  std::string utt_id;
  StateId num_states = 0;
  std::vector<LatticeArc> arcs;
  std::map<StateId, CostPair> finals;

  bool IsFinal(StateId s) const { return finals.count(s) != 0; }

  bool operator==(const WordLattice&) const = default;
};

/// One complete path. `combined_cost` is graph_cost + scale * acoustic_cost
/// of the totals, which are summed left to right with the final cost last.
struct PathHypothesis {
  Tokens words;
  double graph_cost = 0.0;
  double acoustic_cost = 0.0;
  double combined_cost = 0.0;
  std::size_t num_arcs = 0;

  bool operator==(const PathHypothesis&) const = default;
};

/// Reads the lattice text format:
///
///   UTT <utt_id>
///   <src> <dst> <word> <graph_cost> <acoustic_cost>
///   <state> [<graph_cost> <acoustic_cost>]
///   <blank line>
///
/// Words are lower-cased. Throws ParseError (with the offending line) on
/// malformed lines, cycles, epsilon words, unknown states and duplicate ids.
/// The result keeps the file order of blocks.
std::vector<WordLattice> ParseLattices(std::istream& in);

void SerializeLattices(const std::vector<WordLattice>& lattices,
                       std::ostream& out);
std::string SerializeLattice(const WordLattice& lattice);

/// Throws InvariantError when a structural invariant is broken.
void ValidateLattice(const WordLattice& lattice);

/// States of `lattice` in topological order (arc sources before targets).
std::vector<StateId> TopologicalOrder(const WordLattice& lattice);

/// Drops states that are not on a start-to-final path and renumbers the
/// rest in increasing order. Throws InputError when no complete path exists.
WordLattice Trim(const WordLattice& lattice);

/// Minimum combined-cost complete path. Equal costs are resolved by the
/// lexicographically smallest word sequence, then by fewer arcs.
PathHypothesis BestPath(const WordLattice& lattice, double acoustic_scale = 1.0);

/// Every complete path in depth-first order. Throws InputError when there
/// are more than `limit` paths.
std::vector<PathHypothesis> EnumeratePaths(
    const WordLattice& lattice,
    std::size_t limit = std::numeric_limits<std::size_t>::max(),
    double acoustic_scale = 1.0);

/// True when `a` is preferred over `b` under the BestPath ordering.
bool BetterHypothesis(const PathHypothesis& a, const PathHypothesis& b);

}  // namespace ctxbias

#endif  // CTXBIAS_LATTICE_H_
