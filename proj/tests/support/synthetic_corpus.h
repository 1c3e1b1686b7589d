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

#ifndef CTXBIAS_TESTS_SUPPORT_SYNTHETIC_CORPUS_H_
#define CTXBIAS_TESTS_SUPPORT_SYNTHETIC_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ctxbias/lattice.h"
#include "ctxbias/pipeline.h"

namespace ctxbias::testing {

enum class UtteranceKind {
  kConfusable,      // wrong callsign cheaper by 0 < margin < 5 * gain
  kAlreadyCorrect,  // correct callsign already cheapest
  kNoContext,       // no surveillance records near the utterance
  kNoCallsign,      // reference carries no callsign (CA-WER skips it)
};

struct SyntheticUtterance {
  std::string utt_id;
  UtteranceKind kind;
  Tokens callsign;        // spoken reference callsign
  Tokens wrong_callsign;  // its cheaper confusion (kConfusable / kNoContext)
  std::size_t occ_gain = 0;
  double margin = 0.0;    // wrong path cheaper by this much at d = 0
};

/// Air-traffic style corpus in which every confusable utterance is
/// recovered by biasing at discount 5 and never at discount 0.
struct SyntheticCorpus {
  std::string airlines_tsv;
  std::string surveillance_csv;
  std::string meta_csv;
  std::vector<WordLattice> lattices;
  Transcripts refs;
  Transcripts callsigns;
  std::vector<SyntheticUtterance> utterances;
};

SyntheticCorpus MakeSyntheticCorpus(std::uint64_t seed, std::size_t num_utterances);

/// Writes airlines.tsv, surveillance.csv, meta.csv, lattices.txt, refs.txt
/// and callsigns.txt into `dir` (created if needed).
void WriteSyntheticCorpus(const SyntheticCorpus& corpus,
                          const std::filesystem::path& dir);

}  // namespace ctxbias::testing

#endif  // CTXBIAS_TESTS_SUPPORT_SYNTHETIC_CORPUS_H_
