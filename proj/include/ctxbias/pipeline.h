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

#ifndef CTXBIAS_PIPELINE_H_
#define CTXBIAS_PIPELINE_H_

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxbias/biasing.h"
#include "ctxbias/lattice.h"
#include "ctxbias/metrics.h"
#include "ctxbias/surveillance.h"

namespace ctxbias {

enum class EmitMode { kText, kLattices };

/// Everything a pipeline run needs. Unset paths are simply not used by the
/// stages that do not need them.
struct PipelineConfig {
  double discount = kDefaultDiscount;
  std::size_t min_order = 1;
  std::optional<std::size_t> max_order;  // unset: full phrase length
  double acoustic_scale = 1.0;
  bool niner = false;
  double window_s = kDefaultHalfWindowSeconds;
  double radius_deg = kDefaultRadiusDegrees;
  std::size_t workers = 1;
  EmitMode emit = EmitMode::kText;

  std::filesystem::path lattices;
  std::filesystem::path contexts;
  std::filesystem::path surveillance;
  std::filesystem::path meta;
  std::filesystem::path airlines;
  std::filesystem::path refs;
  std::filesystem::path hyps;
  std::filesystem::path callsigns;

  /// Throws InputError on negative or non-finite reals or bad orders.
  void Validate() const;
};

/// `<utt_id> <word> ...` lines, lower-cased, in file order.
using Transcripts = std::vector<std::pair<std::string, Tokens>>;

/// Throws ParseError on duplicate ids or lines without an id. An id with no
/// words is an empty transcript.
Transcripts LoadTranscripts(std::istream& in);
void WriteTranscripts(const Transcripts& transcripts, std::ostream& out);

/// Opens `path` for reading or throws InputError naming `what`.
std::ifstream OpenInput(const std::filesystem::path& path, const std::string& what);

// ---- context -----------------------------------------------------------

struct ContextSummary {
  std::size_t utterances = 0;
  std::vector<std::string> empty_contexts;
};

/// Loads surveillance, meta and airline table from `config` and writes one
/// JSON context per utterance to `out`. Warnings and the summary go to `diag`.
ContextSummary RunContext(const PipelineConfig& config, std::ostream& out,
                          std::ostream& diag);

// ---- rescore -----------------------------------------------------------

struct RescoredUtterance {
  WordLattice lattice;  // input lattice when the context is empty
  PathHypothesis best;
  bool biased = false;
};

/// Per utterance: n-grams of its context phrases, matcher at `discount`,
/// composition, best path. Utterances with an empty context pass through.
/// Output order follows `lattices` for every worker count. Throws
/// InputError naming any lattice without a context entry.
std::vector<RescoredUtterance> RescoreCorpus(
    const std::vector<WordLattice>& lattices,
    const std::vector<UtteranceContext>& contexts, const PipelineConfig& config,
    double discount);

Transcripts BestPathTranscripts(const std::vector<RescoredUtterance>& rescored);

/// Reads lattices and contexts from `config` and writes text or lattices.
void RunRescore(const PipelineConfig& config, std::ostream& out, std::ostream& diag);

// ---- score -------------------------------------------------------------

struct CorpusScore {
  ScoreReport total;
  std::vector<ScoreReport> utterances;
  bool has_callsigns = false;
};

/// Scores every reference utterance. Throws InputError listing all ids that
/// are missing on either side (and callsign ids without a reference).
CorpusScore ScoreCorpus(const Transcripts& refs, const Transcripts& hyps,
                        const std::optional<Transcripts>& callsigns);

std::string ScoreReportJson(const CorpusScore& score);
std::string ScoreReportTable(const CorpusScore& score);

/// Writes the table to `out`; also writes JSON to `json_path` when set.
CorpusScore RunScore(const PipelineConfig& config, std::ostream& out,
                     const std::optional<std::filesystem::path>& json_path);

// ---- sweep -------------------------------------------------------------

struct SweepRow {
  double discount = 0.0;
  std::optional<double> wer;
  std::optional<double> ca_wer;
  std::size_t skipped = 0;
};

/// Rescore + score for each discount. Repeated values are dropped (first
/// occurrence kept) with a warning on `diag`.
std::vector<SweepRow> Sweep(const std::vector<WordLattice>& lattices,
                            const std::vector<UtteranceContext>& contexts,
                            const Transcripts& refs, const Transcripts& callsigns,
                            const std::vector<double>& discounts,
                            const PipelineConfig& config, std::ostream& diag);

/// TSV with header `d wer ca_wer skipped`; rates with 6 decimals or NA.
std::string FormatSweep(const std::vector<SweepRow>& rows);

void RunSweep(const PipelineConfig& config, const std::vector<double>& discounts,
              std::ostream& out, std::ostream& diag);

}  // namespace ctxbias

#endif  // CTXBIAS_PIPELINE_H_
