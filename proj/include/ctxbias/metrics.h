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

#ifndef CTXBIAS_METRICS_H_
#define CTXBIAS_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxbias/text_util.h"

namespace ctxbias {

enum class EditOp { kMatch, kSub, kDel, kIns };

const char* EditOpName(EditOp op);

struct AlignColumn {
  EditOp op;
  std::optional<std::size_t> ref_index;  // unset for insertions
  std::optional<std::size_t> hyp_index;  // unset for deletions

  bool operator==(const AlignColumn&) const = default;
};

struct Alignment {
  std::vector<AlignColumn> columns;

  /// Number of non-match columns.
  std::size_t Cost() const;
};

/// Minimum edit-distance alignment with unit costs. Among optimal
/// alignments, columns are chosen left to right preferring
/// match > substitution > deletion > insertion.
Alignment Align(const Tokens& ref, const Tokens& hyp);

struct ErrorTally {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_length = 0;

  std::size_t Errors() const { return substitutions + deletions + insertions; }
  /// Errors / ref_length; unset when ref_length is zero.
  std::optional<double> Rate() const;

  ErrorTally& operator+=(const ErrorTally& other);
  bool operator==(const ErrorTally&) const = default;
};

struct SkippedUtterance {
  std::string utt_id;
  std::string reason;

  bool operator==(const SkippedUtterance&) const = default;
};

inline constexpr const char* kSkipCallsignAbsent = "callsign-absent";
inline constexpr const char* kSkipNoCallsignEntry = "no-callsign-entry";

/// Word errors of one utterance or a corpus. `ca_wer` only counts errors
/// inside the reference callsign span.
struct ScoreReport {
  std::string utt_id;
  std::size_t utterances = 0;
  ErrorTally wer;
  ErrorTally ca_wer;
  std::size_t ca_utterances = 0;
  std::vector<SkippedUtterance> skipped;
};

/// Throws InputError when `ref` is empty.
ScoreReport Wer(const Tokens& ref, const Tokens& hyp);

/// Scores the first occurrence [s, e) of `callsign` in `ref`: substitutions
/// and deletions of span tokens, plus insertions strictly inside the span
/// (after s and before e reference tokens have been consumed). Insertions
/// at the span edges are ignored. When the callsign does not occur the
/// report holds a single skip entry. Throws InputError on an empty callsign.
ScoreReport CaWer(const Tokens& ref, const Tokens& hyp, const Tokens& callsign);

/// Field-wise sum; rates are recomputed from the pooled counts.
ScoreReport Aggregate(std::span<const ScoreReport> reports);

}  // namespace ctxbias

#endif  // CTXBIAS_METRICS_H_
