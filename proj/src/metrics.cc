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

#include "ctxbias/metrics.h"

#include <algorithm>

#include "ctxbias/errors.h"

namespace ctxbias {

const char* EditOpName(EditOp op) {
  switch (op) {
    case EditOp::kMatch: return "MATCH";
    case EditOp::kSub: return "SUB";
    case EditOp::kDel: return "DEL";
    case EditOp::kIns: return "INS";
  }
  return "?";
}

std::size_t Alignment::Cost() const {
  return static_cast<std::size_t>(std::count_if(
      columns.begin(), columns.end(),
      [](const AlignColumn& c) { return c.op != EditOp::kMatch; }));
}

Alignment Align(const Tokens& ref, const Tokens& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  // dist[i][j]: edit distance between ref[i..] and hyp[j..], so the trace
  // can walk forward and apply the preference order left to right.
  std::vector<std::vector<std::size_t>> dist(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i == n) {
        dist[i][j] = m - j;
      } else if (j == m) {
        dist[i][j] = n - i;
      } else {
        const std::size_t diag = dist[i + 1][j + 1] + (ref[i] == hyp[j] ? 0 : 1);
        dist[i][j] = std::min({diag, dist[i + 1][j] + 1, dist[i][j + 1] + 1});
      }
    }
  }

  Alignment out;
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && ref[i] == hyp[j] && dist[i][j] == dist[i + 1][j + 1]) {
      out.columns.push_back({EditOp::kMatch, i++, j++});
    } else if (i < n && j < m && ref[i] != hyp[j] &&
               dist[i][j] == dist[i + 1][j + 1] + 1) {
      out.columns.push_back({EditOp::kSub, i++, j++});
    } else if (i < n && dist[i][j] == dist[i + 1][j] + 1) {
      out.columns.push_back({EditOp::kDel, i++, std::nullopt});
    } else {
      out.columns.push_back({EditOp::kIns, std::nullopt, j++});
    }
  }
  return out;
}

std::optional<double> ErrorTally::Rate() const {
  if (ref_length == 0) return std::nullopt;
  return static_cast<double>(Errors()) / static_cast<double>(ref_length);
}

ErrorTally& ErrorTally::operator+=(const ErrorTally& other) {
  substitutions += other.substitutions;
  deletions += other.deletions;
  insertions += other.insertions;
  ref_length += other.ref_length;
  return *this;
}

ScoreReport Wer(const Tokens& ref, const Tokens& hyp) {
  if (ref.empty()) throw InputError("empty reference");
  ScoreReport report;
  report.utterances = 1;
  report.wer.ref_length = ref.size();
  for (const auto& col : Align(ref, hyp).columns) {
    switch (col.op) {
      case EditOp::kMatch: break;
      case EditOp::kSub: ++report.wer.substitutions; break;
      case EditOp::kDel: ++report.wer.deletions; break;
      case EditOp::kIns: ++report.wer.insertions; break;
    }
  }
  return report;
}

ScoreReport CaWer(const Tokens& ref, const Tokens& hyp, const Tokens& callsign) {
  if (callsign.empty()) throw InputError("empty callsign");
  ScoreReport report;
  auto found = std::search(ref.begin(), ref.end(), callsign.begin(), callsign.end());
  if (found == ref.end()) {
    report.skipped.push_back({"", kSkipCallsignAbsent});
    return report;
  }
  const std::size_t s = static_cast<std::size_t>(found - ref.begin());
  const std::size_t e = s + callsign.size();
  report.ca_utterances = 1;
  report.ca_wer.ref_length = e - s;

  std::size_t consumed = 0;  // reference tokens consumed so far
  for (const auto& col : Align(ref, hyp).columns) {
    if (col.op == EditOp::kIns) {
      if (s < consumed && consumed < e) ++report.ca_wer.insertions;
      continue;
    }
    const std::size_t r = *col.ref_index;
    ++consumed;
    if (r < s || r >= e) continue;
    if (col.op == EditOp::kSub) ++report.ca_wer.substitutions;
    if (col.op == EditOp::kDel) ++report.ca_wer.deletions;
  }
  return report;
}

ScoreReport Aggregate(std::span<const ScoreReport> reports) {
  ScoreReport total;
  for (const auto& r : reports) {
    total.utterances += r.utterances;
    total.wer += r.wer;
    total.ca_wer += r.ca_wer;
    total.ca_utterances += r.ca_utterances;
    total.skipped.insert(total.skipped.end(), r.skipped.begin(), r.skipped.end());
  }
  return total;
}

}  // namespace ctxbias
