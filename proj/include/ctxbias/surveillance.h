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

#ifndef CTXBIAS_SURVEILLANCE_H_
#define CTXBIAS_SURVEILLANCE_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "ctxbias/callsign.h"

namespace ctxbias {

struct SurveillanceRecord {
  IcaoCallsign callsign;
  double time = 0.0;  // unix seconds
  double lat = 0.0;
  double lon = 0.0;
};

/// Offline dump of aircraft sightings, sorted by time (stable for ties).
class SurveillanceStore {
 public:
  SurveillanceStore() = default;
  explicit SurveillanceStore(std::vector<SurveillanceRecord> records);

  const std::vector<SurveillanceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

 private:
  std::vector<SurveillanceRecord> records_;
};

inline constexpr double kDefaultHalfWindowSeconds = 60.0;
inline constexpr double kDefaultRadiusDegrees = 0.5;

/// Time window and degree box around an utterance.
struct ContextQuery {
  double center_time = 0.0;
  double half_window = kDefaultHalfWindowSeconds;
  double center_lat = 0.0;
  double center_lon = 0.0;
  double radius_deg = kDefaultRadiusDegrees;
};

/// Reads CSV with header `callsign,time,lat,lon`. Throws ParseError naming
/// the row's line on bad numbers, out-of-range coordinates or callsigns.
SurveillanceStore LoadRecords(std::istream& in);

/// Callsigns seen within the window and box, deduplicated, ordered by their
/// first matching sighting.
std::vector<IcaoCallsign> QueryContext(const SurveillanceStore& store,
                                       const ContextQuery& query);

struct UtteranceMeta {
  std::string utt_id;
  double time = 0.0;
  double lat = 0.0;
  double lon = 0.0;
};

/// Reads CSV with header `utt_id,time,lat,lon`; rejects duplicate ids.
std::vector<UtteranceMeta> LoadUtteranceMeta(std::istream& in);

struct UtteranceContext {
  std::string utt_id;
  std::vector<std::string> callsigns;
  std::vector<Tokens> phrases;

  bool empty() const { return phrases.empty(); }
  bool operator==(const UtteranceContext&) const = default;
};

struct ContextOptions {
  double half_window = kDefaultHalfWindowSeconds;
  double radius_deg = kDefaultRadiusDegrees;
  VerbalizeOptions verbalize;
};

/// One context per utterance, in `meta` order.
std::vector<UtteranceContext> BuildUtteranceContexts(
    const SurveillanceStore& store, const std::vector<UtteranceMeta>& meta,
    const AirlineTable& table, const ContextOptions& options = {});

/// Line-delimited JSON:
/// {"utt_id": "...", "callsigns": ["DLH72W"], "phrases": [["lufthansa", ...]]}
std::string ContextToJson(const UtteranceContext& context);
void WriteContexts(const std::vector<UtteranceContext>& contexts, std::ostream& out);
std::vector<UtteranceContext> ReadContexts(std::istream& in);

}  // namespace ctxbias

#endif  // CTXBIAS_SURVEILLANCE_H_
