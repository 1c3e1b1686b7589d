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

#include "ctxbias/surveillance.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "json.hpp"

#include "ctxbias/errors.h"

namespace ctxbias {

namespace {

using Kind = ParseError::Kind;
using Row = std::vector<std::string>;

// Reads a comma-separated file with a fixed header. Calls `on_row` with the
// trimmed fields and the 1-based line number of each non-blank data row.
template <typename OnRow>
void ReadCsv(std::istream& in, const Row& header, OnRow on_row) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    Row fields = SplitFields(line, ',');
    for (auto& f : fields) f = std::string(Trim(f));
    if (!have_header) {
      if (fields != header) {
        throw ParseError(Kind::kMalformed, line_no,
                         "missing header '" + Join(header, ",") + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(Kind::kMalformed, line_no,
                       "expected " + std::to_string(header.size()) + " fields");
    }
    on_row(fields, line_no);
  }
  if (!have_header) {
    throw ParseError(Kind::kMalformed, line_no,
                     "missing header '" + Join(header, ",") + "'");
  }
}

double NumberField(const std::string& field, const char* name, std::size_t line) {
  auto value = ParseDouble(field);
  if (!value || !std::isfinite(*value)) {
    throw ParseError(Kind::kMalformed, line,
                     std::string("non-numeric ") + name + " '" + field + "'");
  }
  return *value;
}

void CheckCoordinates(double lat, double lon, std::size_t line) {
  if (lat < -90.0 || lat > 90.0) {
    throw ParseError(Kind::kOutOfRange, line,
                     "latitude " + FormatDouble(lat) + " outside [-90, 90]");
  }
  if (lon < -180.0 || lon > 180.0) {
    throw ParseError(Kind::kOutOfRange, line,
                     "longitude " + FormatDouble(lon) + " outside [-180, 180]");
  }
}

}  // namespace

SurveillanceStore::SurveillanceStore(std::vector<SurveillanceRecord> records)
    : records_(std::move(records)) {
  std::stable_sort(records_.begin(), records_.end(),
                   [](const auto& a, const auto& b) { return a.time < b.time; });
}

SurveillanceStore LoadRecords(std::istream& in) {
  std::vector<SurveillanceRecord> records;
  ReadCsv(in, {"callsign", "time", "lat", "lon"},
          [&](const Row& f, std::size_t line) {
            if (f[0].empty()) {
              throw ParseError(Kind::kMalformed, line, "empty callsign");
            }
            SurveillanceRecord rec;
            try {
              rec.callsign = ParseIcao(f[0]);
            } catch (const InputError& e) {
              throw ParseError(Kind::kMalformed, line, e.what());
            }
            rec.time = NumberField(f[1], "time", line);
            rec.lat = NumberField(f[2], "lat", line);
            rec.lon = NumberField(f[3], "lon", line);
            CheckCoordinates(rec.lat, rec.lon, line);
            records.push_back(std::move(rec));
          });
  return SurveillanceStore(std::move(records));
}

std::vector<IcaoCallsign> QueryContext(const SurveillanceStore& store,
                                       const ContextQuery& query) {
  if (!(query.half_window > 0.0) || !(query.radius_deg > 0.0)) {
    throw InputError("context query needs half_window > 0 and radius_deg > 0");
  }
  const auto& recs = store.records();
  auto it = std::lower_bound(
      recs.begin(), recs.end(), query.center_time - query.half_window,
      [](const SurveillanceRecord& r, double t) { return r.time < t; });

  std::vector<IcaoCallsign> out;
  std::set<std::string> seen;
  for (; it != recs.end() && it->time <= query.center_time + query.half_window; ++it) {
    if (std::abs(it->time - query.center_time) > query.half_window) continue;
    if (std::abs(it->lat - query.center_lat) > query.radius_deg) continue;
    if (std::abs(it->lon - query.center_lon) > query.radius_deg) continue;
    if (seen.insert(it->callsign.raw).second) out.push_back(it->callsign);
  }
  return out;
}

std::vector<UtteranceMeta> LoadUtteranceMeta(std::istream& in) {
  std::vector<UtteranceMeta> meta;
  std::set<std::string> seen;
  ReadCsv(in, {"utt_id", "time", "lat", "lon"},
          [&](const Row& f, std::size_t line) {
            if (f[0].empty()) {
              throw ParseError(Kind::kMalformed, line, "empty utt_id");
            }
            if (!seen.insert(f[0]).second) {
              throw ParseError(Kind::kDuplicateId, line,
                               "duplicate utt_id '" + f[0] + "'");
            }
            UtteranceMeta m;
            m.utt_id = f[0];
            m.time = NumberField(f[1], "time", line);
            m.lat = NumberField(f[2], "lat", line);
            m.lon = NumberField(f[3], "lon", line);
            CheckCoordinates(m.lat, m.lon, line);
            meta.push_back(std::move(m));
          });
  return meta;
}

std::vector<UtteranceContext> BuildUtteranceContexts(
    const SurveillanceStore& store, const std::vector<UtteranceMeta>& meta,
    const AirlineTable& table, const ContextOptions& options) {
  std::set<std::string> seen;
  std::vector<UtteranceContext> out;
  out.reserve(meta.size());
  for (const auto& m : meta) {
    if (!seen.insert(m.utt_id).second) {
      throw InputError("duplicate utt_id '" + m.utt_id + "' in utterance meta");
    }
    ContextQuery q;
    q.center_time = m.time;
    q.center_lat = m.lat;
    q.center_lon = m.lon;
    q.half_window = options.half_window;
    q.radius_deg = options.radius_deg;
    const auto callsigns = QueryContext(store, q);

    UtteranceContext ctx;
    ctx.utt_id = m.utt_id;
    for (const auto& cs : callsigns) ctx.callsigns.push_back(cs.raw);
    for (auto& phrase : BuildContextPhrases(callsigns, table, options.verbalize)) {
      ctx.phrases.push_back(std::move(phrase.words));
    }
    out.push_back(std::move(ctx));
  }
  return out;
}

std::string ContextToJson(const UtteranceContext& context) {
  nlohmann::ordered_json j;
  j["utt_id"] = context.utt_id;
  j["callsigns"] = context.callsigns;
  j["phrases"] = context.phrases;
  return j.dump();
}

void WriteContexts(const std::vector<UtteranceContext>& contexts, std::ostream& out) {
  for (const auto& ctx : contexts) out << ContextToJson(ctx) << '\n';
}

std::vector<UtteranceContext> ReadContexts(std::istream& in) {
  std::vector<UtteranceContext> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    UtteranceContext ctx;
    try {
      const auto j = nlohmann::json::parse(line);
      ctx.utt_id = j.at("utt_id").get<std::string>();
      ctx.callsigns = j.at("callsigns").get<std::vector<std::string>>();
      for (const auto& phrase : j.at("phrases")) {
        Tokens words;
        for (const auto& w : phrase) words.push_back(ToLower(w.get<std::string>()));
        if (words.empty()) {
          throw ParseError(Kind::kMalformed, line_no, "empty phrase");
        }
        ctx.phrases.push_back(std::move(words));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(Kind::kMalformed, line_no,
                       std::string("bad context record: ") + e.what());
    }
    if (ctx.utt_id.empty()) throw ParseError(Kind::kMalformed, line_no, "empty utt_id");
    if (!seen.insert(ctx.utt_id).second) {
      throw ParseError(Kind::kDuplicateId, line_no,
                       "duplicate utt_id '" + ctx.utt_id + "'");
    }
    out.push_back(std::move(ctx));
  }
  return out;
}

}  // namespace ctxbias
