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

#include "ctxbias/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ctxbias/errors.h"
#include "ctxbias/parallel.h"

namespace ctxbias {

namespace {

void RequireNonNegative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw InputError(std::string(name) + " must be a finite value >= 0");
  }
}

void RequirePositive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw InputError(std::string(name) + " must be a finite value > 0");
  }
}

std::string FormatRate(const std::optional<double>& rate) {
  if (!rate) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *rate);
  return buf;
}

std::string JoinIds(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ", ";
    out += ids[i];
  }
  return out;
}

nlohmann::ordered_json TallyJson(const ErrorTally& t) {
  nlohmann::ordered_json j;
  j["substitutions"] = t.substitutions;
  j["deletions"] = t.deletions;
  j["insertions"] = t.insertions;
  j["errors"] = t.Errors();
  j["ref_length"] = t.ref_length;
  if (auto rate = t.Rate()) {
    j["rate"] = *rate;
  } else {
    j["rate"] = nullptr;
  }
  return j;
}

}  // namespace

void PipelineConfig::Validate() const {
  RequireNonNegative(discount, "discount");
  RequireNonNegative(acoustic_scale, "acoustic scale");
  RequirePositive(window_s, "window");
  RequirePositive(radius_deg, "radius");
  if (min_order < 1) throw InputError("min order must be >= 1");
  if (max_order && *max_order < min_order) {
    throw InputError("max order must be >= min order");
  }
  if (workers < 1) throw InputError("workers must be >= 1");
}

std::ifstream OpenInput(const std::filesystem::path& path, const std::string& what) {
  if (path.empty()) throw InputError("no " + what + " path given");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + what + " '" + path.string() + "'");
  return in;
}

Transcripts LoadTranscripts(std::istream& in) {
  Transcripts out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Tokens toks = SplitWhitespace(line);
    if (toks.empty()) continue;
    std::string id = toks.front();
    if (!seen.insert(id).second) {
      throw ParseError(ParseError::Kind::kDuplicateId, line_no,
                       "duplicate utt_id '" + id + "'");
    }
    Tokens words;
    for (std::size_t i = 1; i < toks.size(); ++i) words.push_back(ToLower(toks[i]));
    out.emplace_back(std::move(id), std::move(words));
  }
  return out;
}

void WriteTranscripts(const Transcripts& transcripts, std::ostream& out) {
  for (const auto& [id, words] : transcripts) {
    out << id;
    for (const auto& w : words) out << ' ' << w;
    out << '\n';
  }
}

ContextSummary RunContext(const PipelineConfig& config, std::ostream& out,
                          std::ostream& diag) {
  config.Validate();
  auto airlines_in = OpenInput(config.airlines, "airline table");
  auto surveillance_in = OpenInput(config.surveillance, "surveillance file");
  auto meta_in = OpenInput(config.meta, "utterance meta file");

  std::vector<std::string> warnings;
  const AirlineTable table = LoadAirlineTable(airlines_in, &warnings);
  for (const auto& w : warnings) diag << "warning: " << w << '\n';
  const SurveillanceStore store = LoadRecords(surveillance_in);
  const auto meta = LoadUtteranceMeta(meta_in);

  ContextOptions options;
  options.half_window = config.window_s;
  options.radius_deg = config.radius_deg;
  options.verbalize.niner = config.niner;
  const auto contexts = BuildUtteranceContexts(store, meta, table, options);
  WriteContexts(contexts, out);

  ContextSummary summary;
  summary.utterances = contexts.size();
  for (const auto& ctx : contexts) {
    if (ctx.empty()) {
      summary.empty_contexts.push_back(ctx.utt_id);
      diag << "warning: empty context for " << ctx.utt_id << '\n';
    }
  }
  diag << "contexts: " << summary.utterances << " utterances, "
       << summary.empty_contexts.size() << " empty\n";
  return summary;
}

std::vector<RescoredUtterance> RescoreCorpus(
    const std::vector<WordLattice>& lattices,
    const std::vector<UtteranceContext>& contexts, const PipelineConfig& config,
    double discount) {
  config.Validate();
  RequireNonNegative(discount, "discount");
  std::map<std::string, const UtteranceContext*> by_id;
  for (const auto& ctx : contexts) by_id.emplace(ctx.utt_id, &ctx);

  std::vector<std::string> missing;
  std::vector<const UtteranceContext*> matched;
  matched.reserve(lattices.size());
  for (const auto& lat : lattices) {
    auto it = by_id.find(lat.utt_id);
    if (it == by_id.end()) {
      missing.push_back(lat.utt_id);
      matched.push_back(nullptr);
    } else {
      matched.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    throw InputError("no context entry for: " + JoinIds(missing));
  }

  return ParallelMap(lattices.size(), config.workers, [&](std::size_t i) {
    const WordLattice& lat = lattices[i];
    const UtteranceContext& ctx = *matched[i];
    RescoredUtterance result;
    if (ctx.empty()) {
      result.lattice = lat;
    } else {
      const PhraseSet ngrams = CollectNgrams(ctx.phrases, config.min_order, config.max_order);
      result.lattice = Rescore(lat, BiasingAutomaton(ngrams, discount));
      result.biased = true;
    }
    result.best = BestPath(result.lattice, config.acoustic_scale);
    return result;
  });
}

Transcripts BestPathTranscripts(const std::vector<RescoredUtterance>& rescored) {
  Transcripts out;
  out.reserve(rescored.size());
  for (const auto& r : rescored) out.emplace_back(r.lattice.utt_id, r.best.words);
  return out;
}

void RunRescore(const PipelineConfig& config, std::ostream& out, std::ostream& diag) {
  config.Validate();
  auto lattices_in = OpenInput(config.lattices, "lattice file");
  auto contexts_in = OpenInput(config.contexts, "context file");
  const auto lattices = ParseLattices(lattices_in);
  const auto contexts = ReadContexts(contexts_in);

  const auto rescored = RescoreCorpus(lattices, contexts, config, config.discount);
  if (config.emit == EmitMode::kLattices) {
    for (const auto& r : rescored) out << SerializeLattice(r.lattice);
  } else {
    WriteTranscripts(BestPathTranscripts(rescored), out);
  }
  std::size_t biased = 0;
  for (const auto& r : rescored) biased += r.biased ? 1 : 0;
  diag << "rescore: " << rescored.size() << " utterances, " << biased
       << " biased, " << rescored.size() - biased << " passed through\n";
}

CorpusScore ScoreCorpus(const Transcripts& refs, const Transcripts& hyps,
                        const std::optional<Transcripts>& callsigns) {
  std::map<std::string, const Tokens*> hyp_by_id;
  for (const auto& [id, words] : hyps) hyp_by_id.emplace(id, &words);
  std::map<std::string, const Tokens*> cs_by_id;
  if (callsigns) {
    for (const auto& [id, words] : *callsigns) cs_by_id.emplace(id, &words);
  }
  std::set<std::string> ref_ids;
  for (const auto& [id, words] : refs) ref_ids.insert(id);

  std::vector<std::string> problems;
  std::vector<std::string> ids;
  for (const auto& [id, words] : refs) {
    if (!hyp_by_id.count(id)) ids.push_back(id);
  }
  if (!ids.empty()) problems.push_back("missing from hypotheses: " + JoinIds(ids));
  ids.clear();
  for (const auto& [id, words] : hyps) {
    if (!ref_ids.count(id)) ids.push_back(id);
  }
  if (!ids.empty()) problems.push_back("missing from references: " + JoinIds(ids));
  ids.clear();
  if (callsigns) {
    for (const auto& [id, words] : *callsigns) {
      if (!ref_ids.count(id)) ids.push_back(id);
    }
  }
  if (!ids.empty()) problems.push_back("callsign entries without reference: " + JoinIds(ids));
  if (!problems.empty()) {
    std::string msg = "utterance id mismatch";
    for (const auto& p : problems) msg += "; " + p;
    throw InputError(msg);
  }

  CorpusScore score;
  score.has_callsigns = callsigns.has_value();
  for (const auto& [id, ref] : refs) {
    const Tokens& hyp = *hyp_by_id.at(id);
    ScoreReport report;
    try {
      report = Wer(ref, hyp);
    } catch (const InputError& e) {
      throw InputError("utterance '" + id + "': " + e.what());
    }
    report.utt_id = id;
    if (callsigns) {
      auto cs = cs_by_id.find(id);
      if (cs == cs_by_id.end()) {
        report.skipped.push_back({id, kSkipNoCallsignEntry});
      } else {
        if (cs->second->empty()) {
          throw InputError("utterance '" + id + "': empty callsign");
        }
        ScoreReport ca = CaWer(ref, hyp, *cs->second);
        report.ca_wer = ca.ca_wer;
        report.ca_utterances = ca.ca_utterances;
        for (auto& skip : ca.skipped) report.skipped.push_back({id, skip.reason});
      }
    }
    score.utterances.push_back(std::move(report));
  }
  score.total = Aggregate(score.utterances);
  return score;
}

std::string ScoreReportJson(const CorpusScore& score) {
  nlohmann::ordered_json j;
  j["utterances"] = score.total.utterances;
  j["wer"] = TallyJson(score.total.wer);
  if (score.has_callsigns) {
    j["ca_wer"] = TallyJson(score.total.ca_wer);
    j["ca_wer"]["utterances"] = score.total.ca_utterances;
  }
  j["skipped"] = nlohmann::ordered_json::array();
  for (const auto& s : score.total.skipped) {
    j["skipped"].push_back({{"utt_id", s.utt_id}, {"reason", s.reason}});
  }
  j["per_utterance"] = nlohmann::ordered_json::array();
  for (const auto& r : score.utterances) {
    nlohmann::ordered_json u;
    u["utt_id"] = r.utt_id;
    u["wer"] = TallyJson(r.wer);
    if (score.has_callsigns) {
      u["ca_wer"] = r.ca_utterances ? TallyJson(r.ca_wer) : nlohmann::ordered_json();
    }
    j["per_utterance"].push_back(std::move(u));
  }
  return j.dump(2);
}

std::string ScoreReportTable(const CorpusScore& score) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %6s %9s %6s %6s %6s %7s %9s\n", "metric",
                "utts", "ref_words", "sub", "del", "ins", "errors", "rate");
  out << line;
  auto row = [&](const char* name, std::size_t utts, const ErrorTally& t) {
    std::snprintf(line, sizeof(line), "%-8s %6zu %9zu %6zu %6zu %6zu %7zu %9s\n", name,
                  utts, t.ref_length, t.substitutions, t.deletions, t.insertions,
                  t.Errors(), FormatRate(t.Rate()).c_str());
    out << line;
  };
  row("WER", score.total.utterances, score.total.wer);
  if (score.has_callsigns) row("CA-WER", score.total.ca_utterances, score.total.ca_wer);
  std::map<std::string, std::size_t> reasons;
  for (const auto& s : score.total.skipped) ++reasons[s.reason];
  out << "skipped: " << score.total.skipped.size();
  if (!reasons.empty()) {
    out << " (";
    bool first = true;
    for (const auto& [reason, n] : reasons) {
      out << (first ? "" : ", ") << reason << ": " << n;
      first = false;
    }
    out << ")";
  }
  out << '\n';
  return out.str();
}

CorpusScore RunScore(const PipelineConfig& config, std::ostream& out,
                     const std::optional<std::filesystem::path>& json_path) {
  auto refs_in = OpenInput(config.refs, "reference file");
  auto hyps_in = OpenInput(config.hyps, "hypothesis file");
  const auto refs = LoadTranscripts(refs_in);
  const auto hyps = LoadTranscripts(hyps_in);
  std::optional<Transcripts> callsigns;
  if (!config.callsigns.empty()) {
    auto cs_in = OpenInput(config.callsigns, "callsign file");
    callsigns = LoadTranscripts(cs_in);
  }
  CorpusScore score = ScoreCorpus(refs, hyps, callsigns);
  out << ScoreReportTable(score);
  if (json_path) {
    std::ofstream json_out(*json_path);
    if (!json_out) throw InputError("cannot write '" + json_path->string() + "'");
    json_out << ScoreReportJson(score) << '\n';
  }
  return score;
}

std::vector<SweepRow> Sweep(const std::vector<WordLattice>& lattices,
                            const std::vector<UtteranceContext>& contexts,
                            const Transcripts& refs, const Transcripts& callsigns,
                            const std::vector<double>& discounts,
                            const PipelineConfig& config, std::ostream& diag) {
  std::vector<double> unique;
  for (double d : discounts) {
    RequireNonNegative(d, "discount");
    if (std::find(unique.begin(), unique.end(), d) != unique.end()) {
      diag << "warning: duplicate discount " << FormatDouble(d) << " ignored\n";
      continue;
    }
    unique.push_back(d);
  }
  std::vector<SweepRow> rows;
  for (double d : unique) {
    const auto hyps = BestPathTranscripts(RescoreCorpus(lattices, contexts, config, d));
    const CorpusScore score = ScoreCorpus(refs, hyps, callsigns);
    rows.push_back({d, score.total.wer.Rate(), score.total.ca_wer.Rate(),
                    score.total.skipped.size()});
  }
  return rows;
}

std::string FormatSweep(const std::vector<SweepRow>& rows) {
  std::string out = "d\twer\tca_wer\tskipped\n";
  for (const auto& r : rows) {
    out += FormatDouble(r.discount) + '\t' + FormatRate(r.wer) + '\t' +
           FormatRate(r.ca_wer) + '\t' + std::to_string(r.skipped) + '\n';
  }
  return out;
}

void RunSweep(const PipelineConfig& config, const std::vector<double>& discounts,
              std::ostream& out, std::ostream& diag) {
  config.Validate();
  if (discounts.empty()) throw InputError("no discounts given");
  auto lattices_in = OpenInput(config.lattices, "lattice file");
  auto contexts_in = OpenInput(config.contexts, "context file");
  auto refs_in = OpenInput(config.refs, "reference file");
  auto cs_in = OpenInput(config.callsigns, "callsign file");
  const auto lattices = ParseLattices(lattices_in);
  const auto contexts = ReadContexts(contexts_in);
  const auto refs = LoadTranscripts(refs_in);
  const auto callsigns = LoadTranscripts(cs_in);
  out << FormatSweep(Sweep(lattices, contexts, refs, callsigns, discounts, config, diag));
}

}  // namespace ctxbias
