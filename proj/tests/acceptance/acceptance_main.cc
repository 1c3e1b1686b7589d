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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "ctxbias/biasing.h"
#include "ctxbias/lattice.h"
#include "ctxbias/metrics.h"
#include "ctxbias/pipeline.h"
#include "support/metric_cases.h"
#include "support/oracles.h"
#include "support/synthetic_corpus.h"

#ifndef CTXBIAS_CLI_PATH
#error "CTXBIAS_CLI_PATH must name the ctxbias executable"
#endif

namespace ctxbias {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (pass) detail = why;  // keep the first failure
    pass = false;
  }
};

PhraseSet ToSet(const std::vector<Tokens>& phrases) {
  PhraseSet set;
  for (const auto& p : phrases) set.Add(p);
  return set;
}

const std::vector<std::string> kVocab = {"a", "b", "c", "d"};

Outcome RescoreOracle() {
  Outcome out;
  const auto t0 = Clock::now();
  testing::Rng rng(1001);
  const double discounts[] = {0, 1, 2, 5};
  int n = 0;
  for (int i = 0; i < 1000; ++i) {
    const WordLattice lat = testing::RandomLattice(rng, 8, 14, kVocab);
    const auto phrases = testing::RandomPhrases(rng, 6, 3, kVocab);
    const double d = discounts[i % 4];
    const auto best = BestPath(Rescore(lat, BiasingAutomaton(ToSet(phrases), d)));
    const auto paths = testing::BruteForceRescore(lat, phrases, d, 1.0);
    const auto& expect = testing::BruteForceBest(paths);
    ++n;
    if (best.words != expect.words) {
      out.Fail("case " + std::to_string(i) + ": path '" + Join(best.words) + "' vs '" +
               Join(expect.words) + "'");
    } else if (std::abs(best.combined_cost - expect.combined_cost) > 1e-9 ||
               std::abs(best.graph_cost - expect.graph_cost) > 1e-9 ||
               std::abs(best.acoustic_cost - expect.acoustic_cost) > 1e-9) {
      out.Fail("case " + std::to_string(i) + ": cost mismatch");
    }
  }
  const double secs = Seconds(t0);
  if (secs >= 30.0) out.Fail("runtime " + std::to_string(secs) + " s");
  if (out.pass) out.detail = std::to_string(n) + " cases in " + std::to_string(secs) + " s";
  return out;
}

Outcome MatcherOracle() {
  Outcome out;
  testing::Rng rng(2002);
  for (int i = 0; i < 1000; ++i) {
    const auto phrases = testing::RandomPhrases(rng, 6, 4, kVocab);
    const Tokens words = testing::RandomWords(rng, 0, 15, kVocab);
    const std::size_t occ = BiasingAutomaton(ToSet(phrases), 1.0).Score(words).occurrences;
    const std::size_t naive = testing::NaiveOccurrences(phrases, words);
    if (occ != naive) {
      out.Fail("case " + std::to_string(i) + ": " + std::to_string(occ) + " vs " +
               std::to_string(naive));
    }
  }
  if (out.pass) out.detail = "1000 pairs";
  return out;
}

Outcome Monotonicity() {
  Outcome out;
  testing::Rng rng(3003);
  for (int i = 0; i < 200; ++i) {
    const WordLattice lat = testing::RandomLattice(rng, 8, 14, kVocab);
    const auto phrases = testing::RandomPhrases(rng, 6, 3, kVocab);
    const PhraseSet set = ToSet(phrases);
    std::size_t last = 0;
    for (double d : {0.0, 1.0, 2.0, 4.0, 5.0, 6.0, 8.0}) {
      const auto best = BestPath(Rescore(lat, BiasingAutomaton(set, d)));
      const std::size_t occ = testing::NaiveOccurrences(phrases, best.words);
      if (occ < last) {
        out.Fail("lattice " + std::to_string(i) + " at d=" + FormatDouble(d));
      }
      last = occ;
    }
  }
  if (out.pass) out.detail = "200 lattices x 7 discounts";
  return out;
}

Outcome MetricCorrectness() {
  Outcome out;
  const auto& cases = testing::CaWerCases();
  for (const auto& c : cases) {
    const auto r = CaWer(SplitWhitespace(c.ref), SplitWhitespace(c.hyp),
                         SplitWhitespace(c.callsign));
    if (c.absent) {
      if (r.ca_utterances != 0 || r.skipped.size() != 1 ||
          r.skipped[0].reason != kSkipCallsignAbsent) {
        out.Fail(std::string(c.name) + ": expected a skip");
      }
      continue;
    }
    const auto rate = r.ca_wer.Rate();
    if (r.ca_wer.substitutions != c.subs || r.ca_wer.deletions != c.dels ||
        r.ca_wer.insertions != c.ins || !rate ||
        std::abs(*rate - c.ca_wer) > 1e-12) {
      out.Fail(std::string(c.name) + ": counts differ");
    }
  }
  if (cases.size() < 20) out.Fail("only " + std::to_string(cases.size()) + " crafted cases");

  testing::Rng rng(4004);
  for (int i = 0; i < 500; ++i) {
    const Tokens ref = testing::RandomWords(rng, 0, 10, kVocab);
    const Tokens hyp = testing::RandomWords(rng, 0, 10, kVocab);
    if (Align(ref, hyp).Cost() != testing::EditDistance(ref, hyp)) {
      out.Fail("random pair " + std::to_string(i) + ": align cost differs");
    }
  }
  if (out.pass) out.detail = std::to_string(cases.size()) + " crafted + 500 random";
  return out;
}

// Contexts for a synthetic corpus written to `dir`, built by the library.
std::vector<UtteranceContext> SyntheticContexts(const fs::path& dir) {
  PipelineConfig config;
  config.surveillance = dir / "surveillance.csv";
  config.meta = dir / "meta.csv";
  config.airlines = dir / "airlines.tsv";
  std::ostringstream json, diag;
  RunContext(config, json, diag);
  std::istringstream in(json.str());
  return ReadContexts(in);
}

Outcome SyntheticShape(const fs::path& work) {
  Outcome out;
  const auto t0 = Clock::now();
  const auto corpus = testing::MakeSyntheticCorpus(5005, 200);
  const fs::path dir = work / "shape";
  testing::WriteSyntheticCorpus(corpus, dir);
  const auto contexts = SyntheticContexts(dir);
  std::ostringstream diag;
  const auto rows = Sweep(corpus.lattices, contexts, corpus.refs, corpus.callsigns,
                          {0, 4, 5, 6}, PipelineConfig{}, diag);
  const double secs = Seconds(t0);
  if (rows.size() != 4 || !rows[0].ca_wer || !rows[1].ca_wer || !rows[2].ca_wer ||
      !rows[3].ca_wer) {
    out.Fail("missing CA-WER values");
    return out;
  }
  const double c0 = *rows[0].ca_wer, c4 = *rows[1].ca_wer, c5 = *rows[2].ca_wer,
               c6 = *rows[3].ca_wer;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "CA-WER d=0 %.4f, d=4 %.4f, d=5 %.4f, d=6 %.4f; %.2f s",
                c0, c4, c5, c6, secs);
  out.detail = buf;
  if (!(c5 < c0)) out.Fail(std::string("not improved at d=5: ") + buf);
  if (!(c5 <= c4 && c6 <= c5)) out.Fail(std::string("increases over 4..6: ") + buf);
  if (secs >= 10.0) out.Fail(std::string("too slow: ") + buf);
  return out;
}

Outcome DefaultsFidelity() {
  Outcome out;
  const PipelineConfig config;
  if (config.discount != 2.0) out.Fail("default discount " + FormatDouble(config.discount));
  if (kDefaultDiscount != 2.0) out.Fail("kDefaultDiscount " + FormatDouble(kDefaultDiscount));
  if (kRecommendedDiscount != 5.0) {
    out.Fail("kRecommendedDiscount " + FormatDouble(kRecommendedDiscount));
  }
  if (out.pass) out.detail = "default 2, recommended 5";
  return out;
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int Run(const std::string& command) {
  return std::system(command.c_str());
}

Outcome SweepDeterminism(const fs::path& work) {
  Outcome out;
  const fs::path dir = work / "determinism";
  testing::WriteSyntheticCorpus(testing::MakeSyntheticCorpus(6006, 200), dir);
  const std::string cli = std::string("\"") + CTXBIAS_CLI_PATH + "\"";
  auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };

  if (Run(cli + " context --surveillance " + q(dir / "surveillance.csv") + " --meta " +
          q(dir / "meta.csv") + " --airlines " + q(dir / "airlines.tsv") + " -o " +
          q(dir / "contexts.jsonl") + " 2>/dev/null") != 0) {
    out.Fail("context command failed");
    return out;
  }
  const std::string sweep = cli + " sweep --lattices " + q(dir / "lattices.txt") +
                            " --contexts " + q(dir / "contexts.jsonl") + " --refs " +
                            q(dir / "refs.txt") + " --callsigns " + q(dir / "callsigns.txt");
  if (Run(sweep + " --workers 1 > " + q(dir / "w1.tsv") + " 2>/dev/null") != 0 ||
      Run(sweep + " --workers 8 > " + q(dir / "w8.tsv") + " 2>/dev/null") != 0) {
    out.Fail("sweep command failed");
    return out;
  }
  const std::string a = ReadAll(dir / "w1.tsv"), b = ReadAll(dir / "w8.tsv");
  if (a.empty()) out.Fail("empty sweep output");
  if (a != b) out.Fail("outputs differ");
  if (out.pass) out.detail = std::to_string(a.size()) + " identical bytes";
  return out;
}

}  // namespace
}  // namespace ctxbias

int main() {
  using namespace ctxbias;
  const fs::path work = fs::temp_directory_path() / "ctxbias_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"rescoring oracle equivalence", RescoreOracle},
      {"matcher equivalence", MatcherOracle},
      {"discount monotonicity", Monotonicity},
      {"metric correctness", MetricCorrectness},
      {"synthetic corpus CA-WER shape", [&] { return SyntheticShape(work); }},
      {"defaults fidelity", DefaultsFidelity},
      {"sweep determinism across worker counts", [&] { return SweepDeterminism(work); }},
  };

  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.Fail(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name;
    if (!o.detail.empty()) std::cout << "  (" << o.detail << ")";
    std::cout << '\n';
  }
  std::cout << (failed ? "FAILED: " : "ALL PASSED: ") << failed << " of "
            << std::size(criteria) << " criteria failed\n";
  fs::remove_all(work);
  return failed ? 1 : 0;
}
