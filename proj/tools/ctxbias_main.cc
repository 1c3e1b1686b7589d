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

// ctxbias: contextual callsign biasing of ASR lattices.
//
//   ctxbias context   --surveillance s.csv --meta m.csv --airlines a.tsv
//   ctxbias verbalize --airlines a.tsv [--niner] DLH72W RYR1LD
//   ctxbias rescore   --lattices l.txt --contexts c.jsonl [--emit text|lattices]
//   ctxbias score     --refs r.txt --hyps h.txt [--callsigns cs.txt] [--json out]
//   ctxbias sweep     --lattices l.txt --contexts c.jsonl --refs r.txt
//                     --callsigns cs.txt --discounts 0,2,4,5,6
//
// Data goes to stdout (or --output), diagnostics to stderr.
// Exit status: 0 ok, 1 bad input, 2 internal error.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ctxbias/callsign.h"
#include "ctxbias/errors.h"
#include "ctxbias/pipeline.h"

namespace {

using ctxbias::InputError;
using ctxbias::PipelineConfig;

std::optional<std::size_t> ParseMaxOrder(const std::string& text) {
  if (text == "all") return std::nullopt;
  auto value = ctxbias::ParseInt(text);
  if (!value || *value < 1) {
    throw InputError("--max-order must be a positive integer or 'all'");
  }
  return static_cast<std::size_t>(*value);
}

std::vector<double> ParseDiscounts(const std::string& text) {
  std::vector<double> out;
  for (const auto& field : ctxbias::SplitFields(text, ',')) {
    auto value = ctxbias::ParseDouble(field);
    if (!value) throw InputError("bad discount '" + field + "'");
    out.push_back(*value);
  }
  return out;
}

// Output sink: the named file, or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual callsign biasing of ASR word lattices"};
  app.require_subcommand(1);

  PipelineConfig config;
  std::string max_order = "all";
  std::string emit = "text";
  std::string output;
  std::string discounts = "0,1,2,3,4,5,6,7,8";
  std::string json_path;
  std::vector<std::string> raw_callsigns;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", output, "Write data here instead of stdout");
  };
  auto add_biasing = [&](CLI::App* cmd) {
    cmd->add_option("--discount", config.discount, "Cost bonus per matched n-gram")
        ->capture_default_str();
    cmd->add_option("--min-order", config.min_order, "Smallest boosted n-gram order")
        ->capture_default_str();
    cmd->add_option("--max-order", max_order, "Largest n-gram order or 'all'")
        ->capture_default_str();
    cmd->add_option("--acoustic-scale", config.acoustic_scale,
                    "Weight of acoustic cost in path selection")
        ->capture_default_str();
    cmd->add_option("--workers", config.workers, "Worker threads")->capture_default_str();
  };

  auto* context = app.add_subcommand("context", "Build per-utterance callsign contexts");
  context->add_option("--surveillance", config.surveillance, "callsign,time,lat,lon CSV")
      ->required();
  context->add_option("--meta", config.meta, "utt_id,time,lat,lon CSV")->required();
  context->add_option("--airlines", config.airlines, "DESIGNATOR<TAB>telephony TSV")
      ->required();
  context->add_flag("--niner", config.niner, "Also read 9 as 'niner'");
  context->add_option("--window-s", config.window_s, "Half time window in seconds")
      ->capture_default_str();
  context->add_option("--radius-deg", config.radius_deg, "Box half-width in degrees")
      ->capture_default_str();
  add_output(context);

  auto* verbalize = app.add_subcommand("verbalize", "Print spoken variants of callsigns");
  verbalize->add_option("--airlines", config.airlines, "DESIGNATOR<TAB>telephony TSV")
      ->required();
  verbalize->add_flag("--niner", config.niner, "Also read 9 as 'niner'");
  verbalize->add_option("callsigns", raw_callsigns, "ICAO callsigns")->required();
  add_output(verbalize);

  auto* rescore = app.add_subcommand("rescore", "Bias lattices towards their contexts");
  rescore->add_option("--lattices", config.lattices, "Lattice text file")->required();
  rescore->add_option("--contexts", config.contexts, "Context JSON lines")->required();
  rescore->add_option("--emit", emit, "text or lattices")
      ->check(CLI::IsMember({"text", "lattices"}))
      ->capture_default_str();
  add_biasing(rescore);
  add_output(rescore);

  auto* score = app.add_subcommand("score", "WER and callsign WER");
  score->add_option("--refs", config.refs, "Reference transcripts")->required();
  score->add_option("--hyps", config.hyps, "Hypothesis transcripts")->required();
  score->add_option("--callsigns", config.callsigns, "Reference callsign per utterance");
  score->add_option("--json", json_path, "Also write the report as JSON here");
  add_output(score);

  auto* sweep = app.add_subcommand("sweep", "Score a range of discounts");
  sweep->add_option("--lattices", config.lattices, "Lattice text file")->required();
  sweep->add_option("--contexts", config.contexts, "Context JSON lines")->required();
  sweep->add_option("--refs", config.refs, "Reference transcripts")->required();
  sweep->add_option("--callsigns", config.callsigns, "Reference callsign per utterance")
      ->required();
  sweep->add_option("--discounts", discounts, "Comma-separated discounts")
      ->capture_default_str();
  add_biasing(sweep);
  add_output(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    config.max_order = ParseMaxOrder(max_order);
    config.emit = emit == "lattices" ? ctxbias::EmitMode::kLattices
                                     : ctxbias::EmitMode::kText;
    config.Validate();
    Output out(output);

    if (*context) {
      ctxbias::RunContext(config, out.stream(), std::cerr);
    } else if (*verbalize) {
      auto in = ctxbias::OpenInput(config.airlines, "airline table");
      std::vector<std::string> warnings;
      const auto table = ctxbias::LoadAirlineTable(in, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      ctxbias::VerbalizeOptions options;
      options.niner = config.niner;
      for (const auto& raw : raw_callsigns) {
        const auto cs = ctxbias::ParseIcao(raw);
        for (const auto& phrase : ctxbias::Verbalize(cs, table, options)) {
          out.stream() << cs.raw << '\t' << phrase.Text() << '\n';
        }
      }
    } else if (*rescore) {
      ctxbias::RunRescore(config, out.stream(), std::cerr);
    } else if (*score) {
      std::optional<std::filesystem::path> json;
      if (!json_path.empty()) json = json_path;
      ctxbias::RunScore(config, out.stream(), json);
    } else if (*sweep) {
      ctxbias::RunSweep(config, ParseDiscounts(discounts), out.stream(), std::cerr);
    }
    out.stream().flush();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
