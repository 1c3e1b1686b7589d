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

#ifndef CTXBIAS_CALLSIGN_H_
#define CTXBIAS_CALLSIGN_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxbias/text_util.h"

namespace ctxbias {

/// ICAO-format callsign, e.g. "DLH72W" = designator "DLH" + suffix "72W".
/// Registrations such as "N123AB" carry no designator.
struct IcaoCallsign {
  std::string raw;
  std::optional<std::string> designator;
  std::string suffix;

  bool operator==(const IcaoCallsign&) const = default;
};

/// Upper-cases and splits `raw`. A designator is recognised iff the first
/// three characters are letters and at least one character follows.
/// Throws InputError on characters outside [A-Z0-9] or a length outside 2..8.
IcaoCallsign ParseIcao(std::string_view raw);

/// ICAO designator -> telephony words ("DLH" -> {"lufthansa"}).
class AirlineTable {
 public:
  /// Later entries for a designator replace earlier ones.
  void Set(const std::string& designator, Tokens telephony);
  const Tokens* Find(const std::string& designator) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Tokens>& entries() const { return entries_; }

 private:
  std::map<std::string, Tokens> entries_;
};

/// Reads `DESIGNATOR<TAB>telephony words` lines. Blank lines and lines
/// starting with '#' are skipped. Duplicate designators override and append
/// a message to `warnings` when it is non-null.
AirlineTable LoadAirlineTable(std::istream& in,
                              std::vector<std::string>* warnings = nullptr);

struct VerbalizeOptions {
  /// Also emit the variant that reads every 9 as "niner".
  bool niner = false;
};

struct VerbalizedPhrase {
  Tokens words;

  std::string Text() const { return Join(words); }
  bool operator==(const VerbalizedPhrase&) const = default;
};

/// Spoken word for an uppercase letter / a digit.
const std::string& NatoWord(char letter);
const std::string& DigitWord(char digit);
inline constexpr std::string_view kNinerWord = "niner";

/// Spoken variants of one callsign: telephony name (if the designator is in
/// `table`) then letter-by-letter designator, each with digits read one by
/// one ("nine" variant before "niner"). Deduplicated.
std::vector<VerbalizedPhrase> Verbalize(const IcaoCallsign& callsign,
                                        const AirlineTable& table,
                                        const VerbalizeOptions& options = {});

/// Union of Verbalize over `callsigns`, deduplicated, in callsign order.
std::vector<VerbalizedPhrase> BuildContextPhrases(
    const std::vector<IcaoCallsign>& callsigns, const AirlineTable& table,
    const VerbalizeOptions& options = {});

}  // namespace ctxbias

#endif  // CTXBIAS_CALLSIGN_H_
