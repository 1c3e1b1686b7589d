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

#include "ctxbias/callsign.h"

#include <array>
#include <istream>
#include <set>

#include "ctxbias/errors.h"

namespace ctxbias {

namespace {

const std::array<std::string, 26> kNato = {
    "alfa",   "bravo",   "charlie", "delta",  "echo",    "foxtrot", "golf",
    "hotel",  "india",   "juliett", "kilo",   "lima",    "mike",    "november",
    "oscar",  "papa",    "quebec",  "romeo",  "sierra",  "tango",   "uniform",
    "victor", "whiskey", "x-ray",   "yankee", "zulu"};

const std::array<std::string, 10> kDigits = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine"};

const std::string kNiner(kNinerWord);

bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

// Speaks each character of `chars`; 9 becomes "niner" when `niner` is set.
void SpellInto(std::string_view chars, bool niner, Tokens& out) {
  for (char c : chars) {
    if (IsDigit(c)) {
      out.push_back(c == '9' && niner ? kNiner : DigitWord(c));
    } else {
      out.push_back(NatoWord(c));
    }
  }
}

}  // namespace

const std::string& NatoWord(char letter) {
  if (!IsUpper(letter)) throw InputError(std::string("not a letter: ") + letter);
  return kNato[letter - 'A'];
}

const std::string& DigitWord(char digit) {
  if (!IsDigit(digit)) throw InputError(std::string("not a digit: ") + digit);
  return kDigits[digit - '0'];
}

IcaoCallsign ParseIcao(std::string_view raw) {
  const std::string upper = ToUpper(Trim(raw));
  if (upper.size() < 2 || upper.size() > 8) {
    throw InputError("callsign '" + std::string(raw) +
                     "' must have 2 to 8 characters");
  }
  for (char c : upper) {
    if (!IsUpper(c) && !IsDigit(c)) {
      throw InputError("callsign '" + std::string(raw) +
                       "' contains characters outside [A-Z0-9]");
    }
  }
  IcaoCallsign cs;
  cs.raw = upper;
  // Registrations (letters then a digit within the first three characters,
  // e.g. N123AB) fail the letter test and stay designator-free.
  const bool has_designator = upper.size() > 3 && IsUpper(upper[0]) &&
                              IsUpper(upper[1]) && IsUpper(upper[2]);
  if (has_designator) {
    cs.designator = upper.substr(0, 3);
    cs.suffix = upper.substr(3);
  } else {
    cs.suffix = upper;
  }
  return cs;
}

void AirlineTable::Set(const std::string& designator, Tokens telephony) {
  entries_[designator] = std::move(telephony);
}

const Tokens* AirlineTable::Find(const std::string& designator) const {
  auto it = entries_.find(designator);
  return it == entries_.end() ? nullptr : &it->second;
}

AirlineTable LoadAirlineTable(std::istream& in, std::vector<std::string>* warnings) {
  AirlineTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(ParseError::Kind::kMalformed, line_no,
                       "expected DESIGNATOR<TAB>telephony");
    }
    const std::string key(Trim(std::string_view(line).substr(0, tab)));
    if (key.size() != 3 || !IsUpper(key[0]) || !IsUpper(key[1]) || !IsUpper(key[2])) {
      throw ParseError(ParseError::Kind::kMalformed, line_no,
                       "bad airline designator '" + key + "'");
    }
    Tokens words = SplitWhitespace(ToLower(std::string_view(line).substr(tab + 1)));
    if (words.empty()) {
      throw ParseError(ParseError::Kind::kMalformed, line_no,
                       "empty telephony for " + key);
    }
    if (table.Find(key) != nullptr && warnings != nullptr) {
      warnings->push_back("line " + std::to_string(line_no) + ": designator " +
                          key + " redefined");
    }
    table.Set(key, std::move(words));
  }
  return table;
}

std::vector<VerbalizedPhrase> Verbalize(const IcaoCallsign& callsign,
                                        const AirlineTable& table,
                                        const VerbalizeOptions& options) {
  std::vector<Tokens> airline_parts;
  if (callsign.designator) {
    if (const Tokens* telephony = table.Find(*callsign.designator)) {
      airline_parts.push_back(*telephony);
    }
    Tokens spelled;
    SpellInto(*callsign.designator, false, spelled);
    airline_parts.push_back(std::move(spelled));
  } else {
    airline_parts.emplace_back();
  }

  std::vector<Tokens> tails;
  tails.emplace_back();
  SpellInto(callsign.suffix, false, tails.back());
  if (options.niner && callsign.suffix.find('9') != std::string::npos) {
    tails.emplace_back();
    SpellInto(callsign.suffix, true, tails.back());
  }

  std::vector<VerbalizedPhrase> out;
  std::set<Tokens> seen;
  for (const auto& head : airline_parts) {
    for (const auto& tail : tails) {
      Tokens words = head;
      words.insert(words.end(), tail.begin(), tail.end());
      if (seen.insert(words).second) out.push_back({std::move(words)});
    }
  }
  return out;
}

std::vector<VerbalizedPhrase> BuildContextPhrases(
    const std::vector<IcaoCallsign>& callsigns, const AirlineTable& table,
    const VerbalizeOptions& options) {
  std::vector<VerbalizedPhrase> out;
  std::set<Tokens> seen;
  for (const auto& cs : callsigns) {
    for (auto& phrase : Verbalize(cs, table, options)) {
      if (seen.insert(phrase.words).second) out.push_back(std::move(phrase));
    }
  }
  return out;
}

}  // namespace ctxbias
