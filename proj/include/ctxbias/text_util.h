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

#ifndef CTXBIAS_TEXT_UTIL_H_
#define CTXBIAS_TEXT_UTIL_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctxbias {

using Tokens = std::vector<std::string>;

/// Splits on runs of ASCII whitespace; never yields empty tokens.
Tokens SplitWhitespace(std::string_view line);

/// Splits on a single delimiter character, keeping empty fields.
std::vector<std::string> SplitFields(std::string_view line, char delim);

std::string_view Trim(std::string_view s);
std::string ToLower(std::string_view s);
std::string ToUpper(std::string_view s);
std::string Join(const Tokens& tokens, std::string_view sep = " ");

/// Strict number parsing: the whole field must be consumed.
std::optional<double> ParseDouble(std::string_view s);
std::optional<long long> ParseInt(std::string_view s);

/// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace ctxbias

#endif  // CTXBIAS_TEXT_UTIL_H_
