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

#ifndef CTXBIAS_ERRORS_H_
#define CTXBIAS_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctxbias {

/// Bad or inconsistent user input (files, flags). The CLI maps it to exit 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input error tied to a line (or CSV row) of a text stream.
class ParseError : public InputError {
 public:
  enum class Kind {
    kMalformed,
    kCycle,
    kEpsilon,
    kUnknownState,
    kDuplicateId,
    kOutOfRange,
  };

  ParseError(Kind kind, std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

/// An internal invariant did not hold. The CLI maps it to exit 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ctxbias

#endif  // CTXBIAS_ERRORS_H_
