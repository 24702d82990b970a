// Copyright 2026 The LVW Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lvw {

// Base of every error raised by the library. The CLI maps these to exit
// code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A text input did not conform to its file format.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// An enumeration would exceed its state-space cap.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// An identifier did not resolve in a registry (constraints, properties,
// guard languages, variation points).
class UnknownIdError : public Error {
 public:
  using Error::Error;
};

}  // namespace lvw
